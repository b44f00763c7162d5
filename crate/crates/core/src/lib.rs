//! Epidemic spread on synthetic social networks.
//!
//! The pipeline generates scale-free graphs (Barabási–Albert and Holme–Kim),
//! ranks nodes by one of seven centrality measures, cuts every link of the
//! top-ranked fraction, and compares the infection curve of a deterministic
//! susceptible–infected cascade before and after. With transmission
//! probability one the cascade is exactly breadth-first layering, so an
//! infection curve is a histogram of shortest-path distances.
//!
//! ```
//! use epicurve::{epidemic, generators, graph::Graph};
//!
//! let g = generators::barabasi_albert(&generators::GeneratorParams::new(50, 2, 7)).unwrap();
//! let sources: Vec<_> = g.nodes().collect();
//! let curve = epidemic::aggregate_curve(&g, &sources).unwrap();
//! assert_eq!(curve.total_pairs(), 50 * 50);
//! ```

pub mod centrality;
pub mod cli;
pub mod epidemic;
mod error;
pub mod experiment;
pub mod generators;
pub mod graph;

pub use error::{Error, Result};
