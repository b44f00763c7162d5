use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("node {node} out of range for graph with {n} nodes")]
    OutOfRange { node: usize, n: usize },

    #[error("self-loop on node {0}")]
    SelfLoop(usize),

    #[error("clustering coefficient undefined: no node has degree >= 2")]
    NoTriplets,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error(
        "target clustering {target:.4} outside achievable band [{low:.4}, {high:.4}]"
    )]
    UnreachableTarget { target: f64, low: f64, high: f64 },

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        iterations: usize,
        residual: f64,
        iterate: Vec<f64>,
    },

    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    #[error("degenerate sample: {0}")]
    DegenerateSample(&'static str),

    #[error("curve has no infections after the source step")]
    EmptyCurve,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
