//! Command-line front end. Each command parses flags, calls into the library
//! and formats the result; no numerics live here.
//!
//! Exit codes: 0 success, 1 usage error, 2 runtime or convergence error,
//! 3 IO or input-format error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::centrality::{self, Measure, SolverSettings};
use crate::epidemic;
use crate::error::Error;
use crate::experiment::{self, ExperimentConfig, ExportFormat};
use crate::generators::{self, GeneratorParams};
use crate::graph::{Graph, NodeId};

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "epicurve", version, about = "Epidemic curves on scale-free networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Ba,
    Hk,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Grow a Barabási–Albert or Holme–Kim graph and write its edge list.
    Generate {
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// Triad probability (Holme–Kim only).
        #[arg(long, default_value_t = 0.0)]
        pt: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the global clustering coefficient of a graph.
    Gcc {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Score every node; CSV rows `node_id,measure,score`.
    Centrality {
        #[arg(long = "in")]
        input: PathBuf,
        /// A measure tag or `all`.
        #[arg(long, default_value = "all")]
        measure: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Aggregated infection curve, optionally after isolating top nodes.
    Curve {
        #[arg(long = "in")]
        input: PathBuf,
        /// `all` or comma-separated node ids.
        #[arg(long, default_value = "all")]
        sources: String,
        #[arg(long = "isolate-top", default_value_t = 0.0)]
        isolate_top: f64,
        #[arg(long, default_value = "degree")]
        by: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cut every edge of the given nodes, or of the top fraction by a measure.
    Isolate {
        #[arg(long = "in")]
        input: PathBuf,
        /// Comma-separated node ids.
        #[arg(long, conflicts_with = "top")]
        nodes: Option<String>,
        #[arg(long)]
        top: Option<f64>,
        #[arg(long, default_value = "degree")]
        by: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full Monte Carlo comparison and write CSV and JSON exports.
    Experiment {
        /// JSON document with ExperimentConfig fields; defaults when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long = "out-dir")]
        out_dir: PathBuf,
    },
}

/// Parses `args` (program name first) and runs the command. Data goes to
/// `stdout`, diagnostics to `stderr`. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParams(_) => EXIT_USAGE,
        Error::Io { .. } | Error::Parse { .. } | Error::Json(_) => EXIT_IO,
        _ => EXIT_RUNTIME,
    }
}

fn execute(command: Command, stdout: &mut dyn Write) -> Result<(), Error> {
    match command {
        Command::Generate { model, n, m, pt, seed, out } => {
            let params = GeneratorParams::new(n, m, seed).with_triad_probability(pt);
            params.validate()?;
            let g = match model {
                Model::Ba => generators::barabasi_albert(&params)?,
                Model::Hk => generators::holme_kim(&params)?,
            };
            emit(out.as_deref(), &g.to_edge_list(), stdout)
        }
        Command::Gcc { input } => {
            let g = Graph::read_edge_list(&input)?;
            let gcc = g.global_clustering_coefficient()?;
            write_out(stdout, &format!("{gcc}\n"))
        }
        Command::Centrality { input, measure, out } => {
            let g = Graph::read_edge_list(&input)?;
            let measures = parse_measures(&measure)?;
            let settings = SolverSettings::default();
            let scores = measures
                .iter()
                .map(|&m| centrality::compute(&g, m, &settings))
                .collect::<Result<Vec<_>, _>>()?;
            let mut csv = String::from("node_id,measure,score\n");
            for v in g.nodes() {
                for s in &scores {
                    csv += &format!("{v},{},{}\n", s.measure, s.values[v]);
                }
            }
            emit(out.as_deref(), &csv, stdout)
        }
        Command::Curve { input, sources, isolate_top, by, out } => {
            let g = Graph::read_edge_list(&input)?;
            let mut sources = parse_sources(&sources, &g)?;
            let by: Measure = by.parse()?;
            let isolated = if isolate_top > 0.0 {
                let scores = centrality::compute(&g, by, &SolverSettings::default())?;
                centrality::top_fraction(&scores, isolate_top)?
            } else if isolate_top == 0.0 {
                Vec::new()
            } else {
                return Err(Error::InvalidParams(format!(
                    "--isolate-top must lie in [0, 1], got {isolate_top}"
                )));
            };
            let g = g.isolate_nodes(&isolated)?;
            sources.retain(|s| !isolated.contains(s));
            let curve = epidemic::aggregate_curve(&g, &sources)?;

            let mut csv = String::from("t,count,normalized\n");
            for (t, (c, p)) in curve.counts.iter().zip(curve.normalized()).enumerate() {
                csv += &format!("{t},{c},{p}\n");
            }
            let mut summary = String::new();
            if !isolated.is_empty() {
                summary += &format!("isolated: {}\n", join_ids(&isolated));
            }
            summary += &format!("sources: {}\n", curve.sources);
            summary += &format!("unreachable: {}\n", curve.unreachable);
            match epidemic::curve_peak(&curve) {
                Ok((t, c)) => summary += &format!("peak: t={t} count={c}\n"),
                Err(_) => summary += "peak: none\n",
            }
            match epidemic::fit_gamma(&curve) {
                Ok(fit) => {
                    summary += &format!("gamma: shape={} scale={} mean={}\n", fit.shape, fit.scale, fit.mean())
                }
                Err(_) => summary += "gamma: degenerate\n",
            }
            match out {
                Some(path) => {
                    write_file(&path, &csv)?;
                    write_out(stdout, &summary)
                }
                None => write_out(stdout, &csv),
            }
        }
        Command::Isolate { input, nodes, top, by, out } => {
            let g = Graph::read_edge_list(&input)?;
            let targets = match (nodes, top) {
                (Some(ids), _) => parse_ids(&ids, &g)?,
                (None, Some(fraction)) => {
                    let scores = centrality::compute(&g, by.parse()?, &SolverSettings::default())?;
                    centrality::top_fraction(&scores, fraction)?
                }
                (None, None) => {
                    return Err(Error::InvalidParams("one of --nodes or --top is required".into()))
                }
            };
            emit(out.as_deref(), &g.isolate_nodes(&targets)?.to_edge_list(), stdout)
        }
        Command::Experiment { config, out_dir } => {
            let config = match config {
                Some(path) => {
                    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
                    ExperimentConfig::from_json(&text)?
                }
                None => ExperimentConfig::default(),
            };
            let result = experiment::run_experiment(&config)?;
            experiment::export(&result, ExportFormat::Csv, &out_dir)?;
            experiment::export(&result, ExportFormat::Json, &out_dir)?;
            write_out(stdout, &experiment::peak_table(&result).to_string())
        }
    }
}

fn parse_measures(s: &str) -> Result<Vec<Measure>, Error> {
    if s == "all" {
        Ok(Measure::ALL.to_vec())
    } else {
        Ok(vec![s.parse()?])
    }
}

fn parse_ids(s: &str, g: &Graph) -> Result<Vec<NodeId>, Error> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let id: NodeId = t
                .parse()
                .map_err(|_| Error::InvalidParams(format!("bad node id {t:?}")))?;
            if id >= g.node_count() {
                return Err(Error::InvalidParams(format!(
                    "node {id} out of range for graph with {} nodes",
                    g.node_count()
                )));
            }
            Ok(id)
        })
        .collect()
}

fn parse_sources(s: &str, g: &Graph) -> Result<Vec<NodeId>, Error> {
    if s == "all" {
        Ok(g.nodes().collect())
    } else {
        parse_ids(s, g)
    }
}

fn join_ids(ids: &[NodeId]) -> String {
    ids.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn emit(out: Option<&Path>, body: &str, stdout: &mut dyn Write) -> Result<(), Error> {
    match out {
        Some(path) => write_file(path, body),
        None => write_out(stdout, body),
    }
}

fn write_file(path: &Path, body: &str) -> Result<(), Error> {
    fs::write(path, body).map_err(|e| Error::io(path, e))
}

fn write_out(stdout: &mut dyn Write, body: &str) -> Result<(), Error> {
    stdout
        .write_all(body.as_bytes())
        .map_err(|e| Error::io("<stdout>", e))
}
