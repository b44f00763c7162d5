//! Monte Carlo comparison of isolation strategies across clustering levels.
//!
//! For every target clustering coefficient the triad probability is
//! calibrated, `replicates` Holme–Kim graphs are grown, and each strategy
//! (no isolation, or isolating the top fraction under one centrality
//! measure) is evaluated on the same graphs. A strategy's curve is the sum
//! of infection histograms over all non-isolated sources of one graph,
//! averaged per time step across replicates; its peak is read off that mean
//! curve.
//!
//! Seeds: level `l` (index in ascending target order) uses
//! `level_seed = split_seed(master_seed, l)`, and graph `r` of that level is
//! grown from `split_seed(level_seed, r)`. Calibration averages graphs
//! `0..max(20, replicates)` of the same stream, so the replicate graphs are
//! the first members of the calibration sample.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::centrality::{self, Measure, SolverSettings};
use crate::epidemic::{self, GammaFit, InfectionCurve};
use crate::error::{Error, Result};
use crate::generators::{self, CalibrationSettings, GeneratorParams};
use crate::graph::{Graph, NodeId};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: usize,
    pub m: usize,
    pub replicates: usize,
    pub gcc_targets: Vec<f64>,
    pub isolation_fraction: f64,
    pub measures: Vec<Measure>,
    pub master_seed: u64,
    pub calibration_tolerance: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n: 200,
            m: 2,
            replicates: 10,
            gcc_targets: vec![0.116, 0.156, 0.186, 0.192],
            isolation_fraction: 0.03,
            measures: Measure::ALL.to_vec(),
            master_seed: 42,
            calibration_tolerance: 0.01,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: ExperimentConfig = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        GeneratorParams::new(self.n, self.m, self.master_seed).validate()?;
        if self.replicates < 1 {
            return Err(Error::InvalidParams("replicates must be >= 1".into()));
        }
        if !(0.0..1.0).contains(&self.isolation_fraction) {
            return Err(Error::InvalidParams(format!(
                "isolation fraction must lie in [0, 1), got {}",
                self.isolation_fraction
            )));
        }
        if self.gcc_targets.is_empty() {
            return Err(Error::InvalidParams("at least one gcc target required".into()));
        }
        if let Some(bad) = self.gcc_targets.iter().find(|g| !(0.0..=1.0).contains(*g)) {
            return Err(Error::InvalidParams(format!("gcc target {bad} outside [0, 1]")));
        }
        if !(self.calibration_tolerance > 0.0) {
            return Err(Error::InvalidParams("calibration tolerance must be positive".into()));
        }
        Ok(())
    }

    /// Baseline first, then the configured measures in canonical order.
    pub fn strategies(&self) -> Vec<Strategy> {
        std::iter::once(Strategy::Baseline)
            .chain(
                Measure::ALL
                    .into_iter()
                    .filter(|m| self.measures.contains(m))
                    .map(Strategy::Isolate),
            )
            .collect()
    }

    /// Targets in ascending order; level indices follow this order.
    pub fn sorted_targets(&self) -> Vec<f64> {
        let mut targets = self.gcc_targets.clone();
        targets.sort_by(f64::total_cmp);
        targets
    }
}

/// What is done to a replicate graph before its curve is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Strategy {
    Baseline,
    Isolate(Measure),
}

impl Strategy {
    pub fn label(self) -> &'static str {
        match self {
            Strategy::Baseline => "None",
            Strategy::Isolate(m) => m.short_label(),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Baseline => f.write_str("none"),
            Strategy::Isolate(m) => f.write_str(m.tag()),
        }
    }
}

impl From<Strategy> for String {
    fn from(s: Strategy) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for Strategy {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        if s == "none" {
            Ok(Strategy::Baseline)
        } else {
            s.parse().map(Strategy::Isolate)
        }
    }
}

/// Replicate-averaged outcome of one strategy at one clustering level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub strategy: Strategy,
    /// Mean number of infections at each time step.
    pub mean_counts: Vec<f64>,
    /// `mean_counts` over its sum for `t >= 1`.
    pub normalized: Vec<f64>,
    pub mean_unreachable: f64,
    /// Mean number of sources (non-isolated nodes) per replicate.
    pub mean_sources: f64,
    pub peak_t: usize,
    pub peak_count: f64,
    pub gamma: Option<GammaFit>,
    /// Nodes cut in each replicate, in selection order.
    pub isolated: Vec<Vec<NodeId>>,
}

impl CellResult {
    pub fn mean_distance(&self) -> Option<f64> {
        let total: f64 = self.mean_counts.iter().skip(1).sum();
        (total > 0.0).then(|| {
            self.mean_counts
                .iter()
                .enumerate()
                .map(|(t, c)| t as f64 * c)
                .sum::<f64>()
                / total
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelResult {
    pub target_gcc: f64,
    pub triad_probability: f64,
    /// Sample-mean clustering of the calibration graphs.
    pub calibrated_gcc: f64,
    /// Clustering measured at `p_t = 0` and `p_t = 1` during calibration.
    pub achievable_band: (f64, f64),
    /// Mean clustering of the replicate graphs.
    pub realized_gcc: f64,
    pub replicate_seeds: Vec<u64>,
    pub cells: Vec<CellResult>,
}

impl LevelResult {
    pub fn cell(&self, strategy: Strategy) -> Option<&CellResult> {
        self.cells.iter().find(|c| c.strategy == strategy)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    /// Ascending in `target_gcc`.
    pub levels: Vec<LevelResult>,
}

impl ExperimentResult {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let strategies = config.strategies();
    let solver = SolverSettings::default();
    let defaults = CalibrationSettings::default();
    let calibration = CalibrationSettings {
        tolerance: config.calibration_tolerance,
        samples: defaults.samples.max(config.replicates),
        ..defaults
    };

    let levels = config
        .sorted_targets()
        .into_iter()
        .enumerate()
        .map(|(level, target)| {
            let level_seed = generators::split_seed(config.master_seed, level as u64);
            let cal = generators::calibrate_triad_probability(
                target,
                config.n,
                config.m,
                level_seed,
                &calibration,
            )?;
            let replicate_seeds: Vec<u64> = (0..config.replicates as u64)
                .map(|r| generators::split_seed(level_seed, r))
                .collect();
            let graphs = replicate_seeds
                .par_iter()
                .map(|&seed| {
                    generators::holme_kim(
                        &GeneratorParams::new(config.n, config.m, seed)
                            .with_triad_probability(cal.triad_probability),
                    )
                })
                .collect::<Result<Vec<_>>>()?;
            let realized_gcc = graphs
                .iter()
                .map(Graph::global_clustering_coefficient)
                .sum::<Result<f64>>()?
                / graphs.len() as f64;
            let cells = evaluate_strategies(&graphs, &strategies, config.isolation_fraction, &solver)?;
            Ok(LevelResult {
                target_gcc: target,
                triad_probability: cal.triad_probability,
                calibrated_gcc: cal.mean_gcc,
                achievable_band: cal.band,
                realized_gcc,
                replicate_seeds,
                cells,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ExperimentResult {
        config: config.clone(),
        levels,
    })
}

/// Curve of one strategy on one graph, plus the nodes it cut. Scores are
/// computed on the intact graph.
pub fn strategy_curve(
    g: &Graph,
    strategy: Strategy,
    fraction: f64,
    settings: &SolverSettings,
) -> Result<(InfectionCurve, Vec<NodeId>)> {
    let (graph, isolated) = match strategy {
        Strategy::Baseline => (None, Vec::new()),
        Strategy::Isolate(measure) => {
            let scores = centrality::compute(g, measure, settings)?;
            let targets = centrality::top_fraction(&scores, fraction)?;
            (Some(g.isolate_nodes(&targets)?), targets)
        }
    };
    let graph = graph.as_ref().unwrap_or(g);
    let mut cut = vec![false; g.node_count()];
    for &t in &isolated {
        cut[t] = true;
    }
    let sources: Vec<NodeId> = g.nodes().filter(|&v| !cut[v]).collect();
    Ok((epidemic::aggregate_curve(graph, &sources)?, isolated))
}

/// Evaluates every strategy on the same graphs and averages per time step.
/// Replicates run in parallel; the reduction follows replicate order.
pub fn evaluate_strategies(
    graphs: &[Graph],
    strategies: &[Strategy],
    fraction: f64,
    settings: &SolverSettings,
) -> Result<Vec<CellResult>> {
    if graphs.is_empty() {
        return Err(Error::InvalidParams("at least one replicate graph required".into()));
    }
    let per_replicate: Vec<Vec<(InfectionCurve, Vec<NodeId>)>> = graphs
        .par_iter()
        .map(|g| {
            strategies
                .iter()
                .map(|&s| strategy_curve(g, s, fraction, settings))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let reps = graphs.len() as f64;
    strategies
        .iter()
        .enumerate()
        .map(|(k, &strategy)| {
            let mut sum: Vec<u64> = Vec::new();
            let (mut unreachable, mut sources) = (0u64, 0usize);
            let mut isolated = Vec::with_capacity(graphs.len());
            for replicate in &per_replicate {
                let (curve, cut) = &replicate[k];
                if sum.len() < curve.counts.len() {
                    sum.resize(curve.counts.len(), 0);
                }
                for (a, b) in sum.iter_mut().zip(&curve.counts) {
                    *a += b;
                }
                unreachable += curve.unreachable;
                sources += curve.sources;
                isolated.push(cut.clone());
            }
            let mean_counts: Vec<f64> = sum.iter().map(|&c| c as f64 / reps).collect();
            let (peak_t, peak_count) = epidemic::peak_after_source(&mean_counts)?;
            Ok(CellResult {
                strategy,
                normalized: epidemic::normalize(&mean_counts),
                gamma: epidemic::fit_gamma_weights(&mean_counts).ok(),
                mean_counts,
                mean_unreachable: unreachable as f64 / reps,
                mean_sources: sources as f64 / reps,
                peak_t,
                peak_count,
                isolated,
            })
        })
        .collect()
}

/// Peak counts laid out as strategies × ascending clustering levels.
#[derive(Debug, Clone, PartialEq)]
pub struct PeakTable {
    pub gcc: Vec<f64>,
    pub rows: Vec<(Strategy, Vec<f64>)>,
}

impl PeakTable {
    pub fn get(&self, strategy: Strategy, level: usize) -> Option<f64> {
        self.rows
            .iter()
            .find(|(s, _)| *s == strategy)
            .and_then(|(_, row)| row.get(level).copied())
    }
}

pub fn peak_table(result: &ExperimentResult) -> PeakTable {
    let rows = result
        .config
        .strategies()
        .into_iter()
        .map(|s| {
            let row = result
                .levels
                .iter()
                .map(|l| l.cell(s).map_or(f64::NAN, |c| c.peak_count))
                .collect();
            (s, row)
        })
        .collect();
    PeakTable {
        gcc: result.levels.iter().map(|l| l.target_gcc).collect(),
        rows,
    }
}

impl fmt::Display for PeakTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<6}", "GCC")?;
        for g in &self.gcc {
            write!(f, "{g:>10.3}")?;
        }
        writeln!(f)?;
        for (strategy, row) in &self.rows {
            write!(f, "{:<6}", strategy.label())?;
            for v in row {
                write!(f, "{v:>10.1}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

pub const CURVES_CSV: &str = "curves.csv";
pub const PEAKS_CSV: &str = "peaks.csv";
pub const RESULT_JSON: &str = "result.json";

pub fn curves_csv(result: &ExperimentResult) -> String {
    let mut out = String::from("gcc,measure,t,mean_count,normalized\n");
    for level in &result.levels {
        for cell in &level.cells {
            for (t, (c, p)) in cell.mean_counts.iter().zip(&cell.normalized).enumerate() {
                out += &format!("{},{},{t},{c},{p}\n", level.target_gcc, cell.strategy);
            }
        }
    }
    out
}

pub fn peaks_csv(result: &ExperimentResult) -> String {
    let mut out = String::from("gcc,measure,peak_t,peak_count\n");
    for level in &result.levels {
        for cell in &level.cells {
            out += &format!(
                "{},{},{},{}\n",
                level.target_gcc, cell.strategy, cell.peak_t, cell.peak_count
            );
        }
    }
    out
}

/// Writes the result into `dir` and returns the files written.
pub fn export(result: &ExperimentResult, format: ExportFormat, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let files = match format {
        ExportFormat::Csv => vec![(CURVES_CSV, curves_csv(result)), (PEAKS_CSV, peaks_csv(result))],
        ExportFormat::Json => vec![(RESULT_JSON, result.to_json()?)],
    };
    files
        .into_iter()
        .map(|(name, body)| {
            let path = dir.join(name);
            fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
            Ok(path)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> ExperimentConfig {
        ExperimentConfig {
            n: 60,
            replicates: 2,
            gcc_targets: vec![0.2],
            measures: vec![Measure::Degree, Measure::PageRank],
            isolation_fraction: 0.05,
            calibration_tolerance: 0.02,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn harness_adds_nothing_for_a_single_baseline_replicate() {
        let g = Graph::new(5, [(0, 1), (1, 2), (2, 3), (1, 4)]).unwrap();
        let cells =
            evaluate_strategies(&[g.clone()], &[Strategy::Baseline], 0.03, &SolverSettings::default()).unwrap();
        let direct = epidemic::aggregate_curve(&g, &[0, 1, 2, 3, 4]).unwrap();
        let cell = &cells[0];
        assert_eq!(
            cell.mean_counts,
            direct.counts.iter().map(|&c| c as f64).collect::<Vec<_>>()
        );
        assert_eq!(cell.mean_unreachable, 0.0);
        let (t, c) = epidemic::curve_peak(&direct).unwrap();
        assert_eq!((cell.peak_t, cell.peak_count), (t, c as f64));
    }

    #[test]
    fn zero_fraction_matches_baseline() {
        let graphs: Vec<Graph> = (0..3)
            .map(|s| generators::barabasi_albert(&GeneratorParams::new(40, 2, s)).unwrap())
            .collect();
        let strategies: Vec<Strategy> = std::iter::once(Strategy::Baseline)
            .chain(Measure::ALL.map(Strategy::Isolate))
            .collect();
        let cells = evaluate_strategies(&graphs, &strategies, 0.0, &SolverSettings::default()).unwrap();
        for cell in &cells[1..] {
            assert_eq!(cell.mean_counts, cells[0].mean_counts);
            assert_eq!(cell.peak_count, cells[0].peak_count);
        }
    }

    #[test]
    fn isolated_nodes_are_not_sources() {
        let star = Graph::new(5, (1..5).map(|l| (0, l))).unwrap();
        let (curve, cut) =
            strategy_curve(&star, Strategy::Isolate(Measure::Degree), 0.2, &SolverSettings::default()).unwrap();
        assert_eq!(cut, vec![0]);
        assert_eq!(curve.sources, 4);
        assert_eq!(curve.counts, vec![4]);
        assert_eq!(curve.unreachable, 16);
    }

    #[test]
    fn config_validation_and_json() {
        let config = ExperimentConfig::from_json(r#"{"replicates": 1, "measures": []}"#).unwrap();
        assert_eq!(config.strategies(), vec![Strategy::Baseline]);
        assert_eq!(config.n, 200);

        assert!(ExperimentConfig::from_json(r#"{"replicate": 1}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"replicates": 0}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"isolation_fraction": 1.0}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"measures": ["degree", "expected-force"]}"#).is_ok());
    }

    #[test]
    fn table_shape_and_export() {
        let result = run_experiment(&small_config()).unwrap();
        let table = peak_table(&result);
        assert_eq!(table.rows.len(), 3);
        assert_eq!(table.gcc, vec![0.2]);
        for (s, row) in &table.rows {
            assert_eq!(row[0], result.levels[0].cell(*s).unwrap().peak_count);
        }

        let dir = tempfile::tempdir().unwrap();
        export(&result, ExportFormat::Csv, dir.path()).unwrap();
        let peaks = fs::read_to_string(dir.path().join(PEAKS_CSV)).unwrap();
        assert_eq!(peaks.lines().count(), 1 + 3);

        let files = export(&result, ExportFormat::Json, dir.path()).unwrap();
        let back = ExperimentResult::from_json(&fs::read_to_string(&files[0]).unwrap()).unwrap();
        assert_eq!(back, result);
    }

    #[test]
    fn unreachable_target_propagates() {
        let config = ExperimentConfig {
            gcc_targets: vec![0.95],
            ..small_config()
        };
        assert!(matches!(
            run_experiment(&config),
            Err(Error::UnreachableTarget { .. })
        ));
    }
}
