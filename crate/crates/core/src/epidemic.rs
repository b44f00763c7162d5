//! Susceptible–infected cascades with certain transmission.
//!
//! Each step every infected node infects all of its neighbours, so the step
//! at which a node falls ill is its hop distance from the source. An
//! infection curve is therefore a histogram of BFS distances.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bfs_into, check_node, Graph, NodeId, UNREACHABLE};

/// Infection counts per time step, summed over one or more sources.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct InfectionCurve {
    /// `counts[t]` is the number of (source, node) pairs at distance `t`.
    pub counts: Vec<u64>,
    /// Pairs whose target is never infected.
    pub unreachable: u64,
    pub sources: usize,
}

impl InfectionCurve {
    pub fn count(&self, t: usize) -> u64 {
        self.counts.get(t).copied().unwrap_or(0)
    }

    /// Total transmissions, i.e. infections after the source step.
    pub fn normalization(&self) -> u64 {
        self.counts.iter().skip(1).sum()
    }

    /// Every (source, target) pair considered: reached plus unreachable.
    pub fn total_pairs(&self) -> u64 {
        self.counts.iter().sum::<u64>() + self.unreachable
    }

    /// `counts[t] / normalization` for `t >= 1`, with 0 at `t = 0`.
    pub fn normalized(&self) -> Vec<f64> {
        normalize(&self.counts.iter().map(|&c| c as f64).collect::<Vec<_>>())
    }

    fn add(&mut self, other: &InfectionCurve) {
        if self.counts.len() < other.counts.len() {
            self.counts.resize(other.counts.len(), 0);
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.unreachable += other.unreachable;
        self.sources += other.sources;
    }
}

/// Divides entries `t >= 1` by their sum; entry 0 becomes 0. An all-zero
/// tail yields all zeros.
pub fn normalize(counts: &[f64]) -> Vec<f64> {
    let total: f64 = counts.iter().skip(1).sum();
    counts
        .iter()
        .enumerate()
        .map(|(t, &c)| if t == 0 || total == 0.0 { 0.0 } else { c / total })
        .collect()
}

pub fn infection_histogram(g: &Graph, source: NodeId) -> Result<InfectionCurve> {
    check_node(source, g.node_count())?;
    let mut dist = vec![UNREACHABLE; g.node_count()];
    Ok(histogram_with(g, source, &mut dist, &mut VecDeque::new()))
}

fn histogram_with(
    g: &Graph,
    source: NodeId,
    dist: &mut [u32],
    queue: &mut VecDeque<NodeId>,
) -> InfectionCurve {
    dist.fill(UNREACHABLE);
    bfs_into(g, source, dist, queue);
    let mut curve = InfectionCurve {
        counts: Vec::new(),
        unreachable: 0,
        sources: 1,
    };
    for &d in dist.iter() {
        if d == UNREACHABLE {
            curve.unreachable += 1;
        } else {
            let t = d as usize;
            if curve.counts.len() <= t {
                curve.counts.resize(t + 1, 0);
            }
            curve.counts[t] += 1;
        }
    }
    curve
}

/// Element-wise sum of the per-source histograms.
pub fn aggregate_curve(g: &Graph, sources: &[NodeId]) -> Result<InfectionCurve> {
    if sources.is_empty() {
        return Err(Error::InvalidParams("at least one source required".into()));
    }
    for &s in sources {
        check_node(s, g.node_count())?;
    }
    let mut dist = vec![UNREACHABLE; g.node_count()];
    let mut queue = VecDeque::new();
    let mut total = InfectionCurve::default();
    for &s in sources {
        total.add(&histogram_with(g, s, &mut dist, &mut queue));
    }
    Ok(total)
}

/// Method-of-moments gamma distribution over infection times.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaFit {
    pub shape: f64,
    pub scale: f64,
}

impl GammaFit {
    pub fn mean(&self) -> f64 {
        self.shape * self.scale
    }

    pub fn variance(&self) -> f64 {
        self.shape * self.scale * self.scale
    }

    /// Mode of the density; 0 when `shape < 1`.
    pub fn mode(&self) -> f64 {
        ((self.shape - 1.0) * self.scale).max(0.0)
    }
}

/// Fits a gamma distribution to the infection times `t >= 1` of `curve`.
pub fn fit_gamma(curve: &InfectionCurve) -> Result<GammaFit> {
    fit_gamma_weights(&curve.counts.iter().map(|&c| c as f64).collect::<Vec<_>>())
}

/// Gamma fit for real-valued (e.g. replicate-averaged) counts indexed by `t`.
/// Entry 0 is the source step and is ignored.
pub fn fit_gamma_weights(counts: &[f64]) -> Result<GammaFit> {
    let weighted = || counts.iter().enumerate().skip(1);
    let total: f64 = weighted().map(|(_, &w)| w).sum();
    if !(total > 0.0) {
        return Err(Error::DegenerateSample("no infections after the source step"));
    }
    let mean = weighted().map(|(t, &w)| t as f64 * w).sum::<f64>() / total;
    let variance = weighted()
        .map(|(t, &w)| {
            let d = t as f64 - mean;
            w * d * d
        })
        .sum::<f64>()
        / total;
    if !(variance > 0.0) {
        return Err(Error::DegenerateSample("all infections at one time step"));
    }
    let scale = variance / mean;
    Ok(GammaFit {
        shape: mean / scale,
        scale,
    })
}

/// Time step and size of the largest count at `t >= 1`; ties go to the
/// earlier step.
pub fn curve_peak(curve: &InfectionCurve) -> Result<(usize, u64)> {
    peak_after_source(&curve.counts)
}

pub(crate) fn peak_after_source<T: PartialOrd + Copy + Default>(counts: &[T]) -> Result<(usize, T)> {
    let mut best: Option<(usize, T)> = None;
    for (t, &c) in counts.iter().enumerate().skip(1) {
        if c > T::default() && best.is_none_or(|(_, b)| c > b) {
            best = Some((t, c));
        }
    }
    best.ok_or(Error::EmptyCurve)
}
