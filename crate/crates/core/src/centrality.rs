//! Node-importance measures and selection of isolation targets.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bfs_into, Graph, NodeId, UNREACHABLE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    Degree,
    Closeness,
    Betweenness,
    Eigenvector,
    Katz,
    PageRank,
    ExpectedForce,
}

impl Measure {
    pub const ALL: [Measure; 7] = [
        Measure::Degree,
        Measure::Closeness,
        Measure::Betweenness,
        Measure::Eigenvector,
        Measure::Katz,
        Measure::PageRank,
        Measure::ExpectedForce,
    ];

    /// Stable lowercase name used on the command line and in exports.
    pub fn tag(self) -> &'static str {
        match self {
            Measure::Degree => "degree",
            Measure::Closeness => "closeness",
            Measure::Betweenness => "betweenness",
            Measure::Eigenvector => "eigenvector",
            Measure::Katz => "katz",
            Measure::PageRank => "pagerank",
            Measure::ExpectedForce => "expected-force",
        }
    }

    /// Row label of the peak table.
    pub fn short_label(self) -> &'static str {
        match self {
            Measure::Degree => "Deg",
            Measure::Closeness => "Clos",
            Measure::Betweenness => "Bet",
            Measure::Eigenvector => "Eig",
            Measure::Katz => "Katz",
            Measure::PageRank => "Page",
            Measure::ExpectedForce => "Exf",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.tag() == s || m.short_label().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParams(format!("unknown centrality measure {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralityScores {
    pub measure: Measure,
    pub values: Vec<f64>,
}

/// Numeric settings for the iterative measures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverSettings {
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Katz attenuation as a fraction of `1 / λ_max`.
    pub katz_alpha_fraction: f64,
    pub pagerank_damping: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            tolerance: 1e-10,
            max_iterations: 10_000,
            katz_alpha_fraction: 0.85,
            pagerank_damping: 0.85,
        }
    }
}

impl SolverSettings {
    pub fn validate(&self) -> Result<()> {
        let open_unit = |x: f64| x > 0.0 && x < 1.0;
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidParams("solver tolerance must be positive".into()));
        }
        if !open_unit(self.pagerank_damping) {
            return Err(Error::InvalidParams("pagerank damping must lie in (0, 1)".into()));
        }
        if !open_unit(self.katz_alpha_fraction) {
            return Err(Error::InvalidParams("katz alpha fraction must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

pub fn compute(g: &Graph, measure: Measure, settings: &SolverSettings) -> Result<CentralityScores> {
    let values = match measure {
        Measure::Degree => return Ok(degree_centrality(g)),
        Measure::Closeness => return Ok(closeness_centrality(g)),
        Measure::Betweenness => return Ok(betweenness_centrality(g)),
        Measure::Eigenvector => return eigenvector_centrality(g, settings),
        Measure::Katz => return katz_centrality(g, settings),
        Measure::PageRank => return pagerank(g, settings),
        Measure::ExpectedForce => expected_force_values(g),
    };
    Ok(CentralityScores { measure, values })
}

pub fn degree_centrality(g: &Graph) -> CentralityScores {
    CentralityScores {
        measure: Measure::Degree,
        values: g.nodes().map(|i| g.deg(i) as f64).collect(),
    }
}

/// Closeness with the Wasserman–Faust correction for disconnected graphs:
/// `(r - 1) / Σd · (r - 1) / (n - 1)` where `r` counts the nodes reachable
/// from `i` (itself included). Nodes that reach nobody score 0.
pub fn closeness_centrality(g: &Graph) -> CentralityScores {
    let n = g.node_count();
    let mut dist = vec![UNREACHABLE; n];
    let mut queue = VecDeque::new();
    let values = g
        .nodes()
        .map(|i| {
            dist.fill(UNREACHABLE);
            bfs_into(g, i, &mut dist, &mut queue);
            let (reached, total) = dist
                .iter()
                .filter(|&&d| d != UNREACHABLE)
                .fold((0usize, 0u64), |(r, t), &d| (r + 1, t + d as u64));
            if reached <= 1 {
                return 0.0;
            }
            let others = (reached - 1) as f64;
            (others / total as f64) * (others / (n - 1) as f64)
        })
        .collect();
    CentralityScores {
        measure: Measure::Closeness,
        values,
    }
}

/// Brandes' accumulation over unordered pairs, endpoints excluded,
/// unnormalised.
pub fn betweenness_centrality(g: &Graph) -> CentralityScores {
    let n = g.node_count();
    let mut values = vec![0.0; n];

    let mut dist = vec![UNREACHABLE; n];
    let mut sigma = vec![0.0f64; n];
    let mut delta = vec![0.0f64; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::with_capacity(n);

    for s in g.nodes() {
        dist.fill(UNREACHABLE);
        sigma.fill(0.0);
        delta.fill(0.0);
        order.clear();

        dist[s] = 0;
        sigma[s] = 1.0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in g.adj(v) {
                if dist[w] == UNREACHABLE {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                }
            }
        }

        // predecessors of w are exactly its neighbours one layer closer
        for &w in order.iter().rev() {
            for &v in g.adj(w) {
                if dist[v] != UNREACHABLE && dist[v] + 1 == dist[w] {
                    delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
                }
            }
            if w != s {
                values[w] += delta[w];
            }
        }
    }

    // each unordered pair was accumulated from both ends
    for v in &mut values {
        *v /= 2.0;
    }
    CentralityScores {
        measure: Measure::Betweenness,
        values,
    }
}

/// Principal eigenvector of the adjacency matrix with unit Euclidean norm.
///
/// Power iteration runs on `A + I`, which has the same eigenvectors but no
/// negative eigenvalue of equal magnitude, so bipartite graphs converge too.
pub fn eigenvector_centrality(g: &Graph, settings: &SolverSettings) -> Result<CentralityScores> {
    let (values, _) = principal_eigenpair(g, settings)?;
    Ok(CentralityScores {
        measure: Measure::Eigenvector,
        values,
    })
}

/// Largest adjacency eigenvalue.
pub fn spectral_radius(g: &Graph, settings: &SolverSettings) -> Result<f64> {
    principal_eigenpair(g, settings).map(|(_, lambda)| lambda)
}

fn principal_eigenpair(g: &Graph, settings: &SolverSettings) -> Result<(Vec<f64>, f64)> {
    settings.validate()?;
    if g.edge_count() == 0 {
        return Err(Error::Degenerate("eigenvector centrality needs at least one edge"));
    }
    let n = g.node_count();
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for _ in 0..settings.max_iterations {
        for i in g.nodes() {
            next[i] = x[i] + g.adj(i).iter().map(|&j| x[j]).sum::<f64>();
        }
        let norm = next.iter().map(|v| v * v).sum::<f64>().sqrt();
        residual = 0.0;
        for (xi, ni) in x.iter_mut().zip(&next) {
            let v = ni / norm;
            residual = f64::max(residual, (v - *xi).abs());
            *xi = v;
        }
        if residual < settings.tolerance {
            let lambda = g
                .nodes()
                .map(|i| x[i] * g.adj(i).iter().map(|&j| x[j]).sum::<f64>())
                .sum();
            return Ok((x, lambda));
        }
    }
    Err(Error::NoConvergence {
        iterations: settings.max_iterations,
        residual,
        iterate: x,
    })
}

/// Katz centrality with `α = katz_alpha_fraction / λ_max`, unnormalised.
/// An edgeless graph scores 1 everywhere (only the length-zero walk).
pub fn katz_centrality(g: &Graph, settings: &SolverSettings) -> Result<CentralityScores> {
    settings.validate()?;
    if g.edge_count() == 0 {
        return Ok(CentralityScores {
            measure: Measure::Katz,
            values: vec![1.0; g.node_count()],
        });
    }
    let alpha = settings.katz_alpha_fraction / spectral_radius(g, settings)?;
    katz_with_alpha(g, alpha, settings)
}

/// Fixed point of `x = α A x + 1`, i.e. `Σ_k α^k A^k 1`.
pub fn katz_with_alpha(g: &Graph, alpha: f64, settings: &SolverSettings) -> Result<CentralityScores> {
    let n = g.node_count();
    let mut x = vec![1.0; n];
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for _ in 0..settings.max_iterations {
        for i in g.nodes() {
            next[i] = 1.0 + alpha * g.adj(i).iter().map(|&j| x[j]).sum::<f64>();
        }
        residual = x
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        std::mem::swap(&mut x, &mut next);
        if !residual.is_finite() {
            break;
        }
        if residual < settings.tolerance {
            return Ok(CentralityScores {
                measure: Measure::Katz,
                values: x,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: settings.max_iterations,
        residual,
        iterate: x,
    })
}

/// Damped random-walk stationary distribution. Degree-zero nodes spread
/// their mass uniformly over all nodes.
pub fn pagerank(g: &Graph, settings: &SolverSettings) -> Result<CentralityScores> {
    settings.validate()?;
    let n = g.node_count();
    if n == 0 {
        return Ok(CentralityScores {
            measure: Measure::PageRank,
            values: Vec::new(),
        });
    }
    let d = settings.pagerank_damping;
    let nf = n as f64;
    let mut v = vec![1.0 / nf; n];
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for _ in 0..settings.max_iterations {
        let dangling: f64 = g.nodes().filter(|&j| g.deg(j) == 0).map(|j| v[j]).sum();
        let base = (1.0 - d) / nf + d * dangling / nf;
        for i in g.nodes() {
            next[i] = base + d * g.adj(i).iter().map(|&j| v[j] / g.deg(j) as f64).sum::<f64>();
        }
        let total: f64 = next.iter().sum();
        residual = 0.0;
        for (vi, ni) in v.iter_mut().zip(&next) {
            let updated = ni / total;
            residual += (updated - *vi).abs();
            *vi = updated;
        }
        if residual < settings.tolerance {
            return Ok(CentralityScores {
                measure: Measure::PageRank,
                values: v,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: settings.max_iterations,
        residual,
        iterate: v,
    })
}

/// Expected force: entropy of the outward-edge counts of every cluster
/// reachable from a node in two transmissions.
///
/// For node `i`, each neighbour `j` and each node `k` outside `{i, j}`
/// adjacent to either of them is one outcome (ordered, no deduplication of
/// clusters). Its force is the number of edges leaving `{i, j, k}`. The score
/// is `-Σ p ln p` over the normalised forces; nodes without any outcome, or
/// whose outcomes all have zero force, score 0.
pub fn expected_force(g: &Graph) -> CentralityScores {
    CentralityScores {
        measure: Measure::ExpectedForce,
        values: expected_force_values(g),
    }
}

fn expected_force_values(g: &Graph) -> Vec<f64> {
    let mut forces: Vec<usize> = Vec::new();
    let mut second: Vec<NodeId> = Vec::new();
    g.nodes()
        .map(|i| {
            forces.clear();
            for &j in g.adj(i) {
                merge_union(g.adj(i), g.adj(j), &mut second);
                for &k in second.iter().filter(|&&k| k != i && k != j) {
                    let internal = 1 + usize::from(g.has_edge(i, k)) + usize::from(g.has_edge(j, k));
                    forces.push(g.deg(i) + g.deg(j) + g.deg(k) - 2 * internal);
                }
            }
            entropy(&forces)
        })
        .collect()
}

fn merge_union(a: &[NodeId], b: &[NodeId], out: &mut Vec<NodeId>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}

fn entropy(weights: &[usize]) -> f64 {
    let total: usize = weights.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let total = total as f64;
    -weights
        .iter()
        .filter(|&&w| w > 0)
        .map(|&w| {
            let p = w as f64 / total;
            p * p.ln()
        })
        .sum::<f64>()
}

/// The `round(fraction · n)` highest-scoring nodes, highest first; ties go
/// to the lower node id.
pub fn top_fraction(scores: &CentralityScores, fraction: f64) -> Result<Vec<NodeId>> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::InvalidParams(format!(
            "fraction must lie in [0, 1], got {fraction}"
        )));
    }
    let n = scores.values.len();
    let k = ((fraction * n as f64).round() as usize).min(n);
    let mut order: Vec<NodeId> = (0..n).collect();
    order.sort_by(|&a, &b| {
        scores.values[b]
            .total_cmp(&scores.values[a])
            .then(a.cmp(&b))
    });
    order.truncate(k);
    Ok(order)
}
