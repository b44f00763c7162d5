//! Scale-free network generators.
//!
//! Both models grow from a complete graph on `m + 1` nodes. Every later node
//! brings `m` distinct edges whose endpoints are drawn with probability
//! proportional to current degree. Holme–Kim adds a triad step: after the
//! first attachment, each further edge goes with probability `p_t` to a
//! random neighbour of the last preferentially chosen target, closing a
//! triangle. Barabási–Albert is Holme–Kim with `p_t = 0` and consumes the
//! random stream identically, so the two agree bit for bit at that setting.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Deterministic random stream used by every generator: ChaCha8 seeded
/// through `SeedableRng::seed_from_u64`.
pub type RngStream = ChaCha8Rng;

pub fn rng_stream(seed: u64) -> RngStream {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives the seed of sub-stream `index` from `master` with the splitmix64
/// finalizer applied to `master + (index + 1) * golden_gamma`.
pub fn split_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorParams {
    /// Final node count.
    pub n: usize,
    /// Edges brought by each new node.
    pub m: usize,
    /// Probability of a triad step (Holme–Kim only).
    pub triad_probability: f64,
    pub seed: u64,
}

impl GeneratorParams {
    pub fn new(n: usize, m: usize, seed: u64) -> Self {
        GeneratorParams {
            n,
            m,
            triad_probability: 0.0,
            seed,
        }
    }

    pub fn with_triad_probability(mut self, p: f64) -> Self {
        self.triad_probability = p;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 1 {
            return Err(Error::InvalidParams(format!("m must be >= 1, got {}", self.m)));
        }
        if self.m >= self.n {
            return Err(Error::InvalidParams(format!(
                "m must be < n, got m = {} with n = {}",
                self.m, self.n
            )));
        }
        if !(0.0..=1.0).contains(&self.triad_probability) {
            return Err(Error::InvalidParams(format!(
                "triad probability must lie in [0, 1], got {}",
                self.triad_probability
            )));
        }
        Ok(())
    }
}

/// Barabási–Albert preferential attachment. `triad_probability` is ignored.
pub fn barabasi_albert(params: &GeneratorParams) -> Result<Graph> {
    holme_kim(&params.with_triad_probability(0.0))
}

/// Holme–Kim preferential attachment with triad formation.
pub fn holme_kim(params: &GeneratorParams) -> Result<Graph> {
    params.validate()?;
    let mut rng = rng_stream(params.seed);
    Ok(grow(params.n, params.m, params.triad_probability, &mut rng))
}

fn grow(n: usize, m: usize, triad_probability: f64, rng: &mut RngStream) -> Graph {
    let mut adjacency: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    // every edge endpoint once; a uniform draw from here is degree-proportional
    let mut endpoints: Vec<NodeId> = Vec::with_capacity(2 * (m * (m + 1) / 2 + (n - m - 1) * m));

    for u in 0..=m {
        for v in (u + 1)..=m {
            adjacency[u].push(v);
            adjacency[v].push(u);
            endpoints.push(u);
            endpoints.push(v);
        }
    }

    let mut chosen: Vec<NodeId> = Vec::with_capacity(m);
    for new in (m + 1)..n {
        chosen.clear();
        let mut pivot: Option<NodeId> = None;
        for k in 0..m {
            let triad = k > 0 && rng.gen::<f64>() < triad_probability;
            let triad_target = if triad {
                pivot.and_then(|p| {
                    let candidates: Vec<NodeId> = adjacency[p]
                        .iter()
                        .copied()
                        .filter(|c| !chosen.contains(c))
                        .collect();
                    (!candidates.is_empty()).then(|| candidates[rng.gen_range(0..candidates.len())])
                })
            } else {
                None
            };
            let target = match triad_target {
                Some(t) => t,
                None => {
                    let t = loop {
                        let t = endpoints[rng.gen_range(0..endpoints.len())];
                        if !chosen.contains(&t) {
                            break t;
                        }
                    };
                    pivot = Some(t);
                    t
                }
            };
            chosen.push(target);
        }
        for &t in &chosen {
            adjacency[new].push(t);
            adjacency[t].push(new);
            endpoints.push(new);
            endpoints.push(t);
        }
    }

    Graph::from_raw_adjacency(adjacency)
}

/// Sample size and search limits for [`calibrate_triad_probability`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationSettings {
    /// Graphs averaged per evaluation of the mean clustering coefficient.
    pub samples: usize,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for CalibrationSettings {
    fn default() -> Self {
        CalibrationSettings {
            samples: 20,
            tolerance: 0.01,
            max_iterations: 30,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    pub triad_probability: f64,
    /// Sample-mean clustering coefficient at `triad_probability`.
    pub mean_gcc: f64,
    /// Sample-mean clustering at `p_t = 0` and `p_t = 1`.
    pub band: (f64, f64),
    pub iterations: usize,
}

/// Mean global clustering coefficient of `samples` Holme–Kim graphs whose
/// seeds are `split_seed(seed, 0..samples)`.
pub fn mean_gcc(n: usize, m: usize, triad_probability: f64, samples: usize, seed: u64) -> Result<f64> {
    if samples == 0 {
        return Err(Error::InvalidParams("at least one sample required".into()));
    }
    let mut total = 0.0;
    for i in 0..samples {
        let params = GeneratorParams::new(n, m, split_seed(seed, i as u64))
            .with_triad_probability(triad_probability);
        total += holme_kim(&params)?.global_clustering_coefficient()?;
    }
    Ok(total / samples as f64)
}

/// Finds the triad probability whose sample-mean clustering coefficient is
/// within `settings.tolerance` of `target_gcc`.
///
/// Every evaluation reuses the same sample seeds, so the bisection runs on a
/// single realisation of the randomness and the mean is close to monotone in
/// `p_t`. Targets outside the band measured at `p_t = 0` and `p_t = 1` fail
/// with [`Error::UnreachableTarget`].
pub fn calibrate_triad_probability(
    target_gcc: f64,
    n: usize,
    m: usize,
    seed: u64,
    settings: &CalibrationSettings,
) -> Result<Calibration> {
    GeneratorParams::new(n, m, seed).validate()?;
    if !(settings.tolerance > 0.0) {
        return Err(Error::InvalidParams("calibration tolerance must be positive".into()));
    }
    let eval = |p: f64| mean_gcc(n, m, p, settings.samples, seed);
    let low = eval(0.0)?;
    let high = eval(1.0)?;
    let band = (low, high);
    let done = |p, g, iterations| Calibration {
        triad_probability: p,
        mean_gcc: g,
        band,
        iterations,
    };

    if target_gcc <= low {
        return if low - target_gcc <= settings.tolerance {
            Ok(done(0.0, low, 0))
        } else {
            Err(Error::UnreachableTarget { target: target_gcc, low, high })
        };
    }
    if target_gcc >= high {
        return if target_gcc - high <= settings.tolerance {
            Ok(done(1.0, high, 0))
        } else {
            Err(Error::UnreachableTarget { target: target_gcc, low, high })
        };
    }

    // refine well inside the tolerance so that fresh samples still land within it
    let stop = settings.tolerance / 10.0;
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut best = if target_gcc - low < high - target_gcc {
        (0.0, low)
    } else {
        (1.0, high)
    };
    let mut iterations = 0;
    while iterations < settings.max_iterations {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        let g = eval(mid)?;
        if (g - target_gcc).abs() < (best.1 - target_gcc).abs() {
            best = (mid, g);
        }
        if (g - target_gcc).abs() <= stop {
            break;
        }
        if g < target_gcc {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(done(best.0, best.1, iterations))
}
