//! Brute-force reference implementations shared by the integration tests.
//! Everything here works on a dense adjacency matrix and avoids the library's
//! own traversal code.

#![allow(dead_code)]

use epicurve::graph::Graph;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const INF: usize = usize::MAX / 4;

/// G(n, p) with a fixed seed.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).unwrap()
}

/// The 30 random graphs used by the oracle comparisons: n in [20, 50], p = 0.15.
pub fn oracle_graphs() -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    (0..30)
        .map(|i| {
            let n = rng.gen_range(20..=50);
            erdos_renyi(n, 0.15, 1000 + i)
        })
        .collect()
}

pub fn dense(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut a = vec![vec![false; n]; n];
    for (u, v) in g.edges() {
        a[u][v] = true;
        a[v][u] = true;
    }
    a
}

pub fn floyd_warshall(a: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let n = a.len();
    let mut d = vec![vec![INF; n]; n];
    for i in 0..n {
        d[i][i] = 0;
        for j in 0..n {
            if a[i][j] {
                d[i][j] = 1;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// Number of shortest paths between every pair, by layered counting over the
/// Floyd–Warshall distances.
pub fn path_counts(a: &[Vec<bool>], d: &[Vec<usize>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut sigma = vec![vec![0.0; n]; n];
    for s in 0..n {
        let mut order: Vec<usize> = (0..n).filter(|&t| d[s][t] < INF).collect();
        order.sort_by_key(|&t| d[s][t]);
        for &t in &order {
            sigma[s][t] = if t == s {
                1.0
            } else {
                (0..n)
                    .filter(|&u| a[u][t] && d[s][u] + 1 == d[s][t])
                    .map(|u| sigma[s][u])
                    .sum()
            };
        }
    }
    sigma
}

pub fn betweenness(g: &Graph) -> Vec<f64> {
    let a = dense(g);
    let d = floyd_warshall(&a);
    let sigma = path_counts(&a, &d);
    let n = a.len();
    let mut b = vec![0.0; n];
    for s in 0..n {
        for t in (s + 1)..n {
            if d[s][t] >= INF {
                continue;
            }
            for v in 0..n {
                if v != s && v != t && d[s][v] < INF && d[v][t] < INF && d[s][v] + d[v][t] == d[s][t] {
                    b[v] += sigma[s][v] * sigma[v][t] / sigma[s][t];
                }
            }
        }
    }
    b
}

pub fn closeness(g: &Graph) -> Vec<f64> {
    let a = dense(g);
    let d = floyd_warshall(&a);
    let n = a.len();
    (0..n)
        .map(|i| {
            let reach: Vec<usize> = (0..n).filter(|&j| d[i][j] < INF).collect();
            let total: usize = reach.iter().map(|&j| d[i][j]).sum();
            if reach.len() <= 1 {
                0.0
            } else {
                let others = (reach.len() - 1) as f64;
                (others / total as f64) * (others / (n - 1) as f64)
            }
        })
        .collect()
}

fn adjacency_matrix(g: &Graph) -> DMatrix<f64> {
    let n = g.node_count();
    let mut m = DMatrix::zeros(n, n);
    for (u, v) in g.edges() {
        m[(u, v)] = 1.0;
        m[(v, u)] = 1.0;
    }
    m
}

pub fn spectral_radius(g: &Graph) -> f64 {
    SymmetricEigen::new(adjacency_matrix(g)).eigenvalues.max()
}

/// Unit principal eigenvector: the uniform vector projected onto the
/// eigenspace of the largest eigenvalue, which is where power iteration from
/// the uniform start converges when that eigenvalue is repeated.
pub fn eigenvector(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let eig = SymmetricEigen::new(adjacency_matrix(g));
    let top = eig.eigenvalues.max();
    let uniform = DVector::from_element(n, 1.0);
    let mut x = DVector::zeros(n);
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if (lambda - top).abs() < 1e-8 {
            let v = eig.eigenvectors.column(k);
            x += v * v.dot(&uniform);
        }
    }
    let x = x.normalize();
    let sign = if x.sum() < 0.0 { -1.0 } else { 1.0 };
    x.iter().map(|v| v * sign).collect()
}

pub fn katz(g: &Graph, alpha: f64) -> Vec<f64> {
    let n = g.node_count();
    let system = DMatrix::identity(n, n) - adjacency_matrix(g) * alpha;
    let x = system.lu().solve(&DVector::from_element(n, 1.0)).unwrap();
    x.iter().copied().collect()
}

pub fn pagerank(g: &Graph, damping: f64) -> Vec<f64> {
    let n = g.node_count();
    let a = dense(g);
    let nf = n as f64;
    let mut transition = DMatrix::zeros(n, n);
    for j in 0..n {
        let deg = a[j].iter().filter(|&&e| e).count();
        for i in 0..n {
            transition[(i, j)] = if deg == 0 {
                1.0 / nf
            } else if a[i][j] {
                1.0 / deg as f64
            } else {
                0.0
            };
        }
    }
    let system = DMatrix::identity(n, n) - transition * damping;
    let x = system
        .lu()
        .solve(&DVector::from_element(n, (1.0 - damping) / nf))
        .unwrap();
    x.iter().copied().collect()
}

/// Exhaustive enumeration of two-step transmission outcomes on the dense
/// adjacency matrix.
pub fn expected_force(g: &Graph) -> Vec<f64> {
    let a = dense(g);
    let n = a.len();
    (0..n)
        .map(|i| {
            let mut forces = Vec::new();
            for j in (0..n).filter(|&j| a[i][j]) {
                for k in 0..n {
                    if k == i || k == j || !(a[i][k] || a[j][k]) {
                        continue;
                    }
                    let cluster = [i, j, k];
                    let force: usize = (0..n)
                        .filter(|w| !cluster.contains(w))
                        .map(|w| cluster.iter().filter(|&&c| a[c][w]).count())
                        .sum();
                    forces.push(force as f64);
                }
            }
            let total: f64 = forces.iter().sum();
            if total == 0.0 {
                return 0.0;
            }
            forces
                .iter()
                .filter(|&&f| f > 0.0)
                .map(|f| {
                    let p = f / total;
                    -p * p.ln()
                })
                .sum()
        })
        .collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
