//! Undirected simple graphs over dense node indices.
//!
//! Adjacency lists are kept sorted so that neighbor iteration, and therefore
//! everything built on top of it, is deterministic.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Dense node index in `0..n`. Isolation never renumbers nodes.
pub type NodeId = usize;

/// Hop count marking a node that cannot be reached from the source.
pub const UNREACHABLE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<NodeId>>,
    edge_count: usize,
}

impl Graph {
    /// Builds a simple undirected graph. Duplicate edges (in either
    /// orientation) are collapsed; self-loops and out-of-range endpoints are
    /// rejected.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            check_node(u, n)?;
            check_node(v, n)?;
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        Ok(Self::from_raw_adjacency(adjacency))
    }

    /// Sorts and deduplicates every list. Callers guarantee symmetry and the
    /// absence of self-loops.
    pub(crate) fn from_raw_adjacency(mut adjacency: Vec<Vec<NodeId>>) -> Self {
        let mut twice_edges = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            twice_edges += list.len();
        }
        Graph {
            adjacency,
            edge_count: twice_edges / 2,
        }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.adjacency.len()
    }

    pub fn degree(&self, node: NodeId) -> Result<usize> {
        self.neighbors(node).map(<[NodeId]>::len)
    }

    /// Sorted neighbors of `node`.
    pub fn neighbors(&self, node: NodeId) -> Result<&[NodeId]> {
        check_node(node, self.node_count())?;
        Ok(&self.adjacency[node])
    }

    /// Unchecked accessors for hot loops where the index comes from the graph.
    pub(crate) fn adj(&self, node: NodeId) -> &[NodeId] {
        &self.adjacency[node]
    }

    pub(crate) fn deg(&self, node: NodeId) -> usize {
        self.adjacency[node].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adjacency
            .get(u)
            .is_some_and(|list| list.binary_search(&v).is_ok())
    }

    /// Each edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn bfs_distances(&self, source: NodeId) -> Result<DistanceMap> {
        check_node(source, self.node_count())?;
        let mut dist = vec![UNREACHABLE; self.node_count()];
        bfs_into(self, source, &mut dist, &mut VecDeque::new());
        Ok(DistanceMap { source, dist })
    }

    /// Returns a copy with every edge incident to `targets` removed. Node
    /// count and all other edges are preserved.
    pub fn isolate_nodes(&self, targets: &[NodeId]) -> Result<Graph> {
        let n = self.node_count();
        let mut cut = vec![false; n];
        for &t in targets {
            check_node(t, n)?;
            cut[t] = true;
        }
        let mut edge_count = 0;
        let adjacency: Vec<Vec<NodeId>> = self
            .adjacency
            .iter()
            .enumerate()
            .map(|(u, list)| {
                if cut[u] {
                    return Vec::new();
                }
                let kept: Vec<NodeId> = list.iter().copied().filter(|&v| !cut[v]).collect();
                edge_count += kept.len();
                kept
            })
            .collect();
        Ok(Graph {
            adjacency,
            edge_count: edge_count / 2,
        })
    }

    /// Number of triangles, each counted once.
    pub fn triangle_count(&self) -> u64 {
        let mut triangles = 0u64;
        for (u, list) in self.adjacency.iter().enumerate() {
            for &v in list.iter().filter(|&&v| v > u) {
                // common neighbours w > v of the sorted lists
                triangles += count_common_above(list, &self.adjacency[v], v);
            }
        }
        triangles
    }

    /// Connected triples: Σ C(deg, 2).
    pub fn triplet_count(&self) -> u64 {
        self.adjacency
            .iter()
            .map(|l| {
                let d = l.len() as u64;
                d * d.saturating_sub(1) / 2
            })
            .sum()
    }

    /// Global clustering coefficient (transitivity): three times the number of
    /// triangles over the number of connected triples.
    ///
    /// Fails with [`Error::NoTriplets`] when no node has degree two or more,
    /// which keeps "no clustering" (0.0) distinct from "undefined".
    pub fn global_clustering_coefficient(&self) -> Result<f64> {
        let triplets = self.triplet_count();
        if triplets == 0 {
            return Err(Error::NoTriplets);
        }
        Ok((3 * self.triangle_count()) as f64 / triplets as f64)
    }

    /// Parses the edge-list format written by [`Graph::to_edge_list`].
    pub fn from_edge_list(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());

        let (header_line, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing \"n <count>\" header".into(),
        })?;
        let n = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["n", count] => count.parse::<usize>().map_err(|e| Error::Parse {
                line: header_line,
                message: format!("bad node count {count:?}: {e}"),
            })?,
            _ => {
                return Err(Error::Parse {
                    line: header_line,
                    message: format!("expected \"n <count>\" header, got {header:?}"),
                })
            }
        };

        let mut adjacency = vec![Vec::new(); n];
        for (line, text) in lines {
            let fields: Vec<&str> = text.split_whitespace().collect();
            let [u, v] = fields.as_slice() else {
                return Err(Error::Parse {
                    line,
                    message: format!("expected two node ids, got {text:?}"),
                });
            };
            let parse = |s: &str| {
                s.parse::<usize>().map_err(|e| Error::Parse {
                    line,
                    message: format!("bad node id {s:?}: {e}"),
                })
            };
            let (u, v) = (parse(u)?, parse(v)?);
            for node in [u, v] {
                if node >= n {
                    return Err(Error::Parse {
                        line,
                        message: format!("node {node} out of range for n = {n}"),
                    });
                }
            }
            if u == v {
                return Err(Error::Parse {
                    line,
                    message: format!("self-loop on node {u}"),
                });
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        Ok(Self::from_raw_adjacency(adjacency))
    }

    /// `n <count>` header followed by one `u v` line per edge (`u < v`).
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n {}\n", self.node_count());
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_edge_list(&text)
    }

    pub fn write_edge_list(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_edge_list()).map_err(|e| Error::io(path, e))
    }
}

fn count_common_above(a: &[NodeId], b: &[NodeId], floor: NodeId) -> u64 {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                if a[i] > floor {
                    count += 1;
                }
                i += 1;
                j += 1;
            }
        }
    }
    count
}

pub(crate) fn check_node(node: NodeId, n: usize) -> Result<()> {
    if node < n {
        Ok(())
    } else {
        Err(Error::OutOfRange { node, n })
    }
}

/// Breadth-first hop counts from `source` into a caller-owned buffer, which
/// must already be filled with [`UNREACHABLE`]. Returns the visit order.
pub(crate) fn bfs_into(
    g: &Graph,
    source: NodeId,
    dist: &mut [u32],
    queue: &mut VecDeque<NodeId>,
) {
    queue.clear();
    dist[source] = 0;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let next = dist[u] + 1;
        for &v in g.adj(u) {
            if dist[v] == UNREACHABLE {
                dist[v] = next;
                queue.push_back(v);
            }
        }
    }
}

/// Single-source hop counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMap {
    source: NodeId,
    dist: Vec<u32>,
}

impl DistanceMap {
    pub fn source(&self) -> NodeId {
        self.source
    }

    /// `None` when `node` is unreachable from the source.
    pub fn get(&self, node: NodeId) -> Option<u32> {
        match self.dist[node] {
            UNREACHABLE => None,
            d => Some(d),
        }
    }

    /// Raw hop counts with [`UNREACHABLE`] as the sentinel.
    pub fn as_slice(&self) -> &[u32] {
        &self.dist
    }
}
