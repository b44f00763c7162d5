mod common;

use epicurve::graph::{Graph, UNREACHABLE};
use proptest::prelude::*;

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..(3 * n))
            .prop_map(move |pairs| Graph::new(n, pairs.into_iter().filter(|(u, v)| u != v)).unwrap())
    })
}

fn is_symmetric(g: &Graph) -> bool {
    g.nodes()
        .all(|u| g.neighbors(u).unwrap().iter().all(|&v| g.has_edge(v, u) && v != u))
}

proptest! {
    #[test]
    fn construction_invariants(g in arb_graph(40)) {
        prop_assert!(is_symmetric(&g));
        prop_assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.edge_count());
        for u in g.nodes() {
            let adj = g.neighbors(u).unwrap();
            prop_assert!(adj.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn bfs_matches_floyd_warshall(g in arb_graph(50)) {
        let d = common::floyd_warshall(&common::dense(&g));
        for s in g.nodes() {
            let bfs = g.bfs_distances(s).unwrap();
            for v in g.nodes() {
                let expected = (d[s][v] < common::INF).then_some(d[s][v] as u32);
                prop_assert_eq!(bfs.get(v), expected);
            }
            for (u, v) in g.edges() {
                let (du, dv) = (bfs.as_slice()[u], bfs.as_slice()[v]);
                if du != UNREACHABLE && dv != UNREACHABLE {
                    prop_assert!(du.abs_diff(dv) <= 1);
                }
            }
        }
    }

    #[test]
    fn isolation_properties(g in arb_graph(30), picks in prop::collection::vec(0usize..30, 0..6)) {
        let targets: Vec<usize> = picks.into_iter().filter(|&t| t < g.node_count()).collect();
        let h = g.isolate_nodes(&targets).unwrap();
        prop_assert_eq!(h.node_count(), g.node_count());
        prop_assert!(h.edge_count() <= g.edge_count());
        prop_assert!(is_symmetric(&h));
        for (u, v) in h.edges() {
            prop_assert!(g.has_edge(u, v));
            prop_assert!(!targets.contains(&u) && !targets.contains(&v));
        }
        for (u, v) in g.edges() {
            if !targets.contains(&u) && !targets.contains(&v) {
                prop_assert!(h.has_edge(u, v));
            }
        }
        prop_assert_eq!(h.isolate_nodes(&targets).unwrap(), h);
    }

    #[test]
    fn clustering_in_unit_interval(g in arb_graph(30)) {
        if let Ok(c) = g.global_clustering_coefficient() {
            prop_assert!((0.0..=1.0).contains(&c));
        }
    }

    #[test]
    fn edge_list_round_trip(g in arb_graph(30)) {
        prop_assert_eq!(Graph::from_edge_list(&g.to_edge_list()).unwrap(), g);
    }

    #[test]
    fn trees_have_zero_clustering(parents in prop::collection::vec(any::<prop::sample::Index>(), 2..40)) {
        // node i + 1 hangs off a random earlier node
        let edges: Vec<(usize, usize)> = parents.iter().enumerate().map(|(i, p)| (p.index(i + 1), i + 1)).collect();
        let tree = Graph::new(parents.len() + 1, edges).unwrap();
        if let Ok(c) = tree.global_clustering_coefficient() {
            prop_assert_eq!(c, 0.0);
        }
    }
}

#[test]
fn complete_graphs_have_unit_clustering() {
    for n in 3..10 {
        let g = Graph::new(n, (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))).unwrap();
        assert_eq!(g.global_clustering_coefficient().unwrap(), 1.0);
    }
}

#[test]
fn clustering_matches_triple_enumeration() {
    for seed in 0..10 {
        let g = common::erdos_renyi(25, 0.2, seed);
        let a = common::dense(&g);
        let (mut closed, mut total) = (0u64, 0u64);
        // ordered by centre, unordered over the two ends
        for c in 0..25 {
            for x in 0..25 {
                for y in (x + 1)..25 {
                    if x != c && y != c && a[c][x] && a[c][y] {
                        total += 1;
                        closed += a[x][y] as u64;
                    }
                }
            }
        }
        let expected = closed as f64 / total as f64;
        assert!((g.global_clustering_coefficient().unwrap() - expected).abs() < 1e-15);
    }
}
