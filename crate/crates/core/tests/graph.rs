mod common;

use coarse_bundles::graph::{cone_off, generators, load_graph, Graph, OracleMode};
use proptest::prelude::*;

fn arb_graph() -> impl Strategy<Value = Graph> {
    (2usize..40, 0usize..40, any::<u64>()).prop_map(|(n, extra, seed)| common::random_graph(n, extra, seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distance_is_a_metric(g in arb_graph()) {
        let n = g.vertex_count() as u32;
        for u in 0..n {
            prop_assert_eq!(g.dist(u, u), 0);
            for v in 0..n {
                prop_assert_eq!(g.dist(u, v), g.dist(v, u));
                if u != v {
                    prop_assert!(g.dist(u, v) > 0);
                }
                for w in 0..n {
                    prop_assert!(g.dist(u, w) <= g.dist(u, v) + g.dist(v, w));
                }
            }
        }
    }

    #[test]
    fn distances_match_plain_bfs(g in arb_graph()) {
        let d = common::all_pairs(&g);
        let lazy = g.clone().with_matrix_threshold(0);
        for u in g.vertices() {
            for v in g.vertices() {
                prop_assert_eq!(g.dist(u, v), d[u as usize][v as usize]);
                prop_assert_eq!(lazy.dist(u, v), d[u as usize][v as usize]);
            }
        }
    }

    #[test]
    fn geodesics_are_shortest_paths(g in arb_graph()) {
        for u in g.vertices() {
            for v in g.vertices() {
                let p = g.geodesic(u, v).unwrap();
                prop_assert_eq!(p.len() as u32, g.dist(u, v));
                prop_assert_eq!(p.start(), u);
                prop_assert_eq!(p.end(), v);
                for w in p.vertices().windows(2) {
                    prop_assert!(g.has_edge(w[0], w[1]));
                }
            }
        }
    }

    #[test]
    fn coning_never_increases_distance(g in arb_graph(), picks in prop::collection::vec(prop::collection::vec(any::<u32>(), 1..5), 0..4)) {
        let n = g.vertex_count() as u32;
        let subsets: Vec<Vec<u32>> = picks.iter().map(|s| s.iter().map(|x| x % n).collect()).collect();
        let c = cone_off(&g, &subsets).unwrap();
        prop_assert_eq!(c.vertex_count(), g.vertex_count() + subsets.len());
        for u in g.vertices() {
            for v in g.vertices() {
                prop_assert!(c.dist(u, v) <= g.dist(u, v));
            }
        }
    }

    #[test]
    fn balls_match_definition(g in arb_graph(), r in 0u32..5) {
        for c in g.vertices() {
            let ball = g.ball(c, r).unwrap();
            let want: Vec<u32> = g.vertices().filter(|&v| g.dist(c, v) <= r).collect();
            prop_assert_eq!(ball, want);
        }
    }
}

#[test]
fn geodesic_lengths_up_to_200_vertices() {
    for (i, n) in [50usize, 120, 200].into_iter().enumerate() {
        let g = common::random_graph(n, n / 3, i as u64);
        for u in g.vertices() {
            for v in g.vertices() {
                assert_eq!(g.geodesic(u, v).unwrap().len() as u32, g.dist(u, v));
            }
        }
    }
}

#[test]
fn edge_list_with_duplicates_and_comments() {
    let text = "# header\n0 1\n0 1\n1 0\n";
    let g = load_graph(text.as_bytes()).unwrap();
    assert_eq!(g.edge_count(), 1);
    assert_eq!(g.oracle().mode(), OracleMode::ExactMatrix);
}

#[test]
fn c8_ball_has_five_vertices() {
    let c8 = generators::cycle(8);
    let d = common::all_pairs(&c8);
    assert_eq!(c8.ball(0, 2).unwrap().len(), d[0].iter().filter(|&&x| x <= 2).count());
    assert_eq!(c8.distance(0, 5).unwrap(), d[0][5]);
}
