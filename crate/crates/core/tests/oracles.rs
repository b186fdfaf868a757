//! Exact algorithms checked against exhaustive enumeration on small graphs.

use mcgraph::clique::{brute_force_maximal_cliques, enumerate_maximal_cliques};
use mcgraph::graph::{edge_list_string, parse_edge_list_str, Graph};
use mcgraph::stats::{
    characteristic_path_length, four_clique_count, four_cycle_count, fraction_connected_pairs,
    transitivity, triangle_count, triangle_sequence,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_graph(n: usize, density: f64, rng: &mut impl Rng) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

fn brute_triangles(g: &Graph) -> u64 {
    let n = g.node_count();
    let mut count = 0;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if g.has_edge(i, j) && g.has_edge(j, k) && g.has_edge(i, k) {
                    count += 1;
                }
            }
        }
    }
    count
}

fn brute_four_cliques(g: &Graph) -> u64 {
    let n = g.node_count();
    let mut count = 0;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let q = [a, b, c, d];
                    let all = (0..4).all(|x| (x + 1..4).all(|y| g.has_edge(q[x], q[y])));
                    if all {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

/// Closed walks i-j-k-l-i over distinct nodes, divided by 8.
fn brute_four_cycles(g: &Graph) -> u64 {
    let n = g.node_count();
    let mut walks = 0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let distinct = i != j && i != k && i != l && j != k && j != l && k != l;
                    if distinct
                        && g.has_edge(i, j)
                        && g.has_edge(j, k)
                        && g.has_edge(k, l)
                        && g.has_edge(l, i)
                    {
                        walks += 1;
                    }
                }
            }
        }
    }
    assert_eq!(walks % 8, 0);
    walks / 8
}

#[test]
fn random_graphs_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(20240601);
    let mut checked = 0;
    for &density in &[0.1, 0.3, 0.5, 0.8] {
        for _ in 0..30 {
            let n = rng.gen_range(1..=12);
            let g = random_graph(n, density, &mut rng);
            assert_eq!(
                enumerate_maximal_cliques(&g).unwrap(),
                brute_force_maximal_cliques(&g).unwrap(),
                "cliques differ on {}",
                edge_list_string(&g)
            );
            assert_eq!(triangle_count(&g), brute_triangles(&g));
            assert_eq!(four_clique_count(&g), brute_four_cliques(&g));
            assert_eq!(four_cycle_count(&g), brute_four_cycles(&g));
            checked += 1;
        }
    }
    assert!(checked >= 100);
}

#[test]
fn gnp_ten_half_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let g = random_graph(10, 0.4, &mut rng);
        assert_eq!(
            enumerate_maximal_cliques(&g).unwrap(),
            brute_force_maximal_cliques(&g).unwrap()
        );
        let g = random_graph(10, 0.5, &mut rng);
        assert_eq!(four_clique_count(&g), brute_four_cliques(&g));
        assert_eq!(four_cycle_count(&g), brute_four_cycles(&g));
    }
}

#[test]
fn clique_enumeration_on_denser_graphs() {
    // larger than the brute-force limit; check the structural invariants
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for &(n, density) in &[(40, 0.3), (60, 0.5), (30, 0.9)] {
        let g = random_graph(n, density, &mut rng);
        let cs = enumerate_maximal_cliques(&g).unwrap();
        for c in cs.cliques() {
            for (a, &i) in c.iter().enumerate() {
                for &j in &c[a + 1..] {
                    assert!(g.has_edge(i, j));
                }
            }
            let extendable = (0..n).any(|v| !c.contains(&v) && c.iter().all(|&u| g.has_edge(u, v)));
            assert!(!extendable);
        }
        for (i, j) in g.edges() {
            let recount = cs
                .cliques()
                .iter()
                .filter(|c| c.contains(&i) && c.contains(&j))
                .count();
            assert!(recount >= 1);
            assert_eq!(cs.multiplicity(i, j), recount);
        }
    }
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut b = bits.into_iter();
            for i in 0..n {
                for j in i + 1..n {
                    if b.next().unwrap() {
                        edges.push((i, j));
                    }
                }
            }
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn edge_list_round_trip(g in arb_graph(14)) {
        let text = edge_list_string(&g);
        let parsed = parse_edge_list_str(&text).unwrap().graph;
        // trailing isolated nodes are not representable in an edge list
        prop_assert_eq!(parsed.edge_count(), g.edge_count());
        prop_assert_eq!(edge_list_string(&parsed), text);
        prop_assert!(parsed.is_well_formed());
    }

    #[test]
    fn cliques_cover_edges_with_consistent_multiplicity(g in arb_graph(12)) {
        let cs = enumerate_maximal_cliques(&g).unwrap();
        prop_assert_eq!(&cs, &brute_force_maximal_cliques(&g).unwrap());
        for i in 0..g.node_count() {
            for j in i + 1..g.node_count() {
                let recount = cs.cliques().iter().filter(|c| c.contains(&i) && c.contains(&j)).count();
                prop_assert_eq!(cs.multiplicity(i, j), recount);
                prop_assert_eq!(recount >= 1, g.has_edge(i, j));
            }
        }
    }

    #[test]
    fn triangle_sequence_sums_to_three_times_count(g in arb_graph(14)) {
        let seq = triangle_sequence(&g);
        prop_assert_eq!(seq.iter().sum::<u64>(), 3 * triangle_count(&g));
        if let Some(t) = transitivity(&g) {
            prop_assert!((0.0..=1.0).contains(&t));
        }
    }

    #[test]
    fn connected_fraction_grows_with_edges(g in arb_graph(12), extra in any::<(usize, usize)>()) {
        let n = g.node_count();
        prop_assume!(n >= 2);
        let (u, v) = (extra.0 % n, extra.1 % n);
        prop_assume!(u != v);
        let bigger = Graph::from_edges(n, g.edges().chain([(u, v)])).unwrap();
        prop_assert!(fraction_connected_pairs(&bigger).unwrap() >= fraction_connected_pairs(&g).unwrap());
        let connected = mcgraph::stats::component_sizes(&g).len() == 1;
        prop_assert_eq!(fraction_connected_pairs(&g).unwrap() == 1.0, connected);
        if let Some(l) = characteristic_path_length(&g) {
            prop_assert!(l >= 1.0);
        }
    }
}
