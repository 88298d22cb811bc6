mod common;

use proptest::prelude::*;

use pstlab::graph::build;
use pstlab::spectral::deleted_cospectral;
use pstlab::symmetry::{automorphisms, exists_swap, find_isomorphism, is_isomorphic, triangle_census};
use pstlab::{Graph, GraphFamilySpec as F};

fn relabel(g: &Graph, perm: &[usize]) -> Graph {
    let edges: Vec<(usize, usize, f64)> = g
        .edges()
        .into_iter()
        .map(|(u, v, w)| (perm[u].min(perm[v]), perm[u].max(perm[v]), w))
        .collect();
    Graph::from_edges(g.n(), &edges).unwrap()
}

fn graph_and_permutation() -> impl Strategy<Value = (Graph, Vec<usize>)> {
    (2usize..=7, any::<u64>(), any::<bool>()).prop_flat_map(|(n, seed, weighted)| {
        let g = common::random_connected(&mut common::rng(seed), n, weighted);
        (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

#[test]
fn group_order_matches_brute_force() {
    let mut rng = common::rng(7);
    for i in 0..100 {
        let n = 2 + i % 5;
        let g = common::random_connected(&mut rng, n, i % 3 == 0);
        let report = automorphisms(&g, usize::MAX).unwrap();
        assert_eq!(report.order, common::automorphism_count(&g) as u128, "{:?}", g.edges());
        assert!(report.permutations.iter().all(|p| p.is_automorphism(&g, 1e-9)));
    }
}

#[test]
fn known_group_orders() {
    for (spec, order) in [
        (F::Cycle(6), 12u128),
        (F::Path(5), 2),
        (F::Complete(5), 120),
        (F::Hypercube(3), 48),
        (F::Hypercube(4), 384),
    ] {
        assert_eq!(automorphisms(&build(&spec).unwrap(), 0).unwrap().order, order, "{spec:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn census_and_isomorphism_survive_relabeling((g, perm) in graph_and_permutation()) {
        let h = relabel(&g, &perm);
        let iso = find_isomorphism(&g, &h).unwrap();
        prop_assert!(iso.is_some());
        let iso = iso.unwrap();
        for (u, v, w) in g.edges() {
            prop_assert_eq!(h.weight(iso.apply(u), iso.apply(v)), w);
        }
        let mut cg = triangle_census(&g);
        let mut ch = triangle_census(&h);
        cg.sort_unstable();
        ch.sort_unstable();
        prop_assert_eq!(cg, ch);
    }

    #[test]
    fn swap_implies_cospectral_deletions(n in 3usize..=7, seed in any::<u64>(), a in 0usize..7, b in 0usize..7) {
        let g = common::random_connected(&mut common::rng(seed), n, false);
        let (a, b) = (a % n, b % n);
        prop_assume!(a != b);
        if exists_swap(&g, a, b).unwrap() {
            prop_assert!(deleted_cospectral(&g, a, b).unwrap());
        }
    }
}

#[test]
fn non_isomorphic_pairs() {
    let p4 = build(&F::Path(4)).unwrap();
    let star = Graph::from_edges(4, &[(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)]).unwrap();
    assert!(!is_isomorphic(&p4, &star).unwrap());
    let c6 = build(&F::Cycle(6)).unwrap();
    let two_triangles = Graph::from_edges(
        6,
        &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0), (3, 4, 1.0), (4, 5, 1.0), (3, 5, 1.0)],
    )
    .unwrap();
    assert!(!is_isomorphic(&c6, &two_triangles).unwrap());
}
