mod common;

use nalgebra::DMatrix;
use proptest::prelude::*;

use pstlab::graph::{build, scale};
use pstlab::spectral::{eigendecompose, fidelity, p4_spectrum, p5_spectrum, propagator};
use pstlab::{Graph, GraphFamilySpec as F};

fn connected_graph() -> impl Strategy<Value = Graph> {
    (2usize..=7, any::<u64>(), any::<bool>())
        .prop_map(|(n, seed, weighted)| common::random_connected(&mut common::rng(seed), n, weighted))
}

fn nalgebra_eigenvalues(g: &Graph) -> Vec<f64> {
    let n = g.n();
    let m = DMatrix::from_fn(n, n, |r, c| g.weight(r, c));
    let mut ev: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn propagator_is_unitary(g in connected_graph(), t in -20.0f64..20.0) {
        let u = propagator(&eigendecompose(&g).unwrap(), t).unwrap();
        prop_assert!(u.unitarity_residual() < 1e-9);
    }

    #[test]
    fn decomposition_reconstructs(g in connected_graph()) {
        let s = eigendecompose(&g).unwrap();
        let bound = 1e-9 * (1.0 + g.adjacency().max_abs());
        prop_assert!(s.reconstruction_residual(g.adjacency()) < bound);
        prop_assert!(s.orthogonality_residual() < 1e-9);
        prop_assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn eigenvalues_match_nalgebra(g in connected_graph()) {
        let ours = eigendecompose(&g).unwrap().eigenvalues;
        for (x, y) in ours.iter().zip(nalgebra_eigenvalues(&g)) {
            prop_assert!((x - y).abs() < 1e-9, "{x} vs {y}");
        }
    }

    #[test]
    fn scaling_law(g in connected_graph(), c in 0.1f64..4.0, t in 0.0f64..10.0, a in 0usize..7, b in 0usize..7) {
        let (a, b) = (a % g.n(), b % g.n());
        let lhs = fidelity(&scale(&g, c).unwrap(), a, b, t).unwrap();
        let rhs = fidelity(&g, a, b, c * t).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn time_reversal_and_endpoint_symmetry(g in connected_graph(), t in 0.0f64..10.0, a in 0usize..7, b in 0usize..7) {
        let (a, b) = (a % g.n(), b % g.n());
        let f = fidelity(&g, a, b, t).unwrap();
        prop_assert!((f - fidelity(&g, a, b, -t).unwrap()).abs() < 1e-12);
        prop_assert!((f - fidelity(&g, b, a, t).unwrap()).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn closed_form_four_path(a in 1e-3f64..=5.0, b in 1e-3f64..=5.0) {
        let g = build(&F::WeightedP4 { a, b }).unwrap();
        let numeric = eigendecompose(&g).unwrap().eigenvalues;
        let mut exact = p4_spectrum(a, b).eigenvalues();
        exact.sort_by(f64::total_cmp);
        for (x, y) in numeric.iter().zip(&exact) {
            prop_assert!((x - y).abs() < 1e-10, "{x} vs {y}");
        }
    }

    #[test]
    fn closed_form_five_path(a in 1e-3f64..=5.0, b in 1e-3f64..=5.0) {
        let g = build(&F::WeightedP5 { a, b }).unwrap();
        let numeric = eigendecompose(&g).unwrap().eigenvalues;
        let pairs = p5_spectrum(a, b).eigenpairs();
        for (x, (y, v)) in numeric.iter().zip(&pairs) {
            prop_assert!((x - y).abs() < 1e-10, "{x} vs {y}");
            // A v = λ v for the closed-form vector
            for r in 0..5 {
                let av: f64 = (0..5).map(|c| g.weight(r, c) * v[c]).sum();
                prop_assert!((av - y * v[r]).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn hypercube_antipodes() {
    for d in 1..=6u32 {
        let q = build(&F::Hypercube(d)).unwrap();
        let f = fidelity(&q, 0, (1 << d) - 1, std::f64::consts::FRAC_PI_2).unwrap();
        assert!(f > 1.0 - 1e-10, "Q{d}: {f}");
    }
}
