use proptest::prelude::*;

use pstlab::feder::{multiset_count, orbit_partition, verify_feder_iso};
use pstlab::graph::{build, cartesian_power};
use pstlab::partition::{partition_matrix, quotient};
use pstlab::spectral::{eigendecompose, propagator};
use pstlab::{Complex, GraphFamilySpec as F, Matrix};

#[test]
fn boson_isomorphism_on_small_graphs() {
    for (spec, kmax) in [(F::Complete(2), 6), (F::Path(3), 4), (F::Complete(3), 3), (F::Path(4), 2)] {
        let g = build(&spec).unwrap();
        for k in 1..=kmax {
            let r = verify_feder_iso(&g, k).unwrap();
            assert!(r.holds && r.deviation < 1e-12, "{spec:?} k={k}: {}", r.deviation);
        }
    }
}

#[test]
fn orbit_count_is_multiset_count() {
    for (n, k) in [(2, 5), (3, 3), (4, 3), (5, 2), (6, 4)] {
        let g = build(&F::Cycle(n.max(3))).unwrap();
        let n = g.n();
        assert_eq!(Some(orbit_partition(&g, k).unwrap().partition.m()), multiset_count(n, k));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// Compressing the walk on the k-fold product by orbit cells commutes with evolution.
    #[test]
    fn quotient_propagator_identity(which in 0usize..3, k in 1usize..=3, t in 0.0f64..6.0) {
        let spec = [F::Complete(2), F::Path(3), F::Complete(3)][which].clone();
        let g = build(&spec).unwrap();
        let power = cartesian_power(&g, k).unwrap();
        let pi = orbit_partition(&g, k).unwrap().partition;
        let q: Matrix = partition_matrix(&pi).entries;
        let big = propagator(&eigendecompose(&power).unwrap(), t).unwrap().matrix;
        let small_graph = quotient(&power, &pi).unwrap().quotient;
        let small = propagator(&eigendecompose(&small_graph).unwrap(), t).unwrap().matrix;
        let m = pi.m();
        let mut worst = 0.0f64;
        for r in 0..m {
            for c in 0..m {
                let mut acc = Complex::zero();
                for x in 0..power.n() {
                    for y in 0..power.n() {
                        acc = acc + big[(x, y)].scale(q[(x, r)] * q[(y, c)]);
                    }
                }
                worst = worst.max((acc - small[(r, c)]).abs());
            }
        }
        prop_assert!(worst < 1e-10, "{worst}");
    }
}
