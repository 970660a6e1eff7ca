//! Property suites over randomized inputs.

use monodromy::graph::PointArray;
use monodromy::linalg::{lu_solve, CMatrix};
use monodromy::polysys::{CoeffForm, ParametricSystem, Polynomial, Term};
use monodromy::scalar::{inf_dist, inf_norm};
use num_complex::Complex;
use proptest::prelude::*;

type C = Complex<f64>;

fn complex() -> impl Strategy<Value = C> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex::new(re, im))
}

fn point(len: usize) -> impl Strategy<Value = Vec<C>> {
    prop::collection::vec(complex(), len)
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn point_array_keeps_points_separated(points in prop::collection::vec(point(3), 1..40)) {
        let tol = 1e-3;
        let mut q = PointArray::new(tol);
        for x in &points {
            let (idx, _) = q.insert(x.clone());
            prop_assert!(idx < q.len());
        }
        // Pairwise separation above tolerance, indices stable.
        for a in 0..q.len() {
            for b in a + 1..q.len() {
                let d = inf_dist(q.get(a), q.get(b));
                prop_assert!(d > tol * (1.0 + inf_norm(q.get(a))));
            }
        }
        // Re-inserting any stored point is a no-op with a stable index.
        let before = q.len();
        for i in 0..before {
            let (idx, is_new) = q.insert(q.get(i).clone());
            prop_assert_eq!(idx, i);
            prop_assert!(!is_new);
        }
        prop_assert_eq!(q.len(), before);
    }

    #[test]
    fn lu_solve_residual_is_small(
        rows in prop::collection::vec(point(6), 6),
        b in point(6),
    ) {
        let a = CMatrix::from_rows(rows);
        // Skip near-singular draws; singularity is reported, not solved.
        if let Ok(x) = lu_solve(&a, &b) {
            let r: f64 = a
                .mul_vec(&x)
                .iter()
                .zip(&b)
                .map(|(u, v)| (u - v).norm())
                .fold(0.0, f64::max);
            // Backward-stable solves keep the residual near roundoff
            // relative to the data; random unit-box draws are rarely so
            // ill-conditioned that 1e-8 is approached.
            prop_assert!(r <= 1e-8 * (1.0 + inf_norm(&b)), "residual {r}");
        }
    }

    #[test]
    fn system_json_round_trips(
        exps in prop::collection::vec(prop::collection::vec(0u32..5, 2), 1..6),
        coeffs in prop::collection::vec((complex(), 0usize..3, complex()), 1..6),
    ) {
        let terms: Vec<Term<f64>> = exps
            .iter()
            .zip(&coeffs)
            .map(|(e, (c0, k, ck))| Term {
                exponents: e.clone(),
                coeff: CoeffForm { constant: *c0, linear: vec![(*k, *ck)] },
            })
            .collect();
        let system = ParametricSystem::new(2, 3, vec![Polynomial { terms }]).unwrap();
        let json = system.to_json();
        let back = ParametricSystem::from_json(&json).unwrap();
        prop_assert_eq!(system, back);
    }
}
