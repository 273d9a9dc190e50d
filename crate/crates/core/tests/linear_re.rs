mod common;

use common::{brute_force_solvent, build, max_abs};
use nalgebra::DMatrix;
use proptest::prelude::*;
use threeagent_core::perturbation::{solve_linear_re, Classification, StructuralJacobians};

/// `n` values from evenly spaced slots, jittered, so roots stay separated.
fn spaced(n: usize, lo: f64, hi: f64, slots: usize) -> impl Strategy<Value = Vec<f64>> {
    let width = (hi - lo) / slots as f64;
    let picks = prop::sample::subsequence((0..slots).collect::<Vec<_>>(), n);
    (picks, prop::collection::vec(0.1..0.9f64, n)).prop_map(move |(idx, jit)| {
        idx.iter()
            .zip(jit)
            .map(|(&k, u)| lo + width * (k as f64 + u))
            .collect()
    })
}

fn system() -> impl Strategy<Value = (usize, Vec<f64>, Vec<f64>, Vec<f64>)> {
    (1usize..=6).prop_flat_map(|n| {
        let stable = spaced(n, -0.9, 0.9, 12);
        let unstable = (spaced(n, 1.2, 3.0, 9), prop::collection::vec(any::<bool>(), n)).prop_map(
            |(m, neg)| m.iter().zip(neg).map(|(v, s)| if s { -v } else { *v }).collect(),
        );
        let mix = prop::collection::vec(-1.0..1.0f64, 3 * n * n + n);
        (Just(n), stable, unstable, mix)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn recovers_known_stable_solvent((n, stable, unstable, mix) in system()) {
        let sys = build(n, &stable, &unstable, &mix);
        let states: Vec<usize> = (0..n).collect();
        let sol = solve_linear_re(&sys.j, &states).unwrap();
        prop_assert_eq!(sol.classification, Classification::Determinate);
        let policy = sol.policy().unwrap();
        let err = max_abs(&(&policy.p - &sys.p));
        prop_assert!(err < 1e-8, "solvent error {err:e}");
        let oracle = brute_force_solvent(&sys.j);
        let err = max_abs(&(&policy.p - &oracle));
        prop_assert!(err < 1e-8, "distance to root-selection oracle {err:e}");
        let impact = (&sys.j.a * &policy.p + &sys.j.b) * &policy.q + &sys.j.d;
        prop_assert!(max_abs(&impact) < 1e-8);
    }

    #[test]
    fn too_few_explosive_roots_is_indeterminate((n, stable, mut unstable, mix) in system()) {
        unstable[0] = 0.5;
        let sys = build(n, &stable, &unstable, &mix);
        let states: Vec<usize> = (0..n).collect();
        let sol = solve_linear_re(&sys.j, &states).unwrap();
        prop_assert_eq!(sol.classification, Classification::Indeterminate);
        prop_assert!(sol.policy.is_none());
    }

    #[test]
    fn too_many_explosive_roots_is_explosive((n, mut stable, unstable, mix) in system()) {
        stable[n - 1] = 1.5;
        let sys = build(n, &stable, &unstable, &mix);
        let states: Vec<usize> = (0..n).collect();
        let sol = solve_linear_re(&sys.j, &states).unwrap();
        prop_assert_eq!(sol.classification, Classification::Explosive);
    }
}

#[test]
fn scalar_forward_looking_equation() {
    // x(t) = 0.5 E x(t+1) + e(t): no lags, so the solution is x = e.
    let j = StructuralJacobians {
        a: DMatrix::from_element(1, 1, -0.5),
        b: DMatrix::from_element(1, 1, 1.0),
        c: DMatrix::from_element(1, 1, 0.0),
        d: DMatrix::from_element(1, 1, -1.0),
    };
    let sol = solve_linear_re(&j, &[]).unwrap();
    assert_eq!(sol.classification, Classification::Determinate);
    let policy = sol.policy().unwrap();
    assert!(policy.p[(0, 0)].abs() < 1e-14);
    assert!((policy.q[(0, 0)] - 1.0).abs() < 1e-12);
}
