//! Structural properties of the model and its linear solution.

use proptest::prelude::*;
use threeagent_core::experiments::{impulse_response, ImpulseSet, PolicyMix, ShockKind, ShockSpec};
use threeagent_core::model::capitalist_budget_residual;
use threeagent_core::perturbation::{jacobians, solve_economy, solve_linear_re};
use threeagent_core::variables::{N_SHOCKS, N_VARS};
use threeagent_core::{Calibration, Economy, Equation, LinearSolution, Var, VariableIndex, Variant};

fn variants() -> impl Strategy<Value = Variant> {
    prop::sample::select(vec![Variant::THREE, Variant::TWO, Variant::PORTABILITY])
}

fn shocks() -> impl Strategy<Value = ShockKind> {
    prop::sample::select(ShockKind::ALL.to_vec())
}

fn mixes() -> impl Strategy<Value = PolicyMix> {
    prop::sample::select(PolicyMix::ALL.to_vec())
}

fn solved(mix: PolicyMix, variant: Variant) -> (Economy, LinearSolution) {
    let econ = Economy::new(&mix.apply(&Calibration::default()), variant).unwrap();
    let (_, sol) = solve_economy(&econ).unwrap();
    (econ, sol)
}

fn levels(econ: &Economy, irf: &ImpulseSet, t: Option<usize>) -> Vec<f64> {
    match t {
        None => econ.steady.values.clone(),
        Some(t) => (0..N_VARS)
            .map(|i| econ.steady.values[i] + irf.deviations[t][i])
            .collect(),
    }
}

/// Largest nonlinear residual along a linear impulse response, including
/// the omitted capitalist budget.
fn path_residual(econ: &Economy, irf: &ImpulseSet, innovation: (usize, f64)) -> (f64, f64) {
    let mut system = 0.0_f64;
    let mut walras = 0.0_f64;
    for t in 0..irf.horizon() {
        let lag = levels(econ, irf, t.checked_sub(1));
        let cur = levels(econ, irf, Some(t));
        let lead = levels(econ, irf, Some(t + 1));
        let mut shocks = vec![0.0; N_SHOCKS];
        if t == 0 {
            shocks[innovation.0] = innovation.1;
        }
        let res = econ.residuals(&lag, &cur, &lead, &shocks).unwrap();
        system = res.iter().fold(system, |m, r| m.max(r.abs()));
        walras = walras.max(capitalist_budget_residual(econ, &lag, &cur).abs());
    }
    (system, walras)
}

fn respond(econ: &Economy, sol: &LinearSolution, kind: ShockKind, size: f64) -> (ImpulseSet, f64) {
    let spec = ShockSpec::new(kind, size, 24, &econ.cal).unwrap();
    (impulse_response(sol, econ, &spec).unwrap(), spec.innovation(econ))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bond_laws_conserve_aggregate_bonds(
        variant in variants(),
        noise in prop::collection::vec(-0.01..0.01f64, 3 * N_VARS),
    ) {
        let econ = Economy::new(&Calibration::default(), variant).unwrap();
        let ss = &econ.steady.values;
        let perturb = |k: usize| -> Vec<f64> {
            (0..N_VARS).map(|i| ss[i] * (1.0 + noise[k * N_VARS + i])).collect()
        };
        let (lag, cur, lead) = (perturb(0), perturb(1), perturb(2));
        let res = econ.residuals(&lag, &cur, &lead, &[0.0; N_SHOCKS]).unwrap();
        let laws: f64 = [Equation::BondLawK, Equation::BondLawS, Equation::BondLawH]
            .iter()
            .map(|e| res[*e as usize])
            .sum();
        let c = &econ.cal;
        let expected = cur[Var::BbK as usize] + cur[Var::BbS as usize] + cur[Var::BbH as usize]
            - c.pop_k * cur[Var::Zk as usize]
            - c.pop_s * cur[Var::Zs as usize];
        prop_assert!((laws - expected).abs() < 1e-12, "{laws} vs {expected}");
    }

    #[test]
    fn linear_paths_satisfy_the_nonlinear_system_to_second_order(
        variant in variants(),
        mix in mixes(),
        kind in shocks(),
    ) {
        let (econ, sol) = solved(mix, variant);
        let size = 0.1 * kind.default_size();
        let (big, eps) = respond(&econ, &sol, kind, size);
        let (small, eps_half) = respond(&econ, &sol, kind, size / 2.0);
        let shock = kind.innovation() as usize;
        let (sys_big, walras_big) = path_residual(&econ, &big, (shock, eps));
        let (sys_small, walras_small) = path_residual(&econ, &small, (shock, eps_half));
        // Halving the shock divides a second-order error by about four.
        prop_assert!(sys_small < 0.3 * sys_big || sys_big < 1e-11, "{sys_big:e} -> {sys_small:e}");
        prop_assert!(walras_small < 0.3 * walras_big || walras_big < 1e-11, "{walras_big:e} -> {walras_small:e}");
        let bound = 100.0 * eps * eps;
        prop_assert!(sys_big < bound && walras_big < bound, "{sys_big:e} {walras_big:e} vs {bound:e}");
    }

    #[test]
    fn responses_are_linear_in_the_shock(
        variant in variants(),
        mix in mixes(),
        kind in shocks(),
        scale in -3.0..3.0f64,
    ) {
        let (econ, sol) = solved(mix, variant);
        let (unit, _) = respond(&econ, &sol, kind, 1.0);
        let (scaled, _) = respond(&econ, &sol, kind, scale);
        for (a, b) in unit.deviations.iter().zip(&scaled.deviations) {
            for (x, y) in a.iter().zip(b) {
                prop_assert!((scale * x - y).abs() <= 1e-12 * (1.0 + x.abs()));
            }
        }
    }

    #[test]
    fn equation_scaling_leaves_solution_unchanged(
        variant in variants(),
        mix in mixes(),
        rows in prop::collection::vec((0usize..39, 0.05..20.0f64), 1..8),
    ) {
        let econ = Economy::new(&mix.apply(&Calibration::default()), variant).unwrap();
        let j = jacobians(&econ).unwrap();
        let states = VariableIndex::default().state_indices();
        let base = solve_linear_re(&j, &states).unwrap();
        let mut scaled = j.clone();
        for (row, factor) in &rows {
            scaled.scale_row(*row, *factor);
        }
        let sol = solve_linear_re(&scaled, &states).unwrap();
        prop_assert_eq!(sol.classification, base.classification);
        prop_assert_eq!(sol.eigen_report.n_explosive, base.eigen_report.n_explosive);
        let (p0, p1) = (base.policy().unwrap(), sol.policy().unwrap());
        let dp = (&p0.p - &p1.p).abs().max();
        let dq = (&p0.q - &p1.q).abs().max();
        prop_assert!(dp < 1e-8 && dq < 1e-8, "dP {dp:e}, dQ {dq:e}");
    }
}
