//! Closed-form deterministic steady state.
//!
//! All types consume the same amount at rest. Savers and hand-to-mouth
//! households end the period with no bonds, so capitalists hold the whole
//! public debt; the type-specific transfers close each budget constraint.

use serde::Serialize;

use crate::calibration::{AgentCount, Calibration, FiscalMode, Variant};
use crate::error::{ModelError, Result};
use crate::model::Economy;
use crate::transition::complete_transition_matrix;
use crate::variables::{Var, N_SHOCKS, N_VARS};

/// Maximum residual tolerated at the computed steady state.
pub const STEADY_STATE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SteadyState {
    /// One value per variable, in [`Var`] order.
    pub values: Vec<f64>,
    /// Labor disutility weight implied by the hours target.
    pub psi: f64,
    /// Fixed production cost that zeroes profits.
    pub fixed_cost: f64,
    /// Net transfers to K, S and H households.
    pub tau: [f64; 3],
    /// Largest absolute residual of the nonlinear system at rest.
    pub max_residual: f64,
}

impl SteadyState {
    pub fn get(&self, v: Var) -> f64 {
        self.values[v as usize]
    }
}

/// Computes the steady state and verifies that it zeroes every residual.
pub fn steady_state(cal: &Calibration, variant: Variant) -> Result<SteadyState> {
    variant.validate()?;
    let cal = cal.for_variant(&variant);
    cal.validate(&variant)?;
    if variant.fiscal == FiscalMode::Nominal && cal.pi_star != 1.0 {
        return Err(ModelError::InvalidCalibration(format!(
            "nominal fiscal rules need a constant price level: Pi_star = {} must be 1",
            cal.pi_star
        )));
    }
    let tm = complete_transition_matrix(&cal, &variant)?;
    let l = &tm.lambda;
    let (pk, ps, ph) = (cal.pop_k, cal.pop_s, cal.pop_h);

    let price = 1.0;
    let infl = cal.pi_star;
    let rb = infl / cal.beta;
    let real_rate = 1.0 / cal.beta;
    let mc = (cal.epsilon - 1.0 + (1.0 - cal.beta) * cal.xi * infl * (infl - 1.0)) / cal.epsilon;
    let rk = 1.0 / cal.beta - 1.0 + cal.delta;
    let n = cal.n_star;
    let mpk = rk / mc;
    let capital = (mpk / cal.alpha).powf(1.0 / (cal.alpha - 1.0)) * n;
    if !(capital > 0.0 && capital.is_finite()) {
        return Err(ModelError::InfeasibleSteadyState(format!(
            "capital stock {capital} is not positive"
        )));
    }
    let mpl = (1.0 - cal.alpha) * (n / capital).powf(-cal.alpha);
    let w = mc * mpl;
    let gross_output = n.powf(1.0 - cal.alpha) * capital.powf(cal.alpha);
    let fixed_cost = gross_output - w * n - rk * capital;
    let y = gross_output - fixed_cost;
    let b = cal.by_ratio * 4.0 * y;
    let inv = cal.delta * capital;
    let g = cal.gy_ratio * y;
    let cons = y - inv - g;
    if !(cons > 0.0) {
        return Err(ModelError::InfeasibleSteadyState(format!(
            "consumption {cons} is not positive"
        )));
    }
    let tax = g + b * (rb / infl - 1.0);
    let psi = w / (n.powf(cal.varphi) * cons.powf(cal.sigma));

    let kk = capital / pk;
    let ik = inv / pk;
    let zk = b / pk;
    let zs = 0.0;
    let bbk = l[0][0] * pk * zk + l[1][0] * ps * zs;
    let bbs = l[0][1] * pk * zk + l[1][1] * ps * zs;
    let bbh = l[0][2] * pk * zk + l[1][2] * ps * zs;
    let gross_return = rb / infl;

    // Capital income by island.
    let rental = rk * kk;
    let (port_k, port_s, port_h) = if variant.capital_portability {
        (
            l[0][0] * rental,
            l[0][1] * rental * pk / ps,
            l[0][2] * rental * pk / ph,
        )
    } else {
        (rental, 0.0, 0.0)
    };
    let labor = w * n;
    let profits = 0.0;
    let tau_k = cons + zk + ik + tax - labor - gross_return * bbk / pk - port_k - profits / pk;
    let tau_s = if variant.agents == AgentCount::Two {
        0.0
    } else {
        cons + zs + tax - labor - gross_return * bbs / ps - port_s
    };
    let tau_h = cons + tax - labor - gross_return * bbh / ph - port_h;

    let mut values = vec![0.0; N_VARS];
    {
        use Var::*;
        let mut put = |v: Var, x: f64| values[v as usize] = x;
        put(Ck, cons);
        put(Cs, cons);
        put(Ch, cons);
        put(N, n);
        put(W, w);
        put(Zk, zk);
        put(Zs, zs);
        put(BbK, bbk);
        put(BbS, bbs);
        put(BbH, bbh);
        put(Y, y);
        put(Mc, mc);
        put(Mpl, mpl);
        put(Mpk, mpk);
        put(Rk, rk);
        put(D, profits);
        put(K, capital);
        put(Kk, kk);
        put(Ik, ik);
        put(I, inv);
        put(X, 1.0);
        put(Sadj, 0.0);
        put(SadjPrime, 0.0);
        put(Q, 1.0);
        put(Rb, rb);
        put(R, real_rate);
        put(Lp, 1.0);
        put(C, cons);
        put(Pi, infl);
        put(P, price);
        put(A, 1.0);
        put(M, 1.0);
        put(G, g * price);
        put(Greal, g);
        put(T, tax * price);
        put(TaxReal, tax);
        put(B, b * price);
        put(Breal, b);
        put(DebtShare, b / y);
    }

    let mut steady = SteadyState {
        values,
        psi,
        fixed_cost,
        tau: [tau_k, tau_s, tau_h],
        max_residual: f64::NAN,
    };
    let econ = Economy::from_parts(&cal, variant, steady.clone())?;
    let x = &steady.values;
    let res = econ.residuals(x, x, x, &[0.0; N_SHOCKS])?;
    let worst = res.iter().fold(0.0_f64, |m, r| m.max(r.abs()));
    if !(worst < STEADY_STATE_TOL) {
        let (i, _) = res
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .unwrap();
        return Err(ModelError::InfeasibleSteadyState(format!(
            "residual {worst:e} in equation {} exceeds tolerance",
            crate::model::Equation::ALL[i].name()
        )));
    }
    steady.max_residual = worst;
    Ok(steady)
}
