//! The nonlinear equilibrium system.
//!
//! Every residual is written as `lhs - rhs` in levels, except the policy
//! rules and shock processes which are written in logs. One residual per
//! [`Equation`]; the capitalist budget constraint is implied by the others
//! (aggregate resource constraint plus government budget) and is exposed
//! separately through [`capitalist_budget_residual`].

use serde::Serialize;

use crate::calibration::{AgentCount, Calibration, FiscalMode, Variant};
use crate::error::{ModelError, Result};
use crate::steady::{steady_state, SteadyState};
use crate::transition::{complete_transition_matrix, TransitionMatrix};
use crate::variables::{Var, N_SHOCKS, N_VARS};

macro_rules! equations {
    ($( $eq:ident => $name:literal ),+ $(,)?) => {
        /// Equations in residual order.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
        #[repr(usize)]
        pub enum Equation { $($eq),+ }

        impl Equation {
            pub const ALL: &'static [Equation] = &[$(Equation::$eq),+];

            pub const fn name(self) -> &'static str {
                match self { $(Equation::$eq => $name),+ }
            }
        }
    };
}

equations! {
    EulerCapital => "euler_capital",
    EulerBondK => "euler_bond_K",
    EulerBondS => "euler_bond_S",
    RealRate => "real_rate",
    UnionWage => "union_wage",
    BondLawK => "bond_law_K",
    BondLawS => "bond_law_S",
    BondLawH => "bond_law_H",
    BudgetS => "budget_S",
    BudgetH => "budget_H",
    Production => "production",
    MarginalProductLabor => "mpl",
    Wage => "wage",
    MarginalProductCapital => "mpk",
    RentalRate => "rental_rate",
    Profit => "profit",
    CapitalAccumulation => "capital_accumulation",
    InvestmentGrowth => "investment_growth",
    AdjustmentCost => "adjustment_cost",
    AdjustmentCostSlope => "adjustment_cost_slope",
    TobinQ => "tobin_q",
    LiquidityPremium => "liquidity_premium",
    InvestmentAggregate => "investment_aggregate",
    CapitalAggregate => "capital_aggregate",
    ResourceConstraint => "resource_constraint",
    ConsumptionAggregate => "consumption_aggregate",
    PhillipsCurve => "nkpc",
    TaylorRule => "taylor_rule",
    MonetaryProcess => "monetary_process",
    TechnologyProcess => "technology_process",
    SpendingProcess => "spending_process",
    RealSpending => "real_spending",
    TaxRule => "tax_rule",
    RealTax => "real_tax",
    GovernmentBudget => "government_budget",
    RealDebt => "real_debt",
    BondMarket => "bond_market",
    PriceLevel => "price_level",
    DebtShareDef => "debt_share",
}

pub const N_EQUATIONS: usize = 39;

/// A calibrated economy: parameters, transition matrix and steady state.
#[derive(Debug, Clone, Serialize)]
pub struct Economy {
    /// Calibration after variant overrides.
    pub cal: Calibration,
    pub variant: Variant,
    pub transition: TransitionMatrix,
    pub steady: SteadyState,
}

impl Economy {
    /// Validates the calibration, completes the transition matrix and
    /// solves and verifies the steady state.
    pub fn new(cal: &Calibration, variant: Variant) -> Result<Economy> {
        let steady = steady_state(cal, variant)?;
        Self::from_parts(cal, variant, steady)
    }

    pub(crate) fn from_parts(cal: &Calibration, variant: Variant, steady: SteadyState) -> Result<Economy> {
        let cal = cal.for_variant(&variant);
        let transition = complete_transition_matrix(&cal, &variant)?;
        Ok(Economy {
            cal,
            variant,
            transition,
            steady,
        })
    }

    pub fn ss(&self, v: Var) -> f64 {
        self.steady.values[v as usize]
    }

    /// Residuals of the full system. Shocks are ordered
    /// `(eps_A, eps_g, eps_m, eps_T)`.
    pub fn residuals(&self, lag: &[f64], cur: &[f64], lead: &[f64], shocks: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; N_EQUATIONS];
        self.residuals_into(lag, cur, lead, shocks, &mut out)?;
        Ok(out)
    }

    pub fn residuals_into(
        &self,
        lag: &[f64],
        cur: &[f64],
        lead: &[f64],
        shocks: &[f64],
        out: &mut [f64],
    ) -> Result<()> {
        check_inputs(lag, cur, lead, shocks)?;
        let x = Slots { lag, cur, lead };
        evaluate(self, &x, shocks, out)
    }
}

/// Convenience wrapper with the calibration and variant spelled out.
pub fn residuals(
    econ: &Economy,
    lag: &[f64],
    cur: &[f64],
    lead: &[f64],
    shocks: &[f64],
) -> Result<Vec<f64>> {
    econ.residuals(lag, cur, lead, shocks)
}

fn check_inputs(lag: &[f64], cur: &[f64], lead: &[f64], shocks: &[f64]) -> Result<()> {
    if lag.len() != N_VARS || cur.len() != N_VARS || lead.len() != N_VARS || shocks.len() != N_SHOCKS {
        return Err(ModelError::Contract(format!(
            "expected {N_VARS} variables and {N_SHOCKS} shocks, got {}/{}/{} and {}",
            lag.len(),
            cur.len(),
            lead.len(),
            shocks.len()
        )));
    }
    for (slot, v) in [("(t-1)", lag), ("(t)", cur), ("(t+1)", lead)] {
        if let Some(i) = v.iter().position(|z| !z.is_finite()) {
            return Err(ModelError::NonFinite {
                variable: format!("{}{slot}", Var::ALL[i].name()),
            });
        }
    }
    if let Some(i) = shocks.iter().position(|z| !z.is_finite()) {
        return Err(ModelError::NonFinite {
            variable: crate::variables::Shock::ALL[i].name().to_string(),
        });
    }
    Ok(())
}

struct Slots<'a> {
    lag: &'a [f64],
    cur: &'a [f64],
    lead: &'a [f64],
}

impl Slots<'_> {
    #[inline]
    fn lag(&self, v: Var) -> f64 {
        self.lag[v as usize]
    }
    #[inline]
    fn cur(&self, v: Var) -> f64 {
        self.cur[v as usize]
    }
    #[inline]
    fn lead(&self, v: Var) -> f64 {
        self.lead[v as usize]
    }
}

fn positive(value: f64, var: Var, slot: &str) -> Result<f64> {
    if value > 0.0 {
        Ok(value)
    } else {
        Err(ModelError::Domain {
            variable: format!("{}{slot}", var.name()),
            value,
        })
    }
}

/// Rental income accruing to each island when capital follows its owner
/// across types: `(to K, to S per capita, to H per capita)`.
fn capital_income_split(econ: &Economy, rental_income: f64) -> (f64, f64, f64) {
    let l = &econ.transition.lambda;
    let c = &econ.cal;
    if econ.variant.capital_portability {
        (
            l[0][0] * rental_income,
            l[0][1] * rental_income * c.pop_k / c.pop_s,
            l[0][2] * rental_income * c.pop_k / c.pop_h,
        )
    } else {
        (rental_income, 0.0, 0.0)
    }
}

fn evaluate(econ: &Economy, x: &Slots, shocks: &[f64], out: &mut [f64]) -> Result<()> {
    use Equation as E;
    use Var::*;

    let c = &econ.cal;
    let ss = &econ.steady;
    let l = &econ.transition.lambda;
    let (pk, ps, ph) = (c.pop_k, c.pop_s, c.pop_h);
    let two_agent = econ.variant.agents == AgentCount::Two;

    let ck = positive(x.cur(Ck), Ck, "(t)")?;
    let ch = positive(x.cur(Ch), Ch, "(t)")?;
    let ck1 = positive(x.lead(Ck), Ck, "(t+1)")?;
    let ch1 = positive(x.lead(Ch), Ch, "(t+1)")?;
    let (cs, cs1) = if two_agent {
        (x.cur(Cs), x.lead(Cs))
    } else {
        (positive(x.cur(Cs), Cs, "(t)")?, positive(x.lead(Cs), Cs, "(t+1)")?)
    };
    let n = positive(x.cur(N), N, "(t)")?;
    let kk_lag = positive(x.lag(Kk), Kk, "(t-1)")?;
    let ik_lag = positive(x.lag(Ik), Ik, "(t-1)")?;
    let a = positive(x.cur(A), A, "(t)")?;
    let a_lag = positive(x.lag(A), A, "(t-1)")?;
    let m = positive(x.cur(M), M, "(t)")?;
    let m_lag = positive(x.lag(M), M, "(t-1)")?;
    let g_nom = positive(x.cur(G), G, "(t)")?;
    let g_nom_lag = positive(x.lag(G), G, "(t-1)")?;
    let t_nom = positive(x.cur(T), T, "(t)")?;
    let t_nom_lag = positive(x.lag(T), T, "(t-1)")?;
    let b_nom_lag = positive(x.lag(B), B, "(t-1)")?;
    let p = positive(x.cur(P), P, "(t)")?;
    let p_lag = positive(x.lag(P), P, "(t-1)")?;
    let infl = positive(x.cur(Pi), Pi, "(t)")?;
    let infl1 = positive(x.lead(Pi), Pi, "(t+1)")?;
    let rb = positive(x.cur(Rb), Rb, "(t)")?;
    let rb_lag = x.lag(Rb);
    let q = positive(x.cur(Q), Q, "(t)")?;
    let y = positive(x.cur(Y), Y, "(t)")?;
    let r = x.cur(R);

    let mu = |cons: f64| cons.powf(-c.sigma);
    let uk = mu(ck);
    let uk1 = mu(ck1);
    let uh1 = mu(ch1);
    let sdf = uk1 / uk;

    let capital = pk * kk_lag;
    let w = x.cur(W);
    let labor_income = w * n;
    let tax = x.cur(TaxReal);
    let rk = x.cur(Rk);
    let (_, port_s, port_h) = capital_income_split(econ, rk * kk_lag);

    let mut set = |eq: Equation, v: f64| out[eq as usize] = v;

    set(
        E::EulerCapital,
        uk - c.beta * uk1 * (x.lead(Rk) + (1.0 - c.delta) * x.lead(Q)) / q,
    );
    let expected_mu_k = l[0][0] * uk1 + l[0][1] * if two_agent { 0.0 } else { mu(cs1) } + l[0][2] * uh1;
    set(E::EulerBondK, uk - c.beta * r * expected_mu_k);
    if two_agent {
        set(E::EulerBondS, cs - ss.values[Cs as usize]);
    } else {
        let expected_mu_s = l[1][0] * uk1 + l[1][1] * mu(cs1) + l[1][2] * uh1;
        set(E::EulerBondS, mu(cs) - c.beta * r * expected_mu_s);
    }
    set(E::RealRate, r - rb / infl1);
    set(
        E::UnionWage,
        w - ss.psi * n.powf(c.varphi) * positive(x.cur(C), C, "(t)")?.powf(c.sigma),
    );

    let zk = x.cur(Zk);
    let zs = x.cur(Zs);
    set(E::BondLawK, x.cur(BbK) - (l[0][0] * pk * zk + l[1][0] * ps * zs));
    set(E::BondLawS, x.cur(BbS) - (l[0][1] * pk * zk + l[1][1] * ps * zs));
    set(E::BondLawH, x.cur(BbH) - (l[0][2] * pk * zk + l[1][2] * ps * zs));

    if two_agent {
        set(E::BudgetS, zs);
    } else {
        let resources_s =
            labor_income + rb_lag * x.lag(BbS) / (ps * infl) - tax + ss.tau[1] + port_s;
        set(E::BudgetS, resources_s - cs - zs);
    }
    let resources_h = labor_income + rb_lag * x.lag(BbH) / (ph * infl) - tax + ss.tau[2] + port_h;
    set(E::BudgetH, resources_h - ch);

    let gross_output = (a * n).powf(1.0 - c.alpha) * capital.powf(c.alpha);
    set(E::Production, gross_output - ss.fixed_cost - y);
    set(
        E::MarginalProductLabor,
        x.cur(Mpl) - (1.0 - c.alpha) * a.powf(1.0 - c.alpha) * (n / capital).powf(-c.alpha),
    );
    set(E::Wage, w - x.cur(Mpl) * x.cur(Mc));
    set(
        E::MarginalProductCapital,
        x.cur(Mpk) - c.alpha * (capital / (n * a)).powf(c.alpha - 1.0),
    );
    set(E::RentalRate, rk - x.cur(Mc) * x.cur(Mpk));
    set(E::Profit, y - x.cur(D) - labor_income - rk * capital);

    let growth = x.cur(X);
    set(
        E::CapitalAccumulation,
        x.cur(Kk) - x.cur(Ik) * (1.0 - x.cur(Sadj)) - (1.0 - c.delta) * kk_lag,
    );
    set(E::InvestmentGrowth, growth - x.cur(Ik) / ik_lag);
    set(E::AdjustmentCost, x.cur(Sadj) - c.iota * (growth - 1.0).powi(2));
    set(E::AdjustmentCostSlope, x.cur(SadjPrime) - 2.0 * c.iota * (growth - 1.0));
    set(
        E::TobinQ,
        q * (1.0 - x.cur(Sadj) - growth * x.cur(SadjPrime))
            + c.beta * sdf * x.lead(Q) * x.lead(SadjPrime) * x.lead(X).powi(2)
            - 1.0,
    );
    set(
        E::LiquidityPremium,
        x.cur(Lp) - (x.lead(Rk) + (1.0 - c.delta) * x.lead(Q)) / (q * r),
    );

    set(E::InvestmentAggregate, x.cur(I) - pk * x.cur(Ik));
    set(E::CapitalAggregate, x.cur(K) - pk * x.cur(Kk));
    set(E::ResourceConstraint, y - x.cur(I) - x.cur(C) - x.cur(Greal));
    set(
        E::ConsumptionAggregate,
        x.cur(C) - (pk * ck + ps * cs + ph * ch),
    );

    let y1 = positive(x.lead(Y), Y, "(t+1)")?;
    set(
        E::PhillipsCurve,
        1.0 - c.epsilon + c.epsilon * x.cur(Mc) - infl * c.xi * (infl - 1.0)
            + c.beta * c.xi * sdf * infl1 * (infl1 - 1.0) * y1 / y,
    );

    let rb_star = ss.values[Rb as usize];
    let rb_lag_pos = positive(rb_lag, Rb, "(t-1)")?;
    set(
        E::TaylorRule,
        (rb / rb_star).ln()
            - c.rho_rb * (rb_lag_pos / rb_star).ln()
            - (1.0 - c.rho_rb) * c.phi_pi * (infl / c.pi_star).ln()
            - m.ln(),
    );
    set(
        E::MonetaryProcess,
        m.ln() - c.rho_m * m_lag.ln() - shocks[crate::variables::Shock::Monetary as usize],
    );
    set(
        E::TechnologyProcess,
        a.ln() - c.rho_a * a_lag.ln() - shocks[crate::variables::Shock::Technology as usize],
    );

    let g_star = ss.values[G as usize];
    let t_star = ss.values[T as usize];
    let b_star = ss.values[B as usize];
    let debt_gap = (b_nom_lag / b_star).ln();
    set(
        E::SpendingProcess,
        (g_nom / g_star).ln()
            - c.rho_g * (g_nom_lag / g_star).ln()
            - c.gamma_g * debt_gap
            - shocks[crate::variables::Shock::Spending as usize],
    );
    set(E::RealSpending, x.cur(Greal) - g_nom / p);
    set(
        E::TaxRule,
        (t_nom / t_star).ln()
            - c.rho_t * (t_nom_lag / t_star).ln()
            - (1.0 - c.rho_t) * c.gamma_t * debt_gap
            - (1.0 - c.rho_t) * c.gamma_tg * (g_nom / g_star).ln()
            - shocks[crate::variables::Shock::Transfer as usize],
    );
    set(E::RealTax, tax - t_nom / p);
    set(
        E::GovernmentBudget,
        x.cur(Breal) - x.cur(Greal) - rb_lag * x.lag(Breal) / infl + tax,
    );
    set(E::RealDebt, x.cur(Breal) - x.cur(B) / p);
    set(E::BondMarket, x.cur(Breal) - (pk * zk + ps * zs));
    match econ.variant.fiscal {
        FiscalMode::Nominal => set(E::PriceLevel, infl - p / p_lag),
        FiscalMode::Real => set(E::PriceLevel, p - ss.values[P as usize]),
    }
    set(E::DebtShareDef, x.cur(DebtShare) - x.cur(Breal) / y);
    Ok(())
}

/// Residual of the capitalist budget constraint (resources minus uses),
/// which the system omits because it is implied by the others.
pub fn capitalist_budget_residual(econ: &Economy, lag: &[f64], cur: &[f64]) -> f64 {
    use Var::*;
    let c = &econ.cal;
    let rk_income = cur[Rk as usize] * lag[Kk as usize];
    let (port_k, _, _) = capital_income_split(econ, rk_income);
    let resources = cur[W as usize] * cur[N as usize]
        + lag[Rb as usize] * lag[BbK as usize] / (c.pop_k * cur[Pi as usize])
        + port_k
        + cur[D as usize] / c.pop_k
        - cur[TaxReal as usize]
        + econ.steady.tau[0];
    resources - cur[Ck as usize] - cur[Zk as usize] - cur[Ik as usize]
}

/// Budget residuals of all three types (resources minus uses), in K, S, H order.
pub fn budget_residuals(econ: &Economy, lag: &[f64], cur: &[f64]) -> [f64; 3] {
    use Var::*;
    let c = &econ.cal;
    let t = &econ.steady.tau;
    let infl = cur[Pi as usize];
    let rb_lag = lag[Rb as usize];
    let labor = cur[W as usize] * cur[N as usize] - cur[TaxReal as usize];
    let (_, port_s, port_h) = capital_income_split(econ, cur[Rk as usize] * lag[Kk as usize]);
    let s = if c.pop_s > 0.0 {
        labor + rb_lag * lag[BbS as usize] / (c.pop_s * infl) + t[1] + port_s
            - cur[Cs as usize]
            - cur[Zs as usize]
    } else {
        0.0
    };
    let h = labor + rb_lag * lag[BbH as usize] / (c.pop_h * infl) + t[2] + port_h - cur[Ch as usize];
    [capitalist_budget_residual(econ, lag, cur), s, h]
}
