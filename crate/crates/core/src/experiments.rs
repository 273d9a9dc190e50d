//! Shock experiments: impulse responses, fiscal multipliers, the
//! liquidity-premium identity and scenario bundles.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::calibration::{Calibration, Variant};
use crate::error::{ModelError, Result};
use crate::model::Economy;
use crate::perturbation::{solve_economy, Classification, LinearSolution};
use crate::variables::{Shock, UnitTag, Var, N_SHOCKS, N_VARS};

/// Quarters summed in the cumulative multiplier.
pub const MULTIPLIER_HORIZON: usize = 15;
/// Default impulse-response horizon.
pub const DEFAULT_HORIZON: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ShockKind {
    Technology,
    Spending,
    Monetary,
    Transfer,
}

impl ShockKind {
    pub const ALL: [ShockKind; 4] = [
        ShockKind::Technology,
        ShockKind::Spending,
        ShockKind::Monetary,
        ShockKind::Transfer,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ShockKind::Technology => "tech",
            ShockKind::Spending => "fiscal",
            ShockKind::Monetary => "monetary",
            ShockKind::Transfer => "transfer",
        }
    }

    pub fn innovation(self) -> Shock {
        match self {
            ShockKind::Technology => Shock::Technology,
            ShockKind::Spending => Shock::Spending,
            ShockKind::Monetary => Shock::Monetary,
            ShockKind::Transfer => Shock::Transfer,
        }
    }

    /// Signed size in percent used by the standard experiments: a fall in
    /// productivity, a rise in spending, a cut in the policy rate and a rise
    /// in transfers.
    pub fn default_size(self) -> f64 {
        match self {
            ShockKind::Spending => 1.0,
            _ => -1.0,
        }
    }

    pub fn persistence(self, cal: &Calibration) -> f64 {
        match self {
            ShockKind::Technology => cal.rho_a,
            ShockKind::Spending => cal.rho_g,
            ShockKind::Monetary => cal.rho_m,
            ShockKind::Transfer => cal.rho_t,
        }
    }
}

impl FromStr for ShockKind {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tech" | "technology" => Ok(ShockKind::Technology),
            "fiscal" | "spending" => Ok(ShockKind::Spending),
            "monetary" => Ok(ShockKind::Monetary),
            "transfer" => Ok(ShockKind::Transfer),
            other => Err(ModelError::Config(format!("unknown shock '{other}'"))),
        }
    }
}

impl fmt::Display for ShockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How the size of a spending shock is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpendingUnits {
    /// Percent of steady-state output: the log innovation is scaled by
    /// `Y*/G*`.
    OutputShare,
    /// Percent of steady-state spending.
    OwnLevel,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShockSpec {
    pub kind: ShockKind,
    /// Signed size in percent.
    pub size: f64,
    pub persistence: f64,
    /// Number of reported quarters.
    pub horizon: usize,
    pub spending_units: SpendingUnits,
}

impl ShockSpec {
    pub fn new(kind: ShockKind, size: f64, horizon: usize, cal: &Calibration) -> Result<ShockSpec> {
        let spec = ShockSpec {
            kind,
            size,
            persistence: kind.persistence(cal),
            horizon,
            spending_units: SpendingUnits::OutputShare,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn standard(kind: ShockKind, cal: &Calibration) -> Result<ShockSpec> {
        Self::new(kind, kind.default_size(), DEFAULT_HORIZON, cal)
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon < 1 {
            return Err(ModelError::Config("horizon must be at least 1".into()));
        }
        if !(0.0..1.0).contains(&self.persistence) {
            return Err(ModelError::Config(format!(
                "persistence {} outside [0, 1)",
                self.persistence
            )));
        }
        if !self.size.is_finite() {
            return Err(ModelError::Config("shock size must be finite".into()));
        }
        Ok(())
    }

    /// Innovation fed to the shock process, in log points.
    pub fn innovation(&self, econ: &Economy) -> f64 {
        let base = self.size / 100.0;
        match (self.kind, self.spending_units) {
            (ShockKind::Spending, SpendingUnits::OutputShare) => {
                base * econ.ss(Var::Y) / econ.ss(Var::Greal)
            }
            _ => base,
        }
    }
}

/// Reporting unit of a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportUnit {
    /// Percent deviation from the variable's own steady state.
    PctDeviation,
    /// Percentage-point deviation.
    PctPoints,
    /// Percent of steady-state output.
    PctOfOutput,
}

impl ReportUnit {
    pub fn label(self) -> &'static str {
        match self {
            ReportUnit::PctDeviation => "pct_dev",
            ReportUnit::PctPoints => "pct_points",
            ReportUnit::PctOfOutput => "pct_of_output",
        }
    }
}

impl From<UnitTag> for ReportUnit {
    fn from(tag: UnitTag) -> Self {
        match tag {
            UnitTag::Level => ReportUnit::PctDeviation,
            UnitTag::Rate => ReportUnit::PctPoints,
            UnitTag::Share => ReportUnit::PctOfOutput,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Series {
    pub name: String,
    pub unit: ReportUnit,
    pub values: Vec<f64>,
}

/// Impulse responses in reporting units, plus the raw level deviations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImpulseSet {
    pub spec: ShockSpec,
    pub series: Vec<Series>,
    /// `deviations[t][i]` is `x_i(t) - x_i*`, for `t` in `0..=horizon`; the
    /// extra period supplies the one-step-ahead expectation at the end.
    #[serde(skip)]
    pub deviations: Vec<Vec<f64>>,
}

impl ImpulseSet {
    pub fn horizon(&self) -> usize {
        self.spec.horizon
    }

    pub fn get(&self, name: &str) -> Option<&Series> {
        self.series.iter().find(|s| s.name == name)
    }

    /// Level deviation of `v` at `t`.
    pub fn dev(&self, v: Var, t: usize) -> f64 {
        self.deviations[t][v as usize]
    }

    /// Largest absolute value over all reported series.
    pub fn max_abs(&self) -> f64 {
        self.series
            .iter()
            .flat_map(|s| s.values.iter())
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// Name of the derived next-period rental-rate series.
pub const RK_NEXT: &str = "R_K_next";

fn report(econ: &Economy, v: Var, dev: f64) -> f64 {
    let ss = econ.ss(v);
    let y = econ.ss(Var::Y);
    match v.unit() {
        UnitTag::Level => 100.0 * dev / ss,
        UnitTag::Rate => 100.0 * dev,
        UnitTag::Share => {
            // Per-capita portfolio choices are shown for the whole island.
            let weight = match v {
                Var::Zk => econ.cal.pop_k,
                Var::Zs => econ.cal.pop_s,
                _ => 1.0,
            };
            100.0 * weight * dev / y
        }
    }
}

/// Iterates `x(t) = P x(t-1) + Q e(t)` from rest with a single innovation at
/// `t = 0` and converts the paths to reporting units.
pub fn impulse_response(sol: &LinearSolution, econ: &Economy, spec: &ShockSpec) -> Result<ImpulseSet> {
    spec.validate()?;
    let policy = sol.policy()?;
    let mut shock = nalgebra::DVector::zeros(N_SHOCKS);
    shock[spec.kind.innovation() as usize] = spec.innovation(econ);
    let mut x = &policy.q * shock;
    let mut deviations = Vec::with_capacity(spec.horizon + 1);
    deviations.push(x.iter().copied().collect::<Vec<f64>>());
    for _ in 0..spec.horizon {
        x = &policy.p * x;
        deviations.push(x.iter().copied().collect());
    }

    let mut series: Vec<Series> = Var::ALL
        .iter()
        .map(|&v| Series {
            name: v.name().to_string(),
            unit: v.unit().into(),
            values: (0..spec.horizon)
                .map(|t| report(econ, v, deviations[t][v as usize]))
                .collect(),
        })
        .collect();
    series.push(Series {
        name: RK_NEXT.to_string(),
        unit: ReportUnit::PctPoints,
        values: (0..spec.horizon)
            .map(|t| 100.0 * deviations[t + 1][Var::Rk as usize])
            .collect(),
    });
    Ok(ImpulseSet {
        spec: *spec,
        series,
        deviations,
    })
}

/// Solves the economy and computes the impulse response, refusing
/// non-determinate regimes.
pub fn solve_and_respond(econ: &Economy, spec: &ShockSpec) -> Result<(LinearSolution, ImpulseSet)> {
    let (_, sol) = solve_economy(econ)?;
    let irf = impulse_response(&sol, econ, spec)?;
    Ok((sol, irf))
}

/// Largest deviation from the first-order liquidity-premium identity
/// `LP(t) = -sigma [l_KS (C_S(t+1) - C_K(t+1)) + l_KH (C_H(t+1) - C_K(t+1))]`
/// in fractional deviations, with `l_KS`, `l_KH` the capitalist transition
/// probabilities.
pub fn liquidity_premium_gap(irf: &ImpulseSet, econ: &Economy) -> Result<f64> {
    if irf.deviations.len() < irf.horizon() + 1 || irf.deviations.iter().any(|d| d.len() != N_VARS) {
        return Err(ModelError::Contract(
            "impulse response lacks the consumption and premium paths".into(),
        ));
    }
    let l = &econ.transition.lambda;
    let sigma = econ.cal.sigma;
    let hat = |v: Var, t: usize| {
        let ss = econ.ss(v);
        if ss == 0.0 {
            0.0
        } else {
            irf.dev(v, t) / ss
        }
    };
    let mut worst = 0.0_f64;
    for t in 0..irf.horizon() {
        let ck = hat(Var::Ck, t + 1);
        let gap = hat(Var::Lp, t)
            + sigma * (l[0][1] * (hat(Var::Cs, t + 1) - ck) + l[0][2] * (hat(Var::Ch, t + 1) - ck));
        worst = worst.max(gap.abs());
    }
    Ok(worst)
}

/// Largest linearized resource-constraint residual along the path.
pub fn resource_constraint_gap(irf: &ImpulseSet) -> f64 {
    irf.deviations
        .iter()
        .map(|d| {
            (d[Var::Y as usize] - d[Var::I as usize] - d[Var::C as usize] - d[Var::Greal as usize]).abs()
        })
        .fold(0.0, f64::max)
}

/// Largest bond-market clearing residual along the path.
pub fn bond_market_gap(irf: &ImpulseSet, econ: &Economy) -> f64 {
    let c = &econ.cal;
    irf.deviations
        .iter()
        .map(|d| {
            (d[Var::Breal as usize] - c.pop_k * d[Var::Zk as usize] - c.pop_s * d[Var::Zs as usize]).abs()
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum MonetaryStance {
    Active,
    Passive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FiscalStance {
    Passive,
    LessPassive,
}

/// One of the four monetary-fiscal mixes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PolicyMix {
    pub monetary: MonetaryStance,
    pub fiscal: FiscalStance,
}

impl PolicyMix {
    /// In the order of the multiplier table: passive money first, then
    /// passive before less passive fiscal policy.
    pub const ALL: [PolicyMix; 4] = [
        PolicyMix::new(MonetaryStance::Passive, FiscalStance::Passive),
        PolicyMix::new(MonetaryStance::Passive, FiscalStance::LessPassive),
        PolicyMix::new(MonetaryStance::Active, FiscalStance::Passive),
        PolicyMix::new(MonetaryStance::Active, FiscalStance::LessPassive),
    ];

    pub const fn new(monetary: MonetaryStance, fiscal: FiscalStance) -> PolicyMix {
        PolicyMix { monetary, fiscal }
    }

    pub fn phi_pi(&self) -> f64 {
        match self.monetary {
            MonetaryStance::Active => 1.2,
            MonetaryStance::Passive => 0.8,
        }
    }

    pub fn gamma_t(&self) -> f64 {
        match self.fiscal {
            FiscalStance::Passive => 1.0,
            FiscalStance::LessPassive => 0.5,
        }
    }

    pub fn apply(&self, cal: &Calibration) -> Calibration {
        Calibration {
            phi_pi: self.phi_pi(),
            gamma_t: self.gamma_t(),
            ..*cal
        }
    }

    pub fn monetary_code(&self) -> &'static str {
        match self.monetary {
            MonetaryStance::Active => "AM",
            MonetaryStance::Passive => "PM",
        }
    }

    pub fn fiscal_code(&self) -> &'static str {
        match self.fiscal {
            FiscalStance::Passive => "PF",
            FiscalStance::LessPassive => "LPF",
        }
    }
}

impl fmt::Display for PolicyMix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.monetary_code(), self.fiscal_code())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Regime {
    pub phi_pi: f64,
    #[serde(rename = "gamma_T")]
    pub gamma_t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiplierReport {
    pub impact: f64,
    /// Ratio of summed output to summed real spending responses over
    /// `horizon` quarters (15 unless overridden).
    pub cumulative_15q: f64,
    pub horizon: usize,
    pub regime: Regime,
    pub variant: String,
}

/// Impact and cumulative multipliers from an already computed spending
/// response, using real spending.
pub fn multipliers_from_irf(irf: &ImpulseSet, horizon: usize) -> Result<(f64, f64)> {
    if horizon == 0 || horizon > irf.deviations.len() {
        return Err(ModelError::Contract(format!(
            "multiplier horizon {horizon} outside the response length"
        )));
    }
    let dy = |t| irf.dev(Var::Y, t);
    let dg = |t| irf.dev(Var::Greal, t);
    let impact = dy(0) / dg(0);
    let (sy, sg) = (0..horizon).fold((0.0, 0.0), |(a, b), t| (a + dy(t), b + dg(t)));
    Ok((impact, sy / sg))
}

/// Fiscal multipliers for a calibration whose policy coefficients already
/// describe the regime.
pub fn fiscal_multipliers(cal: &Calibration, variant: Variant, horizon: usize) -> Result<MultiplierReport> {
    let econ = Economy::new(cal, variant)?;
    let spec = ShockSpec::new(ShockKind::Spending, 1.0, horizon.max(MULTIPLIER_HORIZON), &econ.cal)?;
    let (_, irf) = solve_and_respond(&econ, &spec)?;
    let (impact, cumulative) = multipliers_from_irf(&irf, horizon)?;
    Ok(MultiplierReport {
        impact,
        cumulative_15q: cumulative,
        horizon,
        regime: Regime {
            phi_pi: econ.cal.phi_pi,
            gamma_t: econ.cal.gamma_t,
        },
        variant: variant.economy_name().to_string(),
    })
}

/// Multipliers for the four policy mixes in table order.
pub fn multiplier_table(cal: &Calibration, variant: Variant, horizon: usize) -> Result<Vec<MultiplierReport>> {
    PolicyMix::ALL
        .iter()
        .map(|mix| fiscal_multipliers(&mix.apply(cal), variant, horizon))
        .collect()
}

/// A named experiment: shock, policy mix and economy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Scenario {
    pub shock: ShockKind,
    pub mix: PolicyMix,
    pub variant: Variant,
}

impl Scenario {
    pub fn new(shock: ShockKind, mix: PolicyMix, variant: Variant) -> Scenario {
        Scenario { shock, mix, variant }
    }

    /// Every shock, mix and economy, in a fixed order.
    pub fn all() -> Vec<Scenario> {
        let mut out = Vec::with_capacity(48);
        for variant in [Variant::THREE, Variant::TWO, Variant::PORTABILITY] {
            for mix in PolicyMix::ALL {
                for shock in ShockKind::ALL {
                    out.push(Scenario::new(shock, mix, variant));
                }
            }
        }
        out
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}_{}_{}_{}",
            self.shock,
            self.mix.monetary_code(),
            self.mix.fiscal_code(),
            self.variant.economy_name()
        )
    }
}

impl FromStr for Scenario {
    type Err = ModelError;

    /// Parses `shock_AM|PM_PF|LPF_economy`; `-`, `/` and `,` also separate.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(['_', '-', '/', ',']).filter(|p| !p.is_empty()).collect();
        let bad = || ModelError::Config(format!("unknown scenario '{s}'"));
        let [shock, monetary, fiscal, economy] = parts.as_slice() else {
            return Err(bad());
        };
        let monetary = match *monetary {
            "AM" => MonetaryStance::Active,
            "PM" => MonetaryStance::Passive,
            _ => return Err(bad()),
        };
        let fiscal = match *fiscal {
            "PF" => FiscalStance::Passive,
            "LPF" => FiscalStance::LessPassive,
            _ => return Err(bad()),
        };
        Ok(Scenario {
            shock: shock.parse().map_err(|_| bad())?,
            mix: PolicyMix::new(monetary, fiscal),
            variant: Variant::from_economy(economy).map_err(|_| bad())?,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScenarioResult {
    pub scenario: String,
    pub classification: Classification,
    pub irf: ImpulseSet,
    /// Present for spending shocks.
    pub multipliers: Option<MultiplierReport>,
    pub prop1_gap: f64,
    pub resource_gap: f64,
    pub bond_market_gap: f64,
}

/// Runs one scenario with the standard shock size on top of `base`.
pub fn run_scenario(base: &Calibration, scenario: &Scenario, horizon: usize) -> Result<ScenarioResult> {
    let cal = scenario.mix.apply(base);
    let econ = Economy::new(&cal, scenario.variant)?;
    let spec = ShockSpec::new(scenario.shock, scenario.shock.default_size(), horizon, &econ.cal)?;
    run_spec(&econ, scenario.to_string(), &spec)
}

/// Runs an arbitrary shock on a calibrated economy and collects the checks.
pub fn run_spec(econ: &Economy, label: String, spec: &ShockSpec) -> Result<ScenarioResult> {
    let (sol, irf) = solve_and_respond(econ, spec)?;
    let multipliers = if spec.kind == ShockKind::Spending && spec.size != 0.0 {
        let h = MULTIPLIER_HORIZON.min(spec.horizon);
        let (impact, cumulative) = multipliers_from_irf(&irf, h)?;
        Some(MultiplierReport {
            impact,
            cumulative_15q: cumulative,
            horizon: h,
            regime: Regime {
                phi_pi: econ.cal.phi_pi,
                gamma_t: econ.cal.gamma_t,
            },
            variant: econ.variant.economy_name().to_string(),
        })
    } else {
        None
    };
    Ok(ScenarioResult {
        scenario: label,
        classification: sol.classification,
        prop1_gap: liquidity_premium_gap(&irf, econ)?,
        resource_gap: resource_constraint_gap(&irf),
        bond_market_gap: bond_market_gap(&irf, econ),
        multipliers,
        irf,
    })
}

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

fn irf_for(base: &Calibration, shock: ShockKind, mix: PolicyMix, variant: Variant) -> Result<(Economy, ImpulseSet)> {
    let cal = mix.apply(base);
    let econ = Economy::new(&cal, variant)?;
    let spec = ShockSpec::standard(shock, &econ.cal)?;
    let (_, irf) = solve_and_respond(&econ, &spec)?;
    Ok((econ, irf))
}

/// Qualitative responses expected from the three-agent economy.
pub fn sign_battery(base: &Calibration) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let three = Variant::THREE;

    for mix in PolicyMix::ALL {
        let (_, irf) = irf_for(base, ShockKind::Spending, mix, three)?;
        let ch = irf.dev(Var::Ch, 0);
        checks.push(Check::new(
            format!("fiscal {mix}: hand-to-mouth consumption up on impact"),
            ch > 0.0,
            format!("dC_H(0) = {ch:.3e}"),
        ));
    }

    for fiscal in [FiscalStance::Passive, FiscalStance::LessPassive] {
        let pm = fiscal_multipliers(
            &PolicyMix::new(MonetaryStance::Passive, fiscal).apply(base),
            three,
            MULTIPLIER_HORIZON,
        )?;
        let am = fiscal_multipliers(
            &PolicyMix::new(MonetaryStance::Active, fiscal).apply(base),
            three,
            MULTIPLIER_HORIZON,
        )?;
        let code = PolicyMix::new(MonetaryStance::Passive, fiscal).fiscal_code();
        checks.push(Check::new(
            format!("fiscal {code}: passive-money impact multiplier exceeds active"),
            pm.impact > am.impact,
            format!("PM {:.3} vs AM {:.3}", pm.impact, am.impact),
        ));
    }

    for fiscal in [FiscalStance::Passive, FiscalStance::LessPassive] {
        let mix = PolicyMix::new(MonetaryStance::Active, fiscal);
        let (_, irf) = irf_for(base, ShockKind::Monetary, mix, three)?;
        let di = irf.dev(Var::I, 0);
        checks.push(Check::new(
            format!("monetary easing {mix}: investment up on impact"),
            di > 0.0,
            format!("dI(0) = {di:.3e}"),
        ));
    }
    for fiscal in [FiscalStance::Passive, FiscalStance::LessPassive] {
        let mix = PolicyMix::new(MonetaryStance::Passive, fiscal);
        let (_, irf) = irf_for(base, ShockKind::Monetary, mix, three)?;
        let di = irf.dev(Var::I, 0);
        checks.push(Check::new(
            format!("monetary easing {mix}: investment up on impact"),
            di > 0.0,
            format!("dI(0) = {di:.3e}"),
        ));
    }

    let pm_pf = PolicyMix::new(MonetaryStance::Passive, FiscalStance::Passive);
    let pm_lpf = PolicyMix::new(MonetaryStance::Passive, FiscalStance::LessPassive);
    let am_pf = PolicyMix::new(MonetaryStance::Active, FiscalStance::Passive);
    let am_lpf = PolicyMix::new(MonetaryStance::Active, FiscalStance::LessPassive);

    let (_, tech) = irf_for(base, ShockKind::Technology, pm_pf, three)?;
    let (dpi, dn) = (tech.dev(Var::Pi, 0), tech.dev(Var::N, 0));
    checks.push(Check::new(
        "technology fall PM_PF: inflation and hours rise on impact",
        dpi > 0.0 && dn > 0.0,
        format!("dPi(0) = {dpi:.3e}, dN(0) = {dn:.3e}"),
    ));

    for mix in [pm_pf, pm_lpf] {
        let (econ, irf) = irf_for(base, ShockKind::Spending, mix, three)?;
        let gap = irf.dev(Var::Ch, 0) / econ.ss(Var::Ch) - irf.dev(Var::Ck, 0) / econ.ss(Var::Ck);
        let lp = irf.dev(Var::Lp, 0);
        checks.push(Check::new(
            format!("fiscal {mix}: C_H above C_K on impact and premium falls"),
            gap > 0.0 && lp < 0.0,
            format!("C_H - C_K = {gap:.3e}, dLP(0) = {lp:.3e}"),
        ));
    }

    let (_, irf) = irf_for(base, ShockKind::Spending, pm_lpf, three)?;
    let below = (0..irf.horizon()).take_while(|&t| irf.dev(Var::Breal, t) < 0.0).count();
    checks.push(Check::new(
        format!("fiscal {pm_lpf}: real debt below steady state for a few quarters"),
        below >= 2,
        format!("{below} quarters below"),
    ));

    let (_, pf) = irf_for(base, ShockKind::Monetary, am_pf, three)?;
    let (_, lpf) = irf_for(base, ShockKind::Monetary, am_lpf, three)?;
    let (ipf, ilpf) = (pf.dev(Var::I, 0), lpf.dev(Var::I, 0));
    checks.push(Check::new(
        "monetary easing AM: investment rises more under LPF than PF",
        ilpf > ipf,
        format!("LPF {ilpf:.3e} vs PF {ipf:.3e}"),
    ));

    let (_, pf) = irf_for(base, ShockKind::Technology, pm_pf, three)?;
    let (_, lpf) = irf_for(base, ShockKind::Technology, pm_lpf, three)?;
    let ya = &pf.get("Y").expect("output series").values;
    let yb = &lpf.get("Y").expect("output series").values;
    let amp = ya.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let dist = ya.iter().zip(yb).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
    checks.push(Check::new(
        "technology PM: output paths nearly coincide across fiscal stances",
        dist < 0.1 * amp,
        format!("max distance {:.2}% of amplitude", 100.0 * dist / amp),
    ));
    Ok(checks)
}

/// Largest distance between the output responses under the two fiscal
/// stances, relative to the larger of the two amplitudes, for one shock and
/// monetary stance.
pub fn fiscal_stance_distance(
    base: &Calibration,
    variant: Variant,
    shock: ShockKind,
    monetary: MonetaryStance,
) -> Result<f64> {
    let (_, a) = irf_for(base, shock, PolicyMix::new(monetary, FiscalStance::Passive), variant)?;
    let (_, b) = irf_for(base, shock, PolicyMix::new(monetary, FiscalStance::LessPassive), variant)?;
    let ya = &a.get("Y").expect("output series").values;
    let yb = &b.get("Y").expect("output series").values;
    let amplitude = ya
        .iter()
        .chain(yb.iter())
        .fold(0.0_f64, |m, v| m.max(v.abs()));
    let dist = ya
        .iter()
        .zip(yb)
        .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
    Ok(if amplitude == 0.0 { 0.0 } else { dist / amplitude })
}
