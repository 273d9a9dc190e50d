//! Model parameters and structural variant flags.
//!
//! A [`Calibration`] is the single source of truth for every structural and
//! policy parameter. Defaults reproduce the baseline quarterly calibration.
//! The labor disutility weight and the fixed production cost are derived in
//! the steady state and are deliberately absent here.

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Calibration {
    /// Discount factor (quarterly).
    pub beta: f64,
    /// Inverse intertemporal elasticity of substitution.
    pub sigma: f64,
    /// Inverse Frisch elasticity.
    pub varphi: f64,
    /// Depreciation rate (quarterly).
    pub delta: f64,
    /// Investment adjustment cost.
    pub iota: f64,
    /// Capital share in production.
    pub alpha: f64,
    /// Elasticity of substitution between varieties.
    pub epsilon: f64,
    /// Rotemberg price adjustment cost.
    pub xi: f64,
    #[serde(rename = "pop_K")]
    pub pop_k: f64,
    #[serde(rename = "pop_S")]
    pub pop_s: f64,
    #[serde(rename = "pop_H")]
    pub pop_h: f64,
    #[serde(rename = "lambda_KK")]
    pub lambda_kk: f64,
    #[serde(rename = "lambda_KH")]
    pub lambda_kh: f64,
    #[serde(rename = "lambda_HK")]
    pub lambda_hk: f64,
    #[serde(rename = "lambda_SS")]
    pub lambda_ss: f64,
    /// Taylor-rule response to inflation.
    pub phi_pi: f64,
    #[serde(rename = "rho_Rb")]
    pub rho_rb: f64,
    pub rho_m: f64,
    pub rho_g: f64,
    #[serde(rename = "rho_T")]
    pub rho_t: f64,
    pub rho_a: f64,
    /// Tax response to lagged debt.
    #[serde(rename = "gamma_T")]
    pub gamma_t: f64,
    /// Tax response to current spending.
    #[serde(rename = "gamma_TG")]
    pub gamma_tg: f64,
    /// Spending response to lagged debt.
    #[serde(rename = "gamma_G")]
    pub gamma_g: f64,
    /// Steady-state hours.
    #[serde(rename = "N_star")]
    pub n_star: f64,
    /// Gross steady-state inflation.
    #[serde(rename = "Pi_star")]
    pub pi_star: f64,
    /// Steady-state spending share of output.
    pub gy_ratio: f64,
    /// Steady-state debt over annual output.
    pub by_ratio: f64,
}

impl Default for Calibration {
    fn default() -> Self {
        Calibration {
            beta: 0.99,
            sigma: 1.0,
            varphi: 1.0,
            delta: 0.025,
            iota: 2.5,
            alpha: 0.33,
            epsilon: 6.0,
            xi: 42.7,
            pop_k: 0.1,
            pop_s: 0.7,
            pop_h: 0.2,
            lambda_kk: 0.8,
            lambda_kh: 0.02,
            lambda_hk: 0.0541,
            lambda_ss: 0.95,
            phi_pi: 0.8,
            rho_rb: 0.0,
            rho_m: 0.3,
            rho_g: 0.9,
            rho_t: 0.0,
            rho_a: 0.75,
            gamma_t: 1.0,
            gamma_tg: 0.1,
            gamma_g: 0.0,
            n_star: 0.33,
            pi_star: 1.0,
            gy_ratio: 0.2,
            by_ratio: 0.57,
        }
    }
}

/// Parameter names accepted in configuration files, in canonical order.
pub const PARAMETER_NAMES: [&str; 28] = [
    "beta", "sigma", "varphi", "delta", "iota", "alpha", "epsilon", "xi", "pop_K", "pop_S",
    "pop_H", "lambda_KK", "lambda_KH", "lambda_HK", "lambda_SS", "phi_pi", "rho_Rb", "rho_m",
    "rho_g", "rho_T", "rho_a", "gamma_T", "gamma_TG", "gamma_G", "N_star", "Pi_star",
    "gy_ratio", "by_ratio",
];

impl Calibration {
    pub fn get(&self, name: &str) -> Option<f64> {
        Some(match name {
            "beta" => self.beta,
            "sigma" => self.sigma,
            "varphi" => self.varphi,
            "delta" => self.delta,
            "iota" => self.iota,
            "alpha" => self.alpha,
            "epsilon" => self.epsilon,
            "xi" => self.xi,
            "pop_K" => self.pop_k,
            "pop_S" => self.pop_s,
            "pop_H" => self.pop_h,
            "lambda_KK" => self.lambda_kk,
            "lambda_KH" => self.lambda_kh,
            "lambda_HK" => self.lambda_hk,
            "lambda_SS" => self.lambda_ss,
            "phi_pi" => self.phi_pi,
            "rho_Rb" => self.rho_rb,
            "rho_m" => self.rho_m,
            "rho_g" => self.rho_g,
            "rho_T" => self.rho_t,
            "rho_a" => self.rho_a,
            "gamma_T" => self.gamma_t,
            "gamma_TG" => self.gamma_tg,
            "gamma_G" => self.gamma_g,
            "N_star" => self.n_star,
            "Pi_star" => self.pi_star,
            "gy_ratio" => self.gy_ratio,
            "by_ratio" => self.by_ratio,
            _ => return None,
        })
    }

    /// Sets a parameter by its configuration name.
    ///
    /// `pop_H` is special: it rebalances `pop_S` while holding `pop_K`, so the
    /// shares keep summing to one.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        let slot = match name {
            "beta" => &mut self.beta,
            "sigma" => &mut self.sigma,
            "varphi" => &mut self.varphi,
            "delta" => &mut self.delta,
            "iota" => &mut self.iota,
            "alpha" => &mut self.alpha,
            "epsilon" => &mut self.epsilon,
            "xi" => &mut self.xi,
            "pop_K" => &mut self.pop_k,
            "pop_S" => &mut self.pop_s,
            "pop_H" => {
                self.pop_s = 1.0 - self.pop_k - value;
                &mut self.pop_h
            }
            "lambda_KK" => &mut self.lambda_kk,
            "lambda_KH" => &mut self.lambda_kh,
            "lambda_HK" => &mut self.lambda_hk,
            "lambda_SS" => &mut self.lambda_ss,
            "phi_pi" => &mut self.phi_pi,
            "rho_Rb" => &mut self.rho_rb,
            "rho_m" => &mut self.rho_m,
            "rho_g" => &mut self.rho_g,
            "rho_T" => &mut self.rho_t,
            "rho_a" => &mut self.rho_a,
            "gamma_T" => &mut self.gamma_t,
            "gamma_TG" => &mut self.gamma_tg,
            "gamma_G" => &mut self.gamma_g,
            "N_star" => &mut self.n_star,
            "Pi_star" => &mut self.pi_star,
            "gy_ratio" => &mut self.gy_ratio,
            "by_ratio" => &mut self.by_ratio,
            "psi" | "F" => {
                return Err(ModelError::Config(format!(
                    "`{name}` is derived in the steady state and cannot be configured"
                )))
            }
            _ => return Err(ModelError::Config(format!("unknown parameter `{name}`"))),
        };
        *slot = value;
        Ok(())
    }

    /// Checks parameter ranges. Population shares must lie in (0, 1), except
    /// that the saver share may be zero in the two-agent economy.
    pub fn validate(&self, variant: &Variant) -> Result<()> {
        let bad = |msg: String| Err(ModelError::InvalidCalibration(msg));
        for name in PARAMETER_NAMES {
            let v = self.get(name).unwrap();
            if !v.is_finite() {
                return bad(format!("{name} is not finite"));
            }
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return bad(format!("beta = {} must lie in (0, 1)", self.beta));
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return bad(format!("delta = {} must lie in (0, 1]", self.delta));
        }
        if self.epsilon <= 1.0 {
            return bad(format!("epsilon = {} must exceed 1", self.epsilon));
        }
        if self.xi <= 0.0 {
            return bad(format!("xi = {} must be positive", self.xi));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha = {} must lie in (0, 1)", self.alpha));
        }
        if self.sigma <= 0.0 || self.varphi < 0.0 || self.iota < 0.0 {
            return bad("sigma must be positive; varphi and iota nonnegative".into());
        }
        if self.n_star <= 0.0 || self.pi_star <= 0.0 {
            return bad("N_star and Pi_star must be positive".into());
        }
        if !(self.gy_ratio >= 0.0 && self.gy_ratio < 1.0) || self.by_ratio <= 0.0 {
            return bad("gy_ratio must lie in [0, 1) and by_ratio must be positive".into());
        }
        let sum = self.pop_k + self.pop_s + self.pop_h;
        if (sum - 1.0).abs() > 1e-12 {
            return bad(format!("population shares sum to {sum}, not 1"));
        }
        let two = variant.agents == AgentCount::Two;
        let inside = |x: f64| x > 0.0 && x < 1.0;
        if !inside(self.pop_k) || !inside(self.pop_h) {
            return bad("pop_K and pop_H must lie in (0, 1)".into());
        }
        if two {
            if self.pop_s != 0.0 {
                return bad("two-agent economy requires pop_S = 0".into());
            }
        } else if !inside(self.pop_s) {
            return bad(format!("pop_S = {} must lie in (0, 1)", self.pop_s));
        }
        for (name, v) in [
            ("lambda_KK", self.lambda_kk),
            ("lambda_KH", self.lambda_kh),
            ("lambda_HK", self.lambda_hk),
            ("lambda_SS", self.lambda_ss),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return bad(format!("{name} = {v} must lie in [0, 1]"));
            }
        }
        for (name, v) in [
            ("rho_Rb", self.rho_rb),
            ("rho_m", self.rho_m),
            ("rho_g", self.rho_g),
            ("rho_T", self.rho_t),
            ("rho_a", self.rho_a),
        ] {
            if !(0.0..1.0).contains(&v) {
                return bad(format!("{name} = {v} must lie in [0, 1)"));
            }
        }
        Ok(())
    }

    /// Returns the calibration the given variant actually runs with.
    ///
    /// The two-agent economy removes savers: `pop_S = 0`, `pop_K = 0.8`,
    /// `lambda_KK = 0.98`, with capitalists leaving only towards the
    /// hand-to-mouth state.
    pub fn for_variant(&self, variant: &Variant) -> Calibration {
        let mut cal = *self;
        if variant.agents == AgentCount::Two {
            cal.pop_s = 0.0;
            cal.pop_k = TWO_AGENT_POP_K;
            cal.pop_h = 1.0 - TWO_AGENT_POP_K;
            cal.lambda_kk = TWO_AGENT_LAMBDA_KK;
            cal.lambda_kh = 1.0 - TWO_AGENT_LAMBDA_KK;
            cal.lambda_hk = cal.pop_k * cal.lambda_kh / cal.pop_h;
            cal.lambda_ss = 0.0;
        }
        cal
    }
}

pub const TWO_AGENT_POP_K: f64 = 0.8;
pub const TWO_AGENT_LAMBDA_KK: f64 = 0.98;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AgentCount {
    Three,
    Two,
}

/// Whether the tax and spending rules target nominal or real quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FiscalMode {
    Nominal,
    Real,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Variant {
    pub agents: AgentCount,
    pub fiscal: FiscalMode,
    pub capital_portability: bool,
}

impl Default for Variant {
    fn default() -> Self {
        Variant::THREE
    }
}

impl Variant {
    pub const THREE: Variant = Variant {
        agents: AgentCount::Three,
        fiscal: FiscalMode::Nominal,
        capital_portability: false,
    };
    pub const TWO: Variant = Variant {
        agents: AgentCount::Two,
        fiscal: FiscalMode::Nominal,
        capital_portability: false,
    };
    pub const PORTABILITY: Variant = Variant {
        agents: AgentCount::Three,
        fiscal: FiscalMode::Nominal,
        capital_portability: true,
    };

    pub fn with_fiscal(mut self, fiscal: FiscalMode) -> Variant {
        self.fiscal = fiscal;
        self
    }

    /// Parses the economy names used on the command line.
    pub fn from_economy(name: &str) -> Result<Variant> {
        match name {
            "three" | "three-agent" => Ok(Variant::THREE),
            "two" | "two-agent" => Ok(Variant::TWO),
            "portability" => Ok(Variant::PORTABILITY),
            _ => Err(ModelError::Config(format!("unknown variant `{name}`"))),
        }
    }

    pub fn economy_name(&self) -> &'static str {
        match (self.agents, self.capital_portability) {
            (AgentCount::Two, _) => "two",
            (AgentCount::Three, true) => "portability",
            (AgentCount::Three, false) => "three",
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.agents == AgentCount::Two && self.capital_portability {
            return Err(ModelError::Config(
                "capital portability is only defined for the three-agent economy".into(),
            ));
        }
        Ok(())
    }
}

/// A parsed configuration file: parameters plus optional variant keys.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigFile {
    pub calibration: Calibration,
    pub agents: Option<AgentCount>,
    pub fiscal: Option<FiscalMode>,
    pub capital_portability: Option<bool>,
    /// Explicit values for probabilities normally implied by the anchors.
    pub transition_entries: Vec<(String, f64)>,
}

impl ConfigFile {
    /// The variant described by the file, starting from the three-agent
    /// nominal economy.
    pub fn variant(&self) -> Variant {
        let mut v = Variant::THREE;
        if let Some(a) = self.agents {
            v.agents = a;
        }
        if let Some(f) = self.fiscal {
            v.fiscal = f;
        }
        if let Some(p) = self.capital_portability {
            v.capital_portability = p;
        }
        v
    }
}

/// Parses flat `key = value` text. Unknown keys are errors and omitted keys
/// keep their defaults.
pub fn parse_config(text: &str) -> Result<ConfigFile> {
    let mut table: toml::Table =
        toml::from_str(text).map_err(|e| ModelError::Config(e.message().to_string()))?;

    let take_str = |table: &mut toml::Table, key: &str| -> Result<Option<String>> {
        match table.remove(key) {
            None => Ok(None),
            Some(toml::Value::String(s)) => Ok(Some(s)),
            Some(other) => Err(ModelError::Config(format!(
                "`{key}` must be a string, got {other}"
            ))),
        }
    };
    let agents = take_str(&mut table, "agent_count")?
        .map(|s| match s.as_str() {
            "three" => Ok(AgentCount::Three),
            "two" => Ok(AgentCount::Two),
            _ => Err(ModelError::Config(format!("agent_count `{s}`"))),
        })
        .transpose()?;
    let fiscal = take_str(&mut table, "fiscal_mode")?
        .map(|s| match s.as_str() {
            "nominal" => Ok(FiscalMode::Nominal),
            "real" => Ok(FiscalMode::Real),
            _ => Err(ModelError::Config(format!("fiscal_mode `{s}`"))),
        })
        .transpose()?;
    let capital_portability = match table.remove("capital_portability") {
        None => None,
        Some(toml::Value::Boolean(b)) => Some(b),
        Some(toml::Value::String(s)) if s == "on" => Some(true),
        Some(toml::Value::String(s)) if s == "off" => Some(false),
        Some(other) => {
            return Err(ModelError::Config(format!(
                "capital_portability must be on/off, got {other}"
            )))
        }
    };

    let mut calibration = Calibration::default();
    let mut transition_entries = Vec::new();
    for (key, value) in table {
        let v = match value {
            toml::Value::Float(f) => f,
            toml::Value::Integer(i) => i as f64,
            other => {
                return Err(ModelError::Config(format!(
                    "`{key}` must be numeric, got {other}"
                )))
            }
        };
        if crate::transition::DERIVED_ENTRIES.contains(&key.as_str()) {
            transition_entries.push((key, v));
        } else if key == "pop_H" {
            // Explicit assignment: do not rebalance against file order.
            calibration.pop_h = v;
        } else {
            calibration.set(&key, v)?;
        }
    }
    Ok(ConfigFile {
        calibration,
        agents,
        fiscal,
        capital_portability,
        transition_entries,
    })
}
