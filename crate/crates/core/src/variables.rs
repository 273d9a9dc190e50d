//! Endogenous variable ordering with timing and reporting tags.
//!
//! Stocks chosen at the end of period `t` (bond positions, debt, capital)
//! are indexed as period-`t` variables; they enter the next period's
//! equations through the lagged vector. Bond stocks and fiscal aggregates
//! are stored in real terms (deflated by the current price level) and the
//! nominal government aggregates `G`, `T`, `B` carry the price level.

use serde::Serialize;

/// How a variable enters the dynamic system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Timing {
    /// Endogenous state: its lag enters some equation.
    Predetermined,
    /// Its lead enters some equation.
    Jump,
    /// Contemporaneous only.
    Static,
    /// Driving process; also a state.
    Exogenous,
}

impl Timing {
    pub fn is_state(self) -> bool {
        matches!(self, Timing::Predetermined | Timing::Exogenous)
    }
}

/// How deviations are reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitTag {
    /// Strictly positive quantity: percent deviation from its own steady state.
    Level,
    /// Gross rate or ratio: deviation in percentage points.
    Rate,
    /// Stock or fiscal flow: percent of steady-state output.
    Share,
}

macro_rules! variables {
    ($( $var:ident => ($name:literal, $timing:ident, $unit:ident) ),+ $(,)?) => {
        /// Model variables in index order.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        #[repr(usize)]
        pub enum Var { $($var),+ }

        impl Var {
            pub const ALL: &'static [Var] = &[$(Var::$var),+];

            pub const fn name(self) -> &'static str {
                match self { $(Var::$var => $name),+ }
            }

            pub const fn timing(self) -> Timing {
                match self { $(Var::$var => Timing::$timing),+ }
            }

            pub const fn unit(self) -> UnitTag {
                match self { $(Var::$var => UnitTag::$unit),+ }
            }
        }
    };
}

variables! {
    Ck => ("C_K", Jump, Level),
    Cs => ("C_S", Jump, Level),
    Ch => ("C_H", Jump, Level),
    N => ("N", Static, Level),
    W => ("W", Static, Level),
    Zk => ("Z_K", Static, Share),
    Zs => ("Z_S", Static, Share),
    BbK => ("BB_K", Predetermined, Share),
    BbS => ("BB_S", Predetermined, Share),
    BbH => ("BB_H", Predetermined, Share),
    Y => ("Y", Jump, Level),
    Mc => ("MC", Static, Level),
    Mpl => ("MPL", Static, Level),
    Mpk => ("MPK", Static, Level),
    Rk => ("R_K", Jump, Rate),
    D => ("D", Static, Share),
    K => ("K", Static, Level),
    Kk => ("K_K", Predetermined, Level),
    Ik => ("I_K", Predetermined, Level),
    I => ("I", Static, Level),
    X => ("X", Jump, Rate),
    Sadj => ("S_adj", Static, Rate),
    SadjPrime => ("S_adj_prime", Jump, Rate),
    Q => ("Q", Jump, Level),
    Rb => ("R_b", Predetermined, Rate),
    R => ("R", Static, Rate),
    Lp => ("LP", Static, Rate),
    C => ("C", Static, Level),
    Pi => ("Pi", Jump, Rate),
    P => ("P", Predetermined, Level),
    A => ("A", Exogenous, Level),
    M => ("M", Exogenous, Level),
    G => ("G", Exogenous, Share),
    Greal => ("G_real", Static, Share),
    T => ("T", Predetermined, Share),
    TaxReal => ("T_real", Static, Share),
    B => ("B", Predetermined, Share),
    Breal => ("B_real", Predetermined, Share),
    DebtShare => ("debt_share", Static, Rate),
}

/// Number of endogenous variables.
pub const N_VARS: usize = 39;

/// Shock innovations in the order they enter the residual system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(usize)]
pub enum Shock {
    Technology = 0,
    Spending = 1,
    Monetary = 2,
    Transfer = 3,
}

pub const N_SHOCKS: usize = 4;

impl Shock {
    pub const ALL: [Shock; N_SHOCKS] =
        [Shock::Technology, Shock::Spending, Shock::Monetary, Shock::Transfer];

    pub fn name(self) -> &'static str {
        match self {
            Shock::Technology => "eps_A",
            Shock::Spending => "eps_g",
            Shock::Monetary => "eps_m",
            Shock::Transfer => "eps_T",
        }
    }
}

/// Ordered variable names with their tags.
#[derive(Debug, Clone, Serialize)]
pub struct VariableIndex {
    pub names: Vec<&'static str>,
    pub timing: Vec<Timing>,
    pub units: Vec<UnitTag>,
}

impl Default for VariableIndex {
    fn default() -> Self {
        VariableIndex {
            names: Var::ALL.iter().map(|v| v.name()).collect(),
            timing: Var::ALL.iter().map(|v| v.timing()).collect(),
            units: Var::ALL.iter().map(|v| v.unit()).collect(),
        }
    }
}

impl VariableIndex {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| *n == name)
    }

    /// Indices whose lag is a state of the system.
    pub fn state_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.timing[i].is_state()).collect()
    }

    pub fn n_predetermined(&self) -> usize {
        self.state_indices().len()
    }
}
