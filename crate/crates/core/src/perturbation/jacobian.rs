use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{ModelError, Result};
use crate::model::{Economy, Equation, N_EQUATIONS};
use crate::variables::{Shock, Var, N_SHOCKS, N_VARS};

/// First-order coefficients of `A x(t+1) + B x(t) + C x(t-1) + D e(t) = 0`
/// in deviations from the steady state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructuralJacobians {
    /// Derivatives with respect to leads.
    pub a: DMatrix<f64>,
    /// Derivatives with respect to current values.
    pub b: DMatrix<f64>,
    /// Derivatives with respect to lags.
    pub c: DMatrix<f64>,
    /// Derivatives with respect to shock innovations.
    pub d: DMatrix<f64>,
}

impl StructuralJacobians {
    pub fn n_vars(&self) -> usize {
        self.b.ncols()
    }

    /// Columns of `C` with at least one nonzero entry.
    pub fn lagged_columns(&self) -> Vec<usize> {
        (0..self.c.ncols())
            .filter(|&j| self.c.column(j).iter().any(|v| *v != 0.0))
            .collect()
    }

    /// Checks dimensions and finiteness.
    pub fn validate(&self) -> Result<()> {
        let n = self.b.nrows();
        for (name, m) in [("A", &self.a), ("B", &self.b), ("C", &self.c)] {
            if m.nrows() != n || m.ncols() != n {
                return Err(ModelError::Contract(format!(
                    "{name} is {}x{}, expected {n}x{n}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            if m.iter().any(|v| !v.is_finite()) {
                return Err(ModelError::Contract(format!("{name} has non-finite entries")));
            }
        }
        if self.d.nrows() != n || self.d.iter().any(|v| !v.is_finite()) {
            return Err(ModelError::Contract("D is malformed".into()));
        }
        Ok(())
    }

    /// Multiplies equation `row` by `factor` in every block.
    pub fn scale_row(&mut self, row: usize, factor: f64) {
        for m in [&mut self.a, &mut self.b, &mut self.c, &mut self.d] {
            m.row_mut(row).scale_mut(factor);
        }
    }
}

/// Which argument of the residual function a derivative refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Lag,
    Current,
    Lead,
    Shock,
}

/// Entries smaller than this are set to zero.
pub const TRUNCATION: f64 = 1e-12;

/// Finite-difference step used for a variable with steady-state value `x`.
#[inline]
pub fn step_for(x: f64) -> f64 {
    (1e-6 * x.abs()).max(1e-6)
}

/// Central finite difference of every residual with respect to one input,
/// with an explicit step.
pub fn central_difference(econ: &Economy, slot: Slot, index: usize, h: f64) -> Result<Vec<f64>> {
    let ss = &econ.steady.values;
    let mut lag = ss.clone();
    let mut cur = ss.clone();
    let mut lead = ss.clone();
    let mut shocks = vec![0.0; N_SHOCKS];
    let mut up = vec![0.0; N_EQUATIONS];
    let mut down = vec![0.0; N_EQUATIONS];
    {
        let target: &mut Vec<f64> = match slot {
            Slot::Lag => &mut lag,
            Slot::Current => &mut cur,
            Slot::Lead => &mut lead,
            Slot::Shock => &mut shocks,
        };
        target[index] += h;
    }
    econ.residuals_into(&lag, &cur, &lead, &shocks, &mut up)?;
    {
        let target: &mut Vec<f64> = match slot {
            Slot::Lag => &mut lag,
            Slot::Current => &mut cur,
            Slot::Lead => &mut lead,
            Slot::Shock => &mut shocks,
        };
        target[index] -= 2.0 * h;
    }
    econ.residuals_into(&lag, &cur, &lead, &shocks, &mut down)?;
    Ok(up
        .iter()
        .zip(&down)
        .map(|(u, d)| (u - d) / (2.0 * h))
        .collect())
}

/// Linearizes the residual system at the steady state by central
/// differences with step `max(1e-6, 1e-6 |x*|)`.
pub fn jacobians(econ: &Economy) -> Result<StructuralJacobians> {
    let ss = &econ.steady.values;
    let mut a = DMatrix::zeros(N_EQUATIONS, N_VARS);
    let mut b = DMatrix::zeros(N_EQUATIONS, N_VARS);
    let mut c = DMatrix::zeros(N_EQUATIONS, N_VARS);
    let mut d = DMatrix::zeros(N_EQUATIONS, N_SHOCKS);

    let fill = |m: &mut DMatrix<f64>, slot: Slot, col: usize, h: f64| -> Result<()> {
        let column = central_difference(econ, slot, col, h)?;
        for (row, v) in column.into_iter().enumerate() {
            if !v.is_finite() {
                let variable = match slot {
                    Slot::Shock => Shock::ALL[col].name().to_string(),
                    _ => Var::ALL[col].name().to_string(),
                };
                return Err(ModelError::NonFiniteDerivative {
                    equation: Equation::ALL[row].name().to_string(),
                    variable,
                });
            }
            m[(row, col)] = if v.abs() < TRUNCATION { 0.0 } else { v };
        }
        Ok(())
    };

    for (j, &x) in ss.iter().enumerate() {
        let h = step_for(x);
        fill(&mut a, Slot::Lead, j, h)?;
        fill(&mut b, Slot::Current, j, h)?;
        fill(&mut c, Slot::Lag, j, h)?;
    }
    for k in 0..N_SHOCKS {
        fill(&mut d, Slot::Shock, k, 1e-6)?;
    }
    Ok(StructuralJacobians { a, b, c, d })
}

/// Ratio of successive central-difference changes when halving the step,
/// `(D(h) - D(h/2)) / (D(h/2) - D(h/4))`. Close to 4 when truncation error
/// dominates, as expected for a second-order scheme.
pub fn richardson_ratio(econ: &Economy, equation: Equation, slot: Slot, index: usize, h: f64) -> Result<f64> {
    let row = equation as usize;
    let d1 = central_difference(econ, slot, index, h)?[row];
    let d2 = central_difference(econ, slot, index, h / 2.0)?[row];
    let d4 = central_difference(econ, slot, index, h / 4.0)?[row];
    Ok((d1 - d2) / (d2 - d4))
}
