//! Linearization of the equilibrium system and its first-order solution.

mod jacobian;
mod solve;

pub use jacobian::{
    central_difference, jacobians, richardson_ratio, step_for, Slot, StructuralJacobians,
    TRUNCATION,
};
pub use solve::{
    classify_determinacy, cyclic_reduction, solve_linear_re, spectral_radius, Classification,
    EigenReport, LinearSolution, Policy, BOUNDARY_BAND, SOLVENT_TOL, UNIT_CIRCLE_TOL,
};

use crate::error::Result;
use crate::model::Economy;
use crate::variables::VariableIndex;

/// Linearizes and solves a calibrated economy.
pub fn solve_economy(econ: &Economy) -> Result<(StructuralJacobians, LinearSolution)> {
    let j = jacobians(econ)?;
    let states = VariableIndex::default().state_indices();
    let sol = solve_linear_re(&j, &states)?;
    Ok((j, sol))
}

/// Classification only, for parameter scans.
pub fn classify_economy(econ: &Economy) -> Result<(Classification, EigenReport)> {
    let j = jacobians(econ)?;
    let states = VariableIndex::default().state_indices();
    classify_determinacy(&j, &states)
}
