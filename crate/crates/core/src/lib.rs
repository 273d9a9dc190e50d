//! Three-agent New Keynesian economy with capitalists, savers and
//! hand-to-mouth households, where government bonds are the only asset that
//! travels across household types.
//!
//! The crate computes the steady state, linearizes the equilibrium system,
//! solves and classifies the first-order rational-expectations model, and
//! runs impulse-response, fiscal-multiplier and determinacy-region
//! experiments.

pub mod calibration;
pub mod error;
pub mod experiments;
pub mod io;
pub mod model;
pub mod perturbation;
pub mod regions;
pub mod steady;
pub mod transition;
pub mod variables;

pub use calibration::{parse_config, AgentCount, Calibration, FiscalMode, Variant};
pub use error::{ModelError, Result};
pub use model::{Economy, Equation};
pub use perturbation::{Classification, LinearSolution, StructuralJacobians};
pub use steady::{steady_state, SteadyState};
pub use transition::{complete_transition_matrix, stationary_shares, TransitionMatrix};
pub use variables::{Shock, Var, VariableIndex};
