use thiserror::Error;

/// Errors raised by model construction, evaluation and solution.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid calibration: {0}")]
    InvalidCalibration(String),

    #[error("calibration infeasible: {entry} = {value} lies outside [0, 1]")]
    InfeasibleProbability { entry: &'static str, value: f64 },

    #[error("transition matrix invalid: {0}")]
    InvalidTransition(String),

    #[error("stationary distribution is not unique (reducible chain)")]
    AmbiguousStationary { candidate: [f64; 3] },

    #[error("steady state infeasible: {0}")]
    InfeasibleSteadyState(String),

    #[error("non-finite value for {variable}")]
    NonFinite { variable: String },

    #[error("domain error: {variable} = {value} must be positive")]
    Domain { variable: String, value: f64 },

    #[error("non-finite derivative of equation {equation} with respect to {variable}")]
    NonFiniteDerivative { equation: String, variable: String },

    #[error("linear solver failure: {0}")]
    Solver(String),

    #[error("solution is not determinate: {0}")]
    NotDeterminate(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("configuration error: {0}")]
    Config(String),
}

impl ModelError {
    /// True for errors caused by the inputs rather than the numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            ModelError::InvalidCalibration(_)
                | ModelError::InfeasibleProbability { .. }
                | ModelError::InvalidTransition(_)
                | ModelError::InfeasibleSteadyState(_)
                | ModelError::Config(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, ModelError>;
