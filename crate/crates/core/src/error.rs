use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite parameter `{field}`")]
    NonFinite { field: &'static str },

    #[error("length must be nonnegative (got {0})")]
    NegativeLength(f64),

    #[error("parameters violate the {constraint} constraint: {detail}")]
    Constraint {
        constraint: &'static str,
        detail: String,
    },

    /// Characteristic roots are too close for the closed-form solution.
    #[error(
        "characteristic roots are nearly multiple (separation {min_separation:e}, \
         estimated forward error {forward_error:e}); use the ODE oracle"
    )]
    MultipleRoots {
        min_separation: f64,
        forward_error: f64,
    },

    #[error("step size underflow at z = {z} (h = {h:e})")]
    StepSizeUnderflow { z: f64, h: f64 },

    #[error("step limit of {max_steps} exceeded at z = {z}")]
    StepLimitExceeded { z: f64, max_steps: usize },

    #[error("invalid z grid: {0}")]
    InvalidGrid(String),

    #[error("invalid scan spec: {0}")]
    InvalidSpec(String),

    #[error("strict cross-check failed: {violations} of {checked} sampled points disagree")]
    CrossCheckFailed { violations: usize, checked: usize },
}

impl Error {
    /// Short machine-readable tag used in scan failure records.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::NonFinite { .. } => "non_finite",
            Error::NegativeLength(_) => "negative_length",
            Error::Constraint { .. } => "constraint",
            Error::MultipleRoots { .. } => "multiple_roots",
            Error::StepSizeUnderflow { .. } => "step_size_underflow",
            Error::StepLimitExceeded { .. } => "step_limit",
            Error::InvalidGrid(_) => "invalid_grid",
            Error::InvalidSpec(_) => "invalid_spec",
            Error::CrossCheckFailed { .. } => "cross_check",
        }
    }
}
