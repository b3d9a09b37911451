use thiserror::Error;

/// Errors produced anywhere in the simulation and estimation stack.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("covariance is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("degenerate setup: {0}")]
    Degenerate(String),

    #[error("{what} did not converge: successive refinements differ by {difference:e}")]
    NotConverged { what: &'static str, difference: f64 },

    #[error("{failed} of {total} Monte-Carlo blocks failed to produce an estimate")]
    TooManyFailures { failed: usize, total: usize },

    #[error("missing shot statistics for {0}")]
    MissingSetting(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Error {
    Error::InvalidParameter {
        name,
        value,
        reason,
    }
}
