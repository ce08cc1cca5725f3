use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument {value} outside the domain of {what}")]
    Domain { what: &'static str, value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("value {value} outside the representable range [{lo}, {hi}] of {what}")]
    Range {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("Keller-Osserman integral diverges")]
    KoViolation,

    #[error("mesh defect: {0}")]
    Mesh(String),

    #[error("eigen-iteration did not converge after {iterations} iterations")]
    EigenNonConvergence { iterations: usize },

    #[error("Newton iteration failed after {iterations} iterations (scaled residual {residual:e})")]
    SolverFailure {
        iterations: usize,
        residual: f64,
        last_iterate: Vec<f64>,
    },

    #[error("interior profile did not stabilise; relative changes per level: {deltas:?}")]
    NonStabilization { deltas: Vec<f64> },

    #[error("exhaustion profiles not monotone: relative increase {excess:e} at level {level}")]
    Consistency { level: usize, excess: f64 },

    #[error("usage: {0}")]
    Usage(String),
}

impl Error {
    /// True for errors that come out of a numerical procedure rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::EigenNonConvergence { .. }
                | Error::SolverFailure { .. }
                | Error::NonStabilization { .. }
                | Error::Consistency { .. }
        )
    }
}
