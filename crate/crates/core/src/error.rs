use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// The variants are grouped the way the command-line front end reports them:
/// bad input, insufficient resolution (the caller should raise a grid size or
/// truncation order), and invariant breaches in a computed result.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("insufficient resolution: {0}")]
    Resolution(String),

    #[error("no convergence after {iterations} iterations (last residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("evaluation point {distance:e} from the curve is inside the near-singular band ({threshold:e})")]
    NearSingularity { distance: f64, threshold: f64 },

    #[error("ambiguous numerical rank: singular value {value:e} within a factor 10 of rank tolerance {tol:e}")]
    AmbiguousRank { value: f64, tol: f64 },

    #[error("invalid result: {0}")]
    InvalidResult(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn resolution(msg: impl Into<String>) -> Self {
        Error::Resolution(msg.into())
    }

    pub(crate) fn result(msg: impl Into<String>) -> Self {
        Error::InvalidResult(msg.into())
    }

    /// Process exit code used by the CLI: 2 bad input, 3 resolution or
    /// non-convergence, 4 invariant breach.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) => 2,
            Error::Resolution(_)
            | Error::NonConvergence { .. }
            | Error::NearSingularity { .. }
            | Error::AmbiguousRank { .. } => 3,
            Error::InvalidResult(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
