use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("zero diagonal entry at row {index}")]
    ZeroDiagonal { index: usize },

    #[error("non-finite value while assembling element ({ex}, {ey})")]
    NonFinite { ex: usize, ey: usize },

    #[error("linear solver failed: {0}")]
    LinearSolve(String),

    #[error("Newton iteration did not converge after {iterations} iterations at t = {time} day")]
    NewtonDivergence {
        time: f64,
        iterations: usize,
        /// Per-field residual norms at each iterate.
        history: Vec<Vec<f64>>,
    },

    #[error("step from t = {time} day failed: {source}")]
    Step {
        time: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("bound violation at t = {time} day: {detail}")]
    BoundsViolation { time: f64, detail: String },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
