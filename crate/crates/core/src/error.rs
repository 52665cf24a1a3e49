use std::path::PathBuf;

use thiserror::Error;

use crate::spectral::FieldState;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("field is in {actual} representation, expected {expected}")]
    Representation {
        expected: &'static str,
        actual: &'static str,
    },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("{0} is not a dyadic number (expected 1, 2, 4, ...)")]
    NotDyadic(u64),

    #[error("invalid exponent {0}: must lie in [1, inf]")]
    InvalidExponent(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("surface tension parameter kappa = 1/2 is singular")]
    SingularKappa,

    #[error("depth h must be positive and finite, got {0}")]
    InvalidDepth(f64),

    #[error("alpha1 must be nonzero")]
    ZeroAlpha1,

    #[error("frequency shift {0} is not on the lattice of the chosen box")]
    OffLattice(f64),

    #[error("time step must be positive, got {0}")]
    InvalidTimeStep(f64),

    #[error("non-finite value detected at t = {t}; the last valid state is preserved")]
    Instability { t: f64, last_valid: Box<FieldState> },

    #[error("estimate undefined: {0}")]
    Degenerate(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("snapshot format error: {0}")]
    Snapshot(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("invariant check failed: {0}")]
    CheckFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
