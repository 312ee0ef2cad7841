use thiserror::Error;

use crate::flow::FlowState;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension {0} is below the minimum of 3")]
    DimensionTooSmall(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("metric is not positive definite")]
    NotPositiveDefinite,

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("entries must be finite")]
    NonFinite,

    #[error("curvature tensor violates {identity} (residual {residual:e})")]
    CurvatureSymmetry {
        identity: &'static str,
        residual: f64,
    },

    #[error("scalar curvature must be positive, got {0}")]
    NonPositiveScalar(f64),

    #[error("matrix is singular (|det| = {det:e} below floor {floor:e})")]
    Singular { det: f64, floor: f64 },

    #[error("jacobi iteration did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("time {t} is outside the admissible horizon {horizon}")]
    Horizon { t: f64, horizon: f64 },

    #[error("index {k} out of range 1..={max}")]
    IndexOutOfRange { k: usize, max: usize },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("integration fault at t = {}: {reason}", last_good.t)]
    IntegrationFault {
        reason: String,
        last_good: Box<FlowState>,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn require_dim(n: usize) -> Result<()> {
    if n < 3 {
        Err(Error::DimensionTooSmall(n))
    } else {
        Ok(())
    }
}

pub(crate) fn require_same(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
