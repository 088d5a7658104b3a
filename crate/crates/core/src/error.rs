use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpinSqError {
    #[error("invalid spin quantum number: {0}")]
    InvalidSpin(String),

    #[error("direction must be a unit vector (|n| = {norm})")]
    NotUnit { norm: f64 },

    #[error("axes do not form an orthonormal frame: {0}")]
    BadFrame(String),

    #[error("dimension {dim} exceeds the configured guard {guard} (raise it with --guard-dim or SPINSQ_GUARD_DIM)")]
    Capacity { dim: u128, guard: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("non-monotone bracket: verdict at {lo_param} = {lo_verdict}, at {hi_param} = {hi_verdict}")]
    NonMonotone {
        lo_param: f64,
        lo_verdict: bool,
        hi_param: f64,
        hi_verdict: bool,
    },

    #[error("scan range [{lo}, {hi}] does not bracket the transition of {criterion}")]
    Bracket { criterion: String, lo: f64, hi: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

impl SpinSqError {
    pub fn is_capacity(&self) -> bool {
        matches!(self, SpinSqError::Capacity { .. })
    }
}

pub type Result<T> = std::result::Result<T, SpinSqError>;
