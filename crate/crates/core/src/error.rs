use thiserror::Error;

/// Errors produced by the analysis library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BfnError {
    #[error("arity mismatch: expected {expected}, got {actual}")]
    ArityMismatch { expected: usize, actual: usize },

    #[error("point {point:#x} is out of range for arity {arity}")]
    PointOutOfRange { point: u32, arity: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("size limit exceeded: {0}")]
    SizeExceeded(String),

    #[error("bias out of range: {0} is not strictly inside (0, 1)")]
    BiasOutOfRange(f64),

    #[error("parse error at line {line}, offset {offset}: {message}")]
    Parse {
        line: usize,
        offset: usize,
        message: String,
    },

    #[error("infeasible joint model (p = {p}, q = {q}, rho = {rho}): rho must lie in [{rho_min}, {rho_max}]")]
    Infeasible {
        p: f64,
        q: f64,
        rho: f64,
        rho_min: f64,
        rho_max: f64,
    },
}

pub type Result<T> = std::result::Result<T, BfnError>;
