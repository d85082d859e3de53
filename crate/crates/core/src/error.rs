//! Error types shared by all analysis modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    /// Power iteration hit its cap before the relative tolerance was met.
    #[error("iteration cap reached: last estimate {last:.6e}, residual {residual:.6e} after {iterations} iterations")]
    ConvergenceFailure {
        last: f64,
        residual: f64,
        iterations: usize,
    },

    #[error("numeric failure: {0}")]
    Numeric(String),

    /// zI - A is singular or its condition estimate exceeds the cap; z is in
    /// or near the spectrum.
    #[error("resolvent singular or near-singular: condition estimate {cond:.3e}")]
    ResolventSingular { cond: f64 },

    #[error("no exponential bound with rate below |z|: {0}")]
    InsufficientBound(String),

    #[error("family not certified stable: {0}")]
    NotStableCertified(String),

    #[error("resource cap exceeded: {0}")]
    Resource(String),

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
