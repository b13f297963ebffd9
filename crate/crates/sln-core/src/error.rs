use alloc::string::String;

use crate::C64;

/// Errors raised by the core evaluators and solvers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CoreError {
    #[error("domain error: {0}")]
    Domain(String),
    /// Evaluation landed on (or numerically at) a zero of `q_level`.
    #[error("pole of q_{level} at x = {x}: root {root}")]
    Pole { level: usize, root: C64, x: C64 },
    #[error("zero denominator while evaluating {0}")]
    ZeroDenominator(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("no convergence after {iterations} iterations, last residual {residual:e}")]
    NoConvergence { iterations: usize, residual: f64 },
}

pub type Result<T> = core::result::Result<T, CoreError>;

pub(crate) fn domain(msg: impl Into<String>) -> CoreError {
    CoreError::Domain(msg.into())
}
