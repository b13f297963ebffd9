use sln_core::CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ThermoError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("iteration diverged after {iterations} steps (residual {residual:e}); try a larger damping θ")]
    Diverged { iterations: usize, residual: f64 },
    #[error("non-finite value at iteration {iteration}")]
    NotFinite { iteration: usize },
    #[error("no convergence in {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("grid window too small: log B - log B∞ is still {tail:e} at the edges")]
    GridTooSmall { tail: f64 },
    #[error("inconsistent constants: residual {residual:e} in the asymptotic equation")]
    Inconsistent { residual: f64 },
    #[error("dimension {dim} exceeds the cap {cap}")]
    Dimension { dim: usize, cap: usize },
    #[error("solve failed at T = {temperature}, μ = {mu:?}: {source}")]
    AtPoint {
        temperature: f64,
        mu: Vec<f64>,
        #[source]
        source: Box<ThermoError>,
    },
    #[error("density target unreachable: {0}")]
    Unreachable(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, ThermoError>;
