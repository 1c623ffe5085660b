use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("solution is multivalued at t = {t} (characteristics cross at t* = {t_star})")]
    MultivaluedSolution { t: f64, t_star: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("resonance at k = {k}: harmonic {harmonic} denominator {denominator:e}")]
    Resonance { k: f64, harmonic: usize, denominator: f64 },

    #[error("Newton iteration did not converge after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("not found: {0}")]
    NotFound(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
