use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("validation error: {0}")]
    Validation(String),

    /// Adaptive quadrature hit its depth limit; carries the best estimate.
    #[error("quadrature did not converge: best estimate {best} (error estimate {err_est})")]
    Convergence { best: f64, err_est: f64 },

    #[error("grid does not resolve the state: estimated relative error {estimate:e} > {limit:e}")]
    Resolution { estimate: f64, limit: f64 },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
