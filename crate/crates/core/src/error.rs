use thiserror::Error;

/// Errors produced by the solvers and parameter relations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain of the relation or solver.
    #[error("domain error: {0}")]
    Domain(String),

    /// A rate or ratio diverges for the requested parameters.
    #[error("divergence: {0}")]
    Divergence(String),

    /// The steady-state system has no unique solution (a lossless pole).
    #[error("singular system: {what} (|value| = {magnitude:e})")]
    Singular { what: &'static str, magnitude: f64 },

    /// A dense solve was attempted on a matrix whose condition estimate
    /// exceeds the accepted bound.
    #[error("ill-conditioned network matrix (condition estimate {0:e})")]
    IllConditioned(f64),

    /// Numerical quadrature did not reach the requested accuracy.
    #[error("quadrature did not converge: {0}")]
    Accuracy(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
