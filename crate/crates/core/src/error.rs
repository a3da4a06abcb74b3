//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of an operation.
    #[error("DomainError: {0}")]
    Domain(String),
    /// An equation provably has no solution for the given input
    /// (e.g. the degree-exponent equation when every degree equals one).
    #[error("NoSolution: {0}")]
    NoSolution(String),
    /// An iterative routine failed to reach its tolerance.
    #[error("NumericError: {0}")]
    Numeric(String),
    /// The observed information matrix cannot be inverted.
    #[error("SingularHessian: {0}")]
    SingularHessian(String),
    /// Structurally invalid input (empty histograms, inconsistent counts, ...).
    #[error("InvalidInput: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
