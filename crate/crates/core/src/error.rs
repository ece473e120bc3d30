use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature hit its depth or size limit before reaching tolerance.
    #[error("quadrature did not converge: estimate {estimate:e} with error {error:e}")]
    Accuracy { estimate: f64, error: f64 },

    /// A zeros file could not be parsed.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// The zero search could not reconcile its count with the smooth counting term.
    #[error("missed zeros: count check failed near t = {near:.3}")]
    MissedZeros { near: f64 },

    /// A zero set does not reach the requested height.
    #[error("zeros cover t <= {available}, but t = {needed} was requested")]
    Coverage { needed: f64, available: f64 },

    /// Bad parameters for a named check or command.
    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
