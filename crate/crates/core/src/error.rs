use thiserror::Error;

/// Errors raised by the engine. Mathematical mismatches are not errors; they are
/// reported as values (residuals, certificates, verdicts).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("series is not a unit: constant term is zero")]
    NotAUnit,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("truncation order mismatch: {left} vs {right}")]
    OrderMismatch { left: i64, right: i64 },

    #[error("invariant violation: {0}")]
    Invariant(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
