use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Mismatched vector or matrix sizes.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// An LPP situation violates one of the model conditions.
    #[error("invalid situation: {0}")]
    Situation(String),

    /// An argument is outside the operation's domain (negative permits etc.).
    #[error("domain error: {0}")]
    Domain(String),

    /// A bankruptcy problem whose claims do not cover the estate, or with
    /// negative entries.
    #[error("invalid bankruptcy problem: {0}")]
    Bankruptcy(String),

    /// An enumeration would exceed the configured size limit.
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    /// An operation's stated precondition does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// A trade ledger cannot reproduce the requested target.
    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("parse error: {0}")]
    Parse(String),
}
