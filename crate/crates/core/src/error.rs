use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite value produced by {0}")]
    NonFinite(String),

    #[error("integral diverges: {0}")]
    Divergent(String),

    #[error("quadrature under-resolved: {0}")]
    UnderResolved(String),

    #[error("point outside the domain: {0}")]
    OutsideDomain(String),

    #[error("pole: {0}")]
    Pole(String),

    #[error("logarithm branch is ambiguous: {0}")]
    Branch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
