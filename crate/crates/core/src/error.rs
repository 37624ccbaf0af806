//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument fell outside the mathematical domain of an operation.
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    /// A state or spectrum violates a physical constraint (Heisenberg bound,
    /// positivity, stability).
    #[error("unphysical input to {op}: {msg}")]
    Unphysical { op: &'static str, msg: String },

    /// A numerical procedure failed to converge or lost accuracy.
    #[error("numerical failure in {op}: {msg}")]
    Numerical { op: &'static str, msg: String },
}

impl Error {
    pub fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain { op, msg: msg.into() }
    }

    pub fn unphysical(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Unphysical { op, msg: msg.into() }
    }

    pub fn numerical(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Numerical { op, msg: msg.into() }
    }
}
