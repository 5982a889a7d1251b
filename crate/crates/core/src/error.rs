//! Crate error type.
//!
//! Recoverable validation problems (bad parameters, inconsistent configs)
//! surface as [`CoreError`]; contract violations inside a run (arm index out
//! of range, stepping past the horizon, mismatched checkpoint vectors) panic,
//! since they are caller bugs rather than inputs to negotiate with.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    /// A named field failed validation.
    #[error("invalid {field}: {reason}")]
    Invalid { field: &'static str, reason: String },
}

impl CoreError {
    pub fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        CoreError::Invalid { field, reason: reason.into() }
    }

    /// The offending field name, for callers that map errors onto config keys.
    pub fn field(&self) -> &'static str {
        match self {
            CoreError::Invalid { field, .. } => field,
        }
    }
}
