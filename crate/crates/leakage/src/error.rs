//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification used by callers that need to map failures onto
/// process exit codes or retry policies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Malformed or inconsistent input (files, flags, dimensions, symbols).
    Input,
    /// Structurally valid request that exceeds a configured resource cap.
    Resource,
    /// An internal numerical invariant failed; results would be untrustworthy.
    Invariant,
}

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input text (matrix, channel or observation files).
    #[error("{0}")]
    Parse(String),

    /// Structurally invalid request: mismatched dimensions, out-of-range
    /// indices, probabilities outside [0, 1], and similar.
    #[error("{0}")]
    InvalidInput(String),

    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    /// Observation symbol not present in the channel output alphabet.
    /// `position` is 1-based.
    #[error("unknown output symbol {symbol:?} at position {position}")]
    UnknownSymbol { symbol: String, position: usize },

    /// Observed symbol has zero probability under both channel inputs, so no
    /// posterior is defined.
    #[error("output symbol {symbol:?} at position {position} has W(z|0) = W(z|1) = 0")]
    UnreachableSymbol { symbol: String, position: usize },

    /// The posterior table would need 2^m entries with m over the cap.
    #[error("message length m = {m} exceeds the table cap of {cap} (the posterior has 2^m entries)")]
    MessageLengthCap { m: usize, cap: usize },

    /// Exhaustive reference computation refused because the state space is
    /// too large to enumerate.
    #[error("instance too large for exhaustive enumeration: {0}")]
    TooLarge(String),

    /// The recursion lost probability mass beyond what rounding can explain.
    #[error("posterior mass drifted to {sum} (|sum - 1| = {drift:e})")]
    NormalizationDrift { sum: f64, drift: f64 },
}

impl Error {
    #[must_use]
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Parse(_)
            | Error::InvalidInput(_)
            | Error::Io { .. }
            | Error::UnknownSymbol { .. }
            | Error::UnreachableSymbol { .. } => ErrorClass::Input,
            Error::MessageLengthCap { .. } | Error::TooLarge(_) => ErrorClass::Resource,
            Error::NormalizationDrift { .. } => ErrorClass::Invariant,
        }
    }
}
