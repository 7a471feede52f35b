use thiserror::Error;

/// Error type shared by every module in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Incompatible matrix or vector shapes.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// Invalid input (out-of-range digit, malformed permutation, bad file).
    #[error("invalid input: {0}")]
    Invalid(String),

    /// An exhaustive enumeration would exceed its documented cap.
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    /// Two computation routes that must agree exactly did not.
    /// This always indicates a bug, never bad input.
    #[error("internal consistency check failed: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
