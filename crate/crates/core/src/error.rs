//! Error type shared by every module in the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violates its documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// The request exceeds a declared size, memory, or table bound.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    /// The formula is not claimed at these parameters.
    #[error("domain error: {0}")]
    Domain(String),
    /// A lookup lies outside the tabulated range.
    #[error("range error: {0}")]
    Range(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
