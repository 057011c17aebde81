use thiserror::Error;

use crate::rational::Rational;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid network configuration: {0}")]
    InvalidConfig(String),

    /// Corner-point formulas need integral replication factors.
    #[error("{param} = {value} is not an integer; evaluate the integer corner points and use memory-sharing (`memory_share`) in between")]
    NonIntegral { param: &'static str, value: Rational },

    #[error("file length in bits is required for this operation (set file_bits)")]
    MissingFileBits,

    #[error("invalid demand vector: {0}")]
    Demand(String),

    #[error("malformed delivery plan: {0}")]
    MalformedPlan(String),

    /// The sampled channel was not generic enough for the requested precoder.
    #[error("channel is not generic: {0}; re-sample the channel with another seed")]
    NonGeneric(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
