//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("division by zero or non-invertible leading term: {0}")]
    NotInvertible(String),

    #[error("series did not converge after {terms} terms (achieved bound {bound:e})")]
    NotConverged { terms: usize, bound: f64 },

    #[error("inexact division at index {0}")]
    InexactDivision(usize),

    #[error("check failed: {0}")]
    CheckFailed(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
