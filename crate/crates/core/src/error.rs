//! Crate-wide error type.

use alloc::string::String;
use core::fmt;

/// Errors produced by configuration validation and numerical routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Invalid configuration or parameters (bad dimensions, malformed
    /// method parameters, inconsistent inputs).
    Config(String),
    /// Argument outside the mathematical domain of an operation.
    Domain(String),
    /// Input is structurally valid but not supported by the operation
    /// (e.g. a distribution without the required closed form).
    Unsupported(String),
    /// A numerical routine failed to produce a usable result
    /// (divergence, loss of positive definiteness, ...).
    Numerical(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Config(msg) => write!(f, "configuration error: {msg}"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Unsupported(msg) => write!(f, "unsupported: {msg}"),
            Error::Numerical(msg) => write!(f, "numerical error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
