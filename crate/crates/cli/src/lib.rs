//! Experiment engine, file formats, and configuration for the spatial
//! compressive sensing toolkit; the `spatial-cs` binary is a thin command
//! layer over this library.

pub mod config;
pub mod experiments;
pub mod io;

use std::fmt;

/// Errors at the command layer, carrying the process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Invalid flags, parameters, or configuration (exit 2).
    Usage(String),
    /// Numeric or domain failure inside a computation (exit 3).
    Numeric(String),
    /// File system or format failure (exit 4).
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Numeric(m) => write!(f, "numeric error: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<spatial_cs_core::Error> for CliError {
    fn from(e: spatial_cs_core::Error) -> Self {
        match e {
            spatial_cs_core::Error::Config(_) | spatial_cs_core::Error::Unsupported(_) => {
                CliError::Usage(e.to_string())
            }
            spatial_cs_core::Error::Domain(_) | spatial_cs_core::Error::Numerical(_) => {
                CliError::Numeric(e.to_string())
            }
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
