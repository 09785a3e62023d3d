//! CLI-side errors and their mapping onto exit codes.
//!
//! Exit codes partition outcomes: 0 pass, 1 usage or I/O, 2 certificate
//! failure, 3 degenerate. Library errors are usage-class (bad inputs,
//! broken evaluations) except [`metric_forge_core::Error::Certificate`],
//! which records a numeric guarantee being violated and maps to 2.

use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Core(#[from] metric_forge_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(metric_forge_core::Error::Certificate { .. }) => 2,
            _ => 1,
        }
    }

    /// Stable machine-readable tag for the JSON error object.
    pub fn kind(&self) -> &'static str {
        use metric_forge_core::Error as E;
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::Parse(_) => "parse",
            CliError::Core(e) => match e {
                E::InsufficientData { .. } => "insufficient-data",
                E::DimensionMismatch { .. } => "dimension-mismatch",
                E::DuplicatePoint { .. } => "duplicate-point",
                E::InvalidMeasure(_) => "invalid-measure",
                E::NonFinite { .. } => "non-finite",
                E::InvalidParameter(_) => "invalid-parameter",
                E::Unsupported(_) => "unsupported",
                E::BudgetExceeded { .. } => "budget-exceeded",
                E::Certificate { .. } => "certificate",
                E::OddArity(_) => "odd-arity",
                E::AsymmetricKernel { .. } => "asymmetric-kernel",
                E::NoConvergence { .. } => "no-convergence",
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}
