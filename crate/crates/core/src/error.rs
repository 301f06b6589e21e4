use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report.
///
/// Variants are grouped by [`ErrorKind`], which the CLI and the C ABI map
/// onto exit codes and status codes respectively.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, got {actual} ({context})")]
    Dimension {
        expected: usize,
        actual: usize,
        context: &'static str,
    },

    #[error("eigendecomposition did not converge at index {index} after {iterations} iterations (off-diagonal residual {residual:e})")]
    NoConvergence {
        index: usize,
        iterations: usize,
        residual: f64,
    },

    #[error("numerical check failed: {0}")]
    Numerical(String),

    #[error("spectrum is not conjugate-symmetric: imaginary residue {residue:e} of output norm exceeds {limit:e}")]
    SymmetryViolation { residue: f64, limit: f64 },

    #[error("unsupported WAV encoding in {path}: {reason}")]
    UnsupportedWav { path: PathBuf, reason: String },

    #[error("malformed WAV file {path} at byte {offset}: {reason}")]
    MalformedWav {
        path: PathBuf,
        offset: u64,
        reason: String,
    },

    #[error("{path}: requested samples {offset}..{end} but only {available} are available")]
    ShortFile {
        path: PathBuf,
        offset: usize,
        end: usize,
        available: usize,
    },

    #[error("{path}:{line}: not a number: {text:?}")]
    BadCsvValue {
        path: PathBuf,
        line: usize,
        text: String,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    /// Invalid parameters or configuration.
    Config,
    /// Files that cannot be read, written or parsed.
    Io,
    /// Solver failures and violated numerical contracts.
    Numerical,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Domain(_) | Error::Dimension { .. } | Error::Config(_) => ErrorKind::Config,
            Error::NoConvergence { .. } | Error::Numerical(_) | Error::SymmetryViolation { .. } => {
                ErrorKind::Numerical
            }
            Error::UnsupportedWav { .. }
            | Error::MalformedWav { .. }
            | Error::ShortFile { .. }
            | Error::BadCsvValue { .. }
            | Error::Io { .. } => ErrorKind::Io,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
