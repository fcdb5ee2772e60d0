use std::path::PathBuf;

use thiserror::Error;

/// Everything that can go wrong across the toolkit. Variants are grouped by
/// how the CLI maps them to exit codes: configuration problems exit with 2,
/// data and runtime problems with 1.
#[derive(Debug, Error)]
pub enum Error {
    // --- configuration (exit 2) ---
    #[error("config: {0}")]
    Config(String),

    #[error("{what} not found: {path}")]
    MissingPath { what: &'static str, path: PathBuf },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error(
        "pipeline fingerprint mismatch: model carries {expected}, current config yields {found}"
    )]
    PipelineMismatch { expected: String, found: String },

    // --- data and runtime (exit 1) ---
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("duplicate id {id:?} at {path}:{line}")]
    DuplicateId {
        id: String,
        path: PathBuf,
        line: usize,
    },

    #[error("label rows reference ids absent from the corpus: {}", ids.join(", "))]
    OrphanLabels { ids: Vec<String> },

    #[error("stratification failed: {0}")]
    Stratification(String),

    #[error("class {0} is missing from the training data")]
    MissingClass(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("line search failed after {backtracks} backtracks at f = {f}")]
    LineSearchFailed {
        backtracks: u32,
        f: f64,
        // last accepted iterate, so callers can inspect where the search died
        x: Vec<f64>,
    },

    #[error("objective is not finite at the starting point")]
    NonFiniteObjective,

    #[error("metric undefined: {0}")]
    UndefinedMetric(String),

    #[error("replay store has no entry for request hash {0}")]
    ReplayMiss(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{0}")]
    Data(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code contract: 0 success, 1 data/runtime, 2 configuration.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_)
            | Error::MissingPath { .. }
            | Error::Parameter(_)
            | Error::PipelineMismatch { .. } => 2,
            _ => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
