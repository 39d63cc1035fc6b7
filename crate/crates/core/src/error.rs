use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid tour: {0}")]
    InvalidTour(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid size: {0}")]
    InvalidSize(String),

    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("instance files not found in {}: {}", dir.display(), names.join(", "))]
    NotFound { dir: PathBuf, names: Vec<String> },

    #[error("invalid prefix: {0}")]
    InvalidPrefix(String),

    #[error("invalid k={k} for an instance with n={n}")]
    InvalidK { k: usize, n: usize },

    #[error("{count} prefixes exceed the guard limit of {limit}; raise the prefix limit explicitly to run anyway")]
    PrefixLimit { count: u128, limit: u64 },

    #[error("n={n} exceeds the {method} size cap of {cap}")]
    SizeRefused {
        method: &'static str,
        n: usize,
        cap: usize,
    },

    #[error("vertex {vertex} has degree {degree} in the spanning tree and no equal-weight swap reduces it to 5")]
    DegreeViolation { vertex: usize, degree: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid optimum {0}: must be positive")]
    InvalidOptimum(f64),

    #[error("time budget exhausted")]
    BudgetExceeded,

    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
