use std::path::PathBuf;

use thiserror::Error;

/// Which permutation-matrix condition a tour matrix violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixDefect {
    /// A city row holds zero or several ones.
    Row(usize),
    /// A visit-position column holds zero or several ones.
    Column(usize),
    /// The total number of ones differs from `n`.
    Count { ones: usize, expected: usize },
    /// An entry other than 0 or 1.
    NonBinary,
}

impl std::fmt::Display for MatrixDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MatrixDefect::Row(r) => write!(f, "row {r} does not hold exactly one 1"),
            MatrixDefect::Column(c) => write!(f, "column {c} does not hold exactly one 1"),
            MatrixDefect::Count { ones, expected } => {
                write!(f, "matrix holds {ones} ones, expected {expected}")
            }
            MatrixDefect::NonBinary => write!(f, "matrix has a non-binary entry"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance size {0}: at least 3 cities are required")]
    InvalidSize(usize),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid distance matrix: {0}")]
    InvalidMatrix(String),

    #[error("degenerate instance: every pairwise distance is zero")]
    DegenerateInstance,

    #[error("invalid tour: {0}")]
    InvalidTour(String),

    #[error("not a permutation matrix: {0}")]
    InvalidTourMatrix(MatrixDefect),

    #[error("exhaustive enumeration over {0} cities is too large (limit is {max})", max = crate::tour::MAX_BRUTE_FORCE_CITIES)]
    EnumerationTooLarge(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid temperature {0}: must be positive")]
    InvalidTemperature(f64),

    #[error("parse error in {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
