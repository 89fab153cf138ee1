use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid focal sets: {0}")]
    InvalidFocal(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("requested {c} clusters but only {n} objects are available")]
    TooManyClusters { c: usize, n: usize },

    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("mass row {row} sums to {sum}, outside the renormalization tolerance")]
    RowSum { row: usize, sum: f64 },

    #[error("negative mass {value} at row {row}, column {col}")]
    NegativeMass { row: usize, col: usize, value: f64 },

    #[error("pignistic transform undefined for object {object}: all mass is on the empty set")]
    UndefinedPignistic { object: usize },

    #[error("singular prototype system at iteration {iteration} (condition number {condition:e})")]
    SingularSystem { iteration: usize, condition: f64 },

    #[error("invalid dissimilarity matrix: {0}")]
    InvalidDissimilarity(String),

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("missing value at row {row}, column `{column}`")]
    MissingValue { row: usize, column: String },

    #[error("cannot parse `{value}` as a number at row {row}, column `{column}`")]
    Parse { row: usize, column: String, value: String },

    #[error("unknown dataset `{name}` (available: {available})")]
    UnknownDataset { name: String, available: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }

    /// True for errors caused by the caller's inputs or configuration rather
    /// than by a numerical failure inside a solver.
    pub fn is_usage(&self) -> bool {
        !matches!(self, Error::SingularSystem { .. } | Error::UndefinedPignistic { .. })
    }
}
