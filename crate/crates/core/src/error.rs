//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("column {name:?} not found in header")]
    MissingColumn { name: String },

    #[error("duplicate column name {name:?} in header")]
    DuplicateColumn { name: String },

    #[error("row {row}: cannot parse column {column:?} value {value:?} as a number")]
    ParseCell {
        row: usize,
        column: String,
        value: String,
    },

    #[error("row {row}: missing value in column {column:?}")]
    MissingValue { row: usize, column: String },

    #[error("row {row}: label {value} outside 0..{k}")]
    LabelOutOfRange { row: usize, value: i64, k: usize },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("class {class} has {count} member(s), too few to synthesize from")]
    ClassTooSmall { class: usize, count: usize },

    #[error("class {class}: target {target} exceeds current count {count}")]
    TargetExceedsCount {
        class: usize,
        target: usize,
        count: usize,
    },

    #[error("class {class} has weight {weight} but receives 0 samples; increase n_samples")]
    InfeasibleApportionment { class: usize, weight: f64 },

    #[error("ensemble has no members")]
    EmptyEnsemble,

    #[error("all weight-update numerators are zero")]
    DegenerateWeights,

    #[error("unsupported model format version {found} (expected {expected})")]
    ModelVersion { found: u32, expected: u32 },

    #[error("malformed model file: {0}")]
    ModelSchema(String),

    #[error("input schema mismatch; missing columns: [{}], unexpected columns: [{}]",
            missing.join(", "), extra.join(", "))]
    SchemaMismatch {
        missing: Vec<String>,
        extra: Vec<String>,
    },
}
