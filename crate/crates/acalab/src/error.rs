//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the library.
///
/// `ExactLimitExceeded` is deliberately its own variant so callers (the CLI
/// in particular) can map "the request was fine but too large for exact
/// analysis" to a dedicated exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("ring size {n} out of range: supported sizes are {min}..={max}")]
    BadRingSize { n: usize, min: usize, max: usize },

    #[error("configuration code {code} does not fit in {n} cells")]
    CodeOutOfRange { code: u128, n: usize },

    #[error("configuration string must be '0'/'1' characters, got {0:?}")]
    BadConfigurationString(String),

    #[error("cell index {index} out of range for ring of {n} cells")]
    CellIndexOutOfRange { index: usize, n: usize },

    #[error("alpha must lie strictly between 0 and 1, got {0}")]
    AlphaOutOfRange(f64),

    #[error("selection for ring of {expected} cells applied to ring of {got} cells")]
    SelectionSizeMismatch { expected: usize, got: usize },

    #[error("exact analysis limit exceeded: n = {n} but the limit for {what} is {limit}")]
    ExactLimitExceeded {
        n: usize,
        limit: usize,
        what: &'static str,
    },

    #[error("density must lie in [0, 1], got {0}")]
    DensityOutOfRange(f64),

    #[error("empty dataset: {0}")]
    EmptyDataset(String),

    #[error("csv parse failure: {0}")]
    Csv(#[from] csv::Error),

    #[error("ragged csv row {row}: expected {expected} fields, got {got}")]
    RaggedRow {
        row: usize,
        expected: usize,
        got: usize,
    },

    #[error("qualitative attribute {name:?} has more than two categories: {categories:?}")]
    TooManyCategories {
        name: String,
        categories: Vec<String>,
    },

    #[error("attribute {0:?} is constant; remove it before encoding")]
    ConstantAttribute(String),

    #[error("attribute {name:?} has only {distinct} distinct values; 3-bin encoding needs at least 3")]
    TooFewDistinctValues { name: String, distinct: usize },

    #[error("encoding spec does not cover attribute {0:?}")]
    MissingAttributeEncoding(String),

    #[error("encoding spec error: {0}")]
    BadEncodingSpec(String),

    #[error("target cluster count {k} exceeds the {useful} useful configurations")]
    TooManyClusters { k: usize, useful: usize },

    #[error("cluster count must be at least 1")]
    ZeroClusters,

    #[error("validity indices need at least 2 non-empty clusters, got {0}")]
    TooFewClusters(usize),

    #[error("cluster {0} is empty")]
    EmptyCluster(usize),

    #[error("rule {0} is not in the clustering candidate set")]
    NotACandidateRule(u8),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
