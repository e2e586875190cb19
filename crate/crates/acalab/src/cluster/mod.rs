//! Clustering through ring dynamics: encode objects as configurations,
//! merge clusters level by level along communication classes, and score the
//! final labeling with standard validity indices.

pub mod encoding;
pub mod indices;
pub mod pipeline;

pub use encoding::{
    build_encoding, encode, load_csv, load_csv_from_reader, AttributeEncoding, AttributeKind,
    Dataset, EncodedDataset, EncodedObject, EncodingSpec,
};
pub use indices::{validity_indices, validity_indices_raw, ValidityReport, DEGENERATE_SENTINEL};
pub use pipeline::{
    cluster_level, iterative_cluster, ClusterLevel, CANDIDATE_RULES, CANDIDATE_RULE_GROUPS,
};
