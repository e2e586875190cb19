//! A laboratory for elementary cellular automata on rings under asynchronous
//! update schemes.
//!
//! The crate covers four concerns:
//!
//! - **Rules and configurations** ([`rule`], [`lattice`]): Wolfram-numbered
//!   local rules with min-term activity and symmetry transforms, and ring
//!   configurations packed into machine words.
//! - **Update schemes** ([`scheme`]): synchronous sweeps, single-cell and
//!   adjacent-pair asynchronous updates, and independent per-cell updates,
//!   with both stochastic sampling and exact successor enumeration.
//! - **Exact dynamics** ([`dynamics`], [`theorem`]): strongly connected
//!   component analysis of the full transition graph, convergence and
//!   recurrence labels, communication classes, and a rule-table test for
//!   guaranteed convergence under pair updates, validated against the exact
//!   graph.
//! - **Clustering** ([`cluster`]): a pipeline that encodes tabular data into
//!   configurations, merges clusters along communication classes, and
//!   evaluates labelings with standard validity indices.

pub mod cluster;
pub mod dynamics;
pub mod error;
pub mod lattice;
pub mod rule;
pub mod scheme;
pub mod theorem;

pub use error::{Error, Result};
pub use lattice::{all_codes, Configuration, MAX_RING, MIN_RING};
pub use rule::{minimal_representatives, EcaRule, MinTerm};
pub use scheme::{
    random_configuration, sample_selection, step, successors, successors_with_limit, sync_image,
    trajectory, Selection, TrajectoryRecord, UpdateScheme, DEFAULT_ALPHA_EXACT_LIMIT,
};
pub use dynamics::{
    classify_empirical, classify_exact, classify_exact_with_limit, communication_classes,
    scan_minimal, CommClass, CommClassReport, DynamicsClass, EmpiricalReport, ScanMode, ScanRow,
    TransitionSummary, TrialOutcome, MAX_EXACT_RING,
};
pub use theorem::{
    both_attractor_minimal, convergence_verdict, survey_all_rules, survey_minimal,
    validate_convergence, ConvergenceVerdict, ValidationReport,
};
