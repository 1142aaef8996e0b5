//! evalxai: a harness for evaluating the reliability and consistency of
//! rule-based local explanations for binary classifiers on tabular data.
//!
//! The crate covers the full pipeline: dataset ingestion and preprocessing
//! ([`data`]), probabilistic classifiers with cross-validation and
//! hyperparameter search ([`models`]), rule-based explanations with a local
//! surrogate, an exact linear oracle, and a JSON exchange format
//! ([`explain`]), simulated-instance generation in the risk-decreasing or
//! risk-increasing direction ([`simulate`]), the six reliability metrics
//! plus the multi-run statistical consistency protocol ([`metrics`]), and
//! experiment orchestration with deterministic seeding and report emission
//! ([`harness`]).

pub mod data;
pub mod error;
pub mod explain;
pub mod harness;
pub mod metrics;
pub mod models;
pub(crate) mod numeric;
pub mod simulate;

pub use error::{Error, Result};
