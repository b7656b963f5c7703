//! Metric evaluation: adapter scoring, rank correlation, perturbations and
//! sensitivity reports.

pub mod conformance;
pub mod perturb;
pub mod scorer;
pub mod sensitivity;
pub mod stats;

use thiserror::Error;

pub use conformance::{check_adapter, ConformanceReport};
pub use perturb::{perturb, PerturbOptions, Perturbation, PerturbationKind, PerturbedItem};
pub use scorer::{builtin_scorer, score_pairs, ExactMatch, FnScorer, JaccardScorer, ProcessScorer, Scorer};
pub use sensitivity::{
    aggregate, collect_sensitivity, evaluate_testset, sensitivity, write_sensitivity_csv, CorpusItem,
    SensitivityCell, SensitivityConfig, SensitivityData, SensitivityReport,
};
pub use stats::spearman;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("adapter failure: {0}")]
    Adapter(String),
    #[error("{failed} of {total} items failed to score (first: {first})")]
    TooManyErrors { failed: usize, total: usize, first: String },
    #[error("perturbation failed: {0}")]
    PerturbationFailed(String),
}
