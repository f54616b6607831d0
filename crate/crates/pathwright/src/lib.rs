//! Recursive path analysis over user-specified DAGs: standardized path
//! coefficients estimated from a correlation matrix, Wright trace
//! decomposition of every pairwise correlation into direct, indirect, and
//! spurious components, fit assessment against the observed correlations,
//! backward trimming of non-significant paths, and causal-effect summaries.
//!
//! The `parallel` feature (on by default) runs the data-parallel inner
//! loops (pairwise correlations, per-equation fits, per-pair trace sums,
//! per-row Mahalanobis distances) on rayon; `*_serial` variants keep the
//! sequential reference path available for comparison.

pub mod cli;
pub mod corr;
pub mod dataset;
pub mod effects;
pub mod error;
pub mod estimator;
pub mod fit_trim;
pub mod linalg;
pub mod model;
pub mod report;
pub mod screening;
pub mod stats;
pub mod synth;
pub mod tracer;

pub use corr::{load_correlation, CorrelationMatrix};
pub use dataset::{load_dataset, pearson_matrix, standardize, strength_label, Dataset, Strength};
pub use effects::{effects_table, variance_explained, EffectsTable};
pub use error::{Error, Result};
pub use estimator::{fit_equation, fit_model, FittedModel, PathCoefficients};
pub use fit_trim::{fit_and_trim, fit_report, replay_decomposition, trim_step, FitReport, TrimLog};
pub use model::{parse_model, CausalGraph, StructuralEquation};
pub use screening::{mahalanobis_d2, normality_ks, screen_report, vif_scores, ScreeningReport};
pub use stats::{correlation_pvalue, p_value_from_t};
pub use synth::generate_synthetic;
pub use tracer::{enumerate_traces, implied_oracle, reproduced_correlation, reproduced_matrix};
