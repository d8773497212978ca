//! Subsample self-match evaluation: ROC/AUC machinery, the experiment
//! driver, data-size sweeps and the synthetic table generator.

mod experiment;
mod roc;
mod synth;

pub use experiment::{
    self_match_experiment, self_match_labels, size_sweep, ExperimentConfig, ExperimentReport, ParameterSummary,
    ScorerResult, SizeSweep, SweepEntry,
};
pub use roc::{auc, roc_curve, LabeledScores, RocPoint, RocReport};
pub use synth::{default_fixture, generate_synthetic_table, DateLayout, FieldFormat, FieldSpec};
