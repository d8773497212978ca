//! Instance-based schema matching with nonparametric Bayesian field models.
//!
//! Each field (table column) is summarized by the sufficient statistics of
//! a string model: the discrete model (a Chinese Restaurant Process over
//! whole values), the positional model (per-position character counts) or
//! the apositional model (pooled character counts). Two fields are compared
//! by asking whether one model explains both better than two separate
//! models, which needs only the cached statistics of each field and their
//! sum.
//!
//! The numeric code is generic over [`Scalar`] (`f32` or `f64`); the type
//! aliases at the crate root fix it to `f64`, with `F32` variants for the
//! single-precision build.
//!
//! ```
//! use fieldmatch::{matcher::score_pair, models::ModelClass, ingest::FieldColumn, Alphabet};
//!
//! let alphabet = Alphabet::default();
//! let a = FieldColumn::normalized("zip", ["90210", "10001", "60614", "94110"], &alphabet);
//! let b = FieldColumn::normalized("postcode", ["30301", "02139", "73301", "98101"], &alphabet);
//! let p: f64 = score_pair(&a, &b, ModelClass::Positional, &alphabet, &Default::default(), Default::default()).unwrap();
//! assert!(p > 0.5);
//! ```

pub mod alphabet;
pub mod baselines;
pub mod crp;
pub mod error;
pub mod eval;
pub mod ingest;
pub mod matcher;
pub mod mle;
pub mod models;
pub mod report;
pub mod scalar;
pub mod scorer;

pub use alphabet::Alphabet;
pub use error::{Error, Result};
pub use ingest::{FieldColumn, Table};
pub use models::{ApositionalStats, DiscreteStats, FieldModel, ModelClass, PositionalStats};
pub use scalar::Scalar;
pub use scorer::Scorer;

pub type Priors = crp::ModelPriors<f64>;
pub type MatchPrior = matcher::MatchHypothesisPrior<f64>;
pub type MatchConfig = matcher::MatchConfig<f64>;
pub type MatchMatrix = matcher::MatchMatrix<f64>;
pub type ProfiledTable = matcher::ProfiledTable<f64>;
pub type ExperimentConfig = eval::ExperimentConfig<f64>;
pub type ExperimentReport = eval::ExperimentReport<f64>;
pub type SizeSweep = eval::SizeSweep<f64>;
pub type RocReport = eval::RocReport<f64>;

pub type PriorsF32 = crp::ModelPriors<f32>;
pub type MatchConfigF32 = matcher::MatchConfig<f32>;
pub type MatchMatrixF32 = matcher::MatchMatrix<f32>;
pub type ExperimentReportF32 = eval::ExperimentReport<f32>;
