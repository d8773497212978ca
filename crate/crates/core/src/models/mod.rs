//! The three string-model classes and their sufficient statistics.
//!
//! Every model is a pair of count tables that can be fitted once per field,
//! added together to represent the union of two fields, and turned into a
//! joint log probability in time proportional to the number of nonzero
//! counts.
//!
//! JSON layout (all maps are sparse, keys are strings in JSON):
//!
//! ```text
//! discrete:    {"alphabet": {...}, "values": {"ABC": 3, ...}}
//! positional:  {"alphabet": {...}, "length_counts": {"5": 12, ...},
//!               "char_counts": [{"A": 4, ...}, ...]}   // index 0 is position 1
//! apositional: {"alphabet": {...}, "length_counts": {...}, "char_counts": {"A": 9, ...}}
//! ```

mod apositional;
mod discrete;
mod patterns;
mod positional;

pub use apositional::ApositionalStats;
pub use discrete::DiscreteStats;
pub use patterns::{
    find_anomalies, inspect_apositional, inspect_positional, Anomaly, AnomalyCause, CharShare,
    LengthShare, PatternReport, PositionPattern, DEFAULT_DOMINANCE_THRESHOLD,
};
pub use positional::PositionalStats;

use crate::alphabet::Alphabet;
use crate::crp::{acrp_normalizer, log_acrp_predictive, log_poisson, log_rising, ModelPriors};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelClass {
    Discrete,
    Positional,
    Apositional,
}

impl ModelClass {
    pub const ALL: [ModelClass; 3] = [ModelClass::Apositional, ModelClass::Positional, ModelClass::Discrete];

    pub fn name(self) -> &'static str {
        match self {
            ModelClass::Discrete => "discrete",
            ModelClass::Positional => "positional",
            ModelClass::Apositional => "apositional",
        }
    }
}

impl fmt::Display for ModelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Sufficient statistics of one model class.
pub trait FieldModel: Clone + Sized {
    const CLASS: ModelClass;

    fn empty(alphabet: &Alphabet) -> Self;

    /// Adds one (normalized) observation.
    fn observe(&mut self, value: &str);

    fn alphabet(&self) -> &Alphabet;

    /// Number of fitted observations.
    fn observations(&self) -> u64;

    /// Number of nonzero count entries.
    fn count_parameters(&self) -> usize;

    /// Pointwise sum of counts; equals fitting on the concatenated data.
    fn merge(&self, other: &Self) -> Result<Self>;

    fn log_joint<T: Scalar>(&self, priors: &ModelPriors<T>) -> T;

    /// Log probability of `value` as the next observation.
    fn log_predictive<T: Scalar>(&self, value: &str, priors: &ModelPriors<T>) -> T;

    /// log P(X+Y) − log P(X) − log P(Y) with `self` as X and `other` as Y:
    /// the log Bayes factor for one shared model over two separate ones.
    fn log_evidence<T: Scalar>(&self, other: &Self, priors: &ModelPriors<T>) -> Result<T> {
        let merged = self.merge(other)?;
        Ok(merged.log_joint(priors) - (self.log_joint(priors) + other.log_joint(priors)))
    }

    fn fit<I, S>(values: I, alphabet: &Alphabet) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut stats = Self::empty(alphabet);
        for v in values {
            stats.observe(v.as_ref());
        }
        stats
    }
}

pub fn fit_discrete<I: IntoIterator<Item = S>, S: AsRef<str>>(values: I, alphabet: &Alphabet) -> DiscreteStats {
    DiscreteStats::fit(values, alphabet)
}

pub fn fit_positional<I: IntoIterator<Item = S>, S: AsRef<str>>(values: I, alphabet: &Alphabet) -> PositionalStats {
    PositionalStats::fit(values, alphabet)
}

pub fn fit_apositional<I: IntoIterator<Item = S>, S: AsRef<str>>(values: I, alphabet: &Alphabet) -> ApositionalStats {
    ApositionalStats::fit(values, alphabet)
}

fn check_same_alphabet(a: &Alphabet, b: &Alphabet) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::AlphabetMismatch)
    }
}

fn add_counts<K: Ord + Clone>(into: &mut BTreeMap<K, u64>, from: &BTreeMap<K, u64>) {
    for (k, &v) in from {
        *into.entry(k.clone()).or_default() += v;
    }
}

/// Length part shared by the positional and apositional models: an atomic
/// CRP over lengths with a Poisson base.
fn length_log_joint<T: Scalar>(length_counts: &BTreeMap<u64, u64>, priors: &ModelPriors<T>) -> T {
    let n: u64 = length_counts.values().sum();
    let ln_alpha = priors.alpha.ln();
    length_counts
        .iter()
        .map(|(&len, &count)| log_rising(ln_alpha + log_poisson(len, priors.lambda), count))
        .fold(acrp_normalizer(priors.alpha, n), |a, b| a + b)
}

fn length_log_predictive<T: Scalar>(length_counts: &BTreeMap<u64, u64>, len: u64, priors: &ModelPriors<T>) -> T {
    let n: u64 = length_counts.values().sum();
    let seen = length_counts.get(&len).copied().unwrap_or(0);
    log_acrp_predictive(seen, n, priors.alpha, log_poisson(len, priors.lambda))
}

/// Σ_a [lnΓ(c_a + β) − lnΓ(β)] + lnΓ(|A|β) − lnΓ(Σc + |A|β) for one
/// Dirichlet-multinomial block.
fn dirichlet_block<T: Scalar>(
    counts: impl Iterator<Item = u64>,
    total: u64,
    beta: T,
    ln_gamma_beta: T,
    alphabet_beta: T,
    ln_gamma_alphabet_beta: T,
) -> T {
    use crate::crp::ln_gamma_pos;
    if total == 0 {
        return T::zero();
    }
    let chars = counts
        .filter(|&c| c > 0)
        .map(|c| ln_gamma_pos(T::count(c) + beta) - ln_gamma_beta)
        .fold(T::zero(), |a, b| a + b);
    chars + ln_gamma_alphabet_beta - ln_gamma_pos(T::count(total) + alphabet_beta)
}
