use super::{
    add_counts, check_same_alphabet, dirichlet_block, length_log_joint, length_log_predictive, FieldModel,
    ModelClass,
};
use crate::alphabet::Alphabet;
use crate::crp::{ln_gamma_pos, ModelPriors};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Length CRP plus a single character distribution pooled over positions:
/// c′_a = Σ_j c_{j,a}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApositionalStats {
    pub alphabet: Alphabet,
    pub length_counts: BTreeMap<u64, u64>,
    pub char_counts: BTreeMap<char, u64>,
}

impl ApositionalStats {
    /// Total characters observed, Σ_ℓ ℓ·n_ℓ.
    pub fn total_chars(&self) -> u64 {
        self.length_counts.iter().map(|(&l, &n)| l * n).sum()
    }

    pub fn char_count(&self, c: char) -> u64 {
        self.char_counts.get(&c).copied().unwrap_or(0)
    }

    pub fn validate(&self) -> Result<()> {
        let pooled: u64 = self.char_counts.values().sum();
        if pooled != self.total_chars() {
            return Err(Error::InvalidParameter(format!(
                "character counts sum to {pooled}, lengths imply {}",
                self.total_chars()
            )));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: Self = serde_json::from_str(text)?;
        s.validate()?;
        Ok(s)
    }
}

impl FieldModel for ApositionalStats {
    const CLASS: ModelClass = ModelClass::Apositional;

    fn empty(alphabet: &Alphabet) -> Self {
        ApositionalStats {
            alphabet: alphabet.clone(),
            length_counts: BTreeMap::new(),
            char_counts: BTreeMap::new(),
        }
    }

    fn observe(&mut self, value: &str) {
        let mut len = 0u64;
        for c in value.chars() {
            *self.char_counts.entry(c).or_default() += 1;
            len += 1;
        }
        *self.length_counts.entry(len).or_default() += 1;
    }

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn observations(&self) -> u64 {
        self.length_counts.values().sum()
    }

    fn count_parameters(&self) -> usize {
        self.length_counts.len() + self.char_counts.len()
    }

    fn merge(&self, other: &Self) -> Result<Self> {
        check_same_alphabet(&self.alphabet, &other.alphabet)?;
        let mut out = self.clone();
        add_counts(&mut out.length_counts, &other.length_counts);
        add_counts(&mut out.char_counts, &other.char_counts);
        Ok(out)
    }

    fn log_joint<T: Scalar>(&self, priors: &ModelPriors<T>) -> T {
        let alphabet_beta = T::count(self.alphabet.len() as u64) * priors.beta;
        length_log_joint(&self.length_counts, priors)
            + dirichlet_block(
                self.char_counts.values().copied(),
                self.total_chars(),
                priors.beta,
                ln_gamma_pos(priors.beta),
                alphabet_beta,
                ln_gamma_pos(alphabet_beta),
            )
    }

    /// Characters of the new string are drawn one after another from the
    /// pooled distribution, each updating the counts seen by the next.
    fn log_predictive<T: Scalar>(&self, value: &str, priors: &ModelPriors<T>) -> T {
        let alphabet_beta = T::count(self.alphabet.len() as u64) * priors.beta;
        let total = self.total_chars();
        let mut within: BTreeMap<char, u64> = BTreeMap::new();
        let mut chars = T::zero();
        let mut len = 0u64;
        for c in value.chars() {
            let k = within.entry(c).or_default();
            let numer = T::count(self.char_count(c) + *k) + priors.beta;
            let denom = T::count(total + len) + alphabet_beta;
            chars = chars + (numer / denom).ln();
            *k += 1;
            len += 1;
        }
        length_log_predictive(&self.length_counts, len, priors) + chars
    }
}
