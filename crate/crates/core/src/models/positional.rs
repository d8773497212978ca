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

/// Length CRP plus one Dirichlet-multinomial character distribution per
/// position.
///
/// `char_counts[j - 1]` holds c_{j,a} for the 1-based position j, so
/// `char_counts.len()` is the longest observed length. The per-position
/// totals n_{≥j} are always derived from `length_counts`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositionalStats {
    pub alphabet: Alphabet,
    pub length_counts: BTreeMap<u64, u64>,
    pub char_counts: Vec<BTreeMap<char, u64>>,
}

impl PositionalStats {
    /// Number of strings with at least `position` characters (1-based).
    pub fn at_least(&self, position: usize) -> u64 {
        self.length_counts.range(position as u64..).map(|(_, &n)| n).sum()
    }

    pub fn max_length(&self) -> usize {
        self.char_counts.len()
    }

    /// c_{j,a}
    pub fn char_count(&self, position: usize, c: char) -> u64 {
        position
            .checked_sub(1)
            .and_then(|j| self.char_counts.get(j))
            .and_then(|m| m.get(&c).copied())
            .unwrap_or(0)
    }

    /// Checks that every position's counts add up to n_{≥j}.
    pub fn validate(&self) -> Result<()> {
        let longest = self.length_counts.keys().next_back().copied().unwrap_or(0) as usize;
        if longest != self.char_counts.len() {
            return Err(Error::InvalidParameter(format!(
                "longest length {longest} but {} positions",
                self.char_counts.len()
            )));
        }
        for (j, m) in self.char_counts.iter().enumerate() {
            let sum: u64 = m.values().sum();
            if sum != self.at_least(j + 1) {
                return Err(Error::InvalidParameter(format!(
                    "position {} counts sum to {sum}, expected {}",
                    j + 1,
                    self.at_least(j + 1)
                )));
            }
        }
        Ok(())
    }

    /// Parses the JSON layout and checks the count invariants.
    pub fn from_json(text: &str) -> Result<Self> {
        let s: Self = serde_json::from_str(text)?;
        s.validate()?;
        Ok(s)
    }
}

impl FieldModel for PositionalStats {
    const CLASS: ModelClass = ModelClass::Positional;

    fn empty(alphabet: &Alphabet) -> Self {
        PositionalStats {
            alphabet: alphabet.clone(),
            length_counts: BTreeMap::new(),
            char_counts: Vec::new(),
        }
    }

    fn observe(&mut self, value: &str) {
        let mut len = 0usize;
        for (j, c) in value.chars().enumerate() {
            if self.char_counts.len() <= j {
                self.char_counts.push(BTreeMap::new());
            }
            *self.char_counts[j].entry(c).or_default() += 1;
            len = j + 1;
        }
        *self.length_counts.entry(len as u64).or_default() += 1;
    }

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn observations(&self) -> u64 {
        self.length_counts.values().sum()
    }

    fn count_parameters(&self) -> usize {
        self.length_counts.len() + self.char_counts.iter().map(BTreeMap::len).sum::<usize>()
    }

    fn merge(&self, other: &Self) -> Result<Self> {
        check_same_alphabet(&self.alphabet, &other.alphabet)?;
        let mut out = self.clone();
        add_counts(&mut out.length_counts, &other.length_counts);
        if out.char_counts.len() < other.char_counts.len() {
            out.char_counts.resize_with(other.char_counts.len(), BTreeMap::new);
        }
        for (into, from) in out.char_counts.iter_mut().zip(&other.char_counts) {
            add_counts(into, from);
        }
        Ok(out)
    }

    fn log_joint<T: Scalar>(&self, priors: &ModelPriors<T>) -> T {
        let beta = priors.beta;
        let alphabet_beta = T::count(self.alphabet.len() as u64) * beta;
        let lg_beta = ln_gamma_pos(beta);
        let lg_alphabet_beta = ln_gamma_pos(alphabet_beta);
        let mut acc = length_log_joint(&self.length_counts, priors);
        // n_{≥1} = n − n_0, then n_{≥j+1} = n_{≥j} − n_j
        let mut at_least = self.observations() - self.length_counts.get(&0).copied().unwrap_or(0);
        for (j, counts) in self.char_counts.iter().enumerate() {
            acc = acc
                + dirichlet_block(
                    counts.values().copied(),
                    at_least,
                    beta,
                    lg_beta,
                    alphabet_beta,
                    lg_alphabet_beta,
                );
            at_least -= self.length_counts.get(&(j as u64 + 1)).copied().unwrap_or(0);
        }
        acc
    }

    fn log_predictive<T: Scalar>(&self, value: &str, priors: &ModelPriors<T>) -> T {
        let alphabet_beta = T::count(self.alphabet.len() as u64) * priors.beta;
        let mut len = 0u64;
        let mut chars = T::zero();
        for (j, c) in value.chars().enumerate() {
            let position = j + 1;
            let numer = T::count(self.char_count(position, c)) + priors.beta;
            let denom = T::count(self.at_least(position)) + alphabet_beta;
            chars = chars + (numer / denom).ln();
            len += 1;
        }
        length_log_predictive(&self.length_counts, len, priors) + chars
    }
}
