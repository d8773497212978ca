//! Maximum-likelihood scoring of the same sufficient statistics: every event
//! gets its empirical frequency in the fitted data, and string lengths follow
//! a Poisson whose mean is the observed mean length.

use crate::crp::log_poisson;
use crate::error::{Error, Result};
use crate::models::{ApositionalStats, DiscreteStats, FieldModel, PositionalStats};
use crate::scalar::Scalar;

/// Σ c·ln(c / total) over nonzero counts.
fn plug_in<T: Scalar>(counts: impl Iterator<Item = u64>, total: u64) -> T {
    let ln_total = T::count(total).ln();
    counts
        .filter(|&c| c > 0)
        .map(|c| T::count(c) * (T::count(c).ln() - ln_total))
        .fold(T::zero(), |a, b| a + b)
}

fn mean_length<T: Scalar>(length_counts: &std::collections::BTreeMap<u64, u64>) -> T {
    let n: u64 = length_counts.values().sum();
    let chars: u64 = length_counts.iter().map(|(&l, &c)| l * c).sum();
    T::count(chars) / T::count(n)
}

fn length_part<T: Scalar>(length_counts: &std::collections::BTreeMap<u64, u64>) -> T {
    let lambda = mean_length::<T>(length_counts);
    length_counts
        .iter()
        .map(|(&l, &c)| T::count(c) * log_poisson(l, lambda))
        .fold(T::zero(), |a, b| a + b)
}

/// Log likelihood of the fitted data under its own maximum-likelihood
/// parameters. Empty statistics score 0.
pub trait MleScore: FieldModel {
    fn mle_log_joint<T: Scalar>(&self) -> T;

    /// Plug-in log probability of one more value. Values with an unseen
    /// component get −∞; no smoothing is applied.
    fn mle_log_predictive<T: Scalar>(&self, value: &str) -> T;

    /// Plug-in analogue of [`FieldModel::log_evidence`]; never positive.
    fn mle_log_evidence<T: Scalar>(&self, other: &Self) -> Result<T> {
        let merged = self.merge(other)?;
        Ok(merged.mle_log_joint::<T>() - (self.mle_log_joint::<T>() + other.mle_log_joint::<T>()))
    }
}

/// m ln m, with 0 ln 0 = 0.
fn m_ln_m<T: Scalar>(m: u64) -> T {
    if m == 0 {
        T::zero()
    } else {
        let m = T::count(m);
        m * m.ln()
    }
}

impl MleScore for DiscreteStats {
    fn mle_log_joint<T: Scalar>(&self) -> T {
        plug_in(self.values.iter().map(|(_, m)| m), self.values.total())
    }

    fn mle_log_predictive<T: Scalar>(&self, value: &str) -> T {
        let m = self.values.count(value);
        if m == 0 {
            return T::neg_infinity();
        }
        (T::count(m) / T::count(self.values.total())).ln()
    }

    /// The joint is Σ m ln m − n ln n, so values present in one field only
    /// cancel and only shared values are visited.
    fn mle_log_evidence<T: Scalar>(&self, other: &Self) -> Result<T> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        let (small, large) = if self.values.distinct() <= other.values.distinct() {
            (&self.values, &other.values)
        } else {
            (&other.values, &self.values)
        };
        let shared = small
            .iter()
            .filter_map(|(x, m)| {
                let k = large.count(x);
                (k > 0).then(|| m_ln_m::<T>(m + k) - (m_ln_m::<T>(m) + m_ln_m::<T>(k)))
            })
            .fold(T::zero(), |a, b| a + b);
        let (nx, ny) = (self.values.total(), other.values.total());
        Ok(shared - (m_ln_m::<T>(nx + ny) - (m_ln_m::<T>(nx) + m_ln_m::<T>(ny))))
    }
}

impl MleScore for PositionalStats {
    fn mle_log_joint<T: Scalar>(&self) -> T {
        if self.observations() == 0 {
            return T::zero();
        }
        let chars = self
            .char_counts
            .iter()
            .enumerate()
            .map(|(j, m)| plug_in::<T>(m.values().copied(), self.at_least(j + 1)))
            .fold(T::zero(), |a, b| a + b);
        length_part::<T>(&self.length_counts) + chars
    }

    fn mle_log_predictive<T: Scalar>(&self, value: &str) -> T {
        if self.observations() == 0 {
            return T::neg_infinity();
        }
        let mut acc = T::zero();
        let mut len = 0u64;
        for (j, c) in value.chars().enumerate() {
            let at = self.at_least(j + 1);
            if at == 0 {
                return T::neg_infinity();
            }
            acc = acc + (T::count(self.char_count(j + 1, c)) / T::count(at)).ln();
            len += 1;
        }
        acc + log_poisson(len, mean_length::<T>(&self.length_counts))
    }
}

impl MleScore for ApositionalStats {
    fn mle_log_joint<T: Scalar>(&self) -> T {
        if self.observations() == 0 {
            return T::zero();
        }
        length_part::<T>(&self.length_counts) + plug_in(self.char_counts.values().copied(), self.total_chars())
    }

    fn mle_log_predictive<T: Scalar>(&self, value: &str) -> T {
        if self.observations() == 0 {
            return T::neg_infinity();
        }
        let total = self.total_chars();
        let mut acc = T::zero();
        let mut len = 0u64;
        for c in value.chars() {
            acc = acc + (T::count(self.char_count(c)) / T::count(total)).ln();
            len += 1;
        }
        acc + log_poisson(len, mean_length::<T>(&self.length_counts))
    }
}
