use super::{check_same_alphabet, FieldModel, ModelClass};
use crate::alphabet::Alphabet;
use crate::crp::{acrp_normalizer, log_acrp_predictive, log_base_prob, log_rising, ModelPriors, ValueMultiset};
use crate::error::Result;
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};

/// Whole-value model: an atomic CRP over distinct strings whose base
/// distribution is the Poisson-length, uniform-character string model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteStats {
    pub alphabet: Alphabet,
    pub values: ValueMultiset,
}

impl FieldModel for DiscreteStats {
    const CLASS: ModelClass = ModelClass::Discrete;

    fn empty(alphabet: &Alphabet) -> Self {
        DiscreteStats {
            alphabet: alphabet.clone(),
            values: ValueMultiset::new(),
        }
    }

    fn observe(&mut self, value: &str) {
        self.values.insert(value);
    }

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn observations(&self) -> u64 {
        self.values.total()
    }

    fn count_parameters(&self) -> usize {
        self.values.distinct()
    }

    fn merge(&self, other: &Self) -> Result<Self> {
        check_same_alphabet(&self.alphabet, &other.alphabet)?;
        let mut out = self.clone();
        out.values.merge(&other.values);
        Ok(out)
    }

    fn log_joint<T: Scalar>(&self, priors: &ModelPriors<T>) -> T {
        // base log-mass is finite for every string, so this is
        // log_acrp_joint without the per-atom check
        let size = self.alphabet.len();
        let ln_alpha = priors.alpha.ln();
        self.values
            .iter()
            .map(|(x, m)| log_rising(ln_alpha + log_base_prob(x, priors.lambda, size), m))
            .fold(acrp_normalizer(priors.alpha, self.values.total()), |a, b| a + b)
    }

    /// Values seen in only one field contribute the same term to the merged
    /// joint and to their own field's joint, so only shared values are
    /// visited. Fields with no shared values get an evidence that depends on
    /// their totals alone, exactly.
    fn log_evidence<T: Scalar>(&self, other: &Self, priors: &ModelPriors<T>) -> Result<T> {
        check_same_alphabet(&self.alphabet, &other.alphabet)?;
        let size = self.alphabet.len();
        let ln_alpha = priors.alpha.ln();
        let (small, large) = if self.values.distinct() <= other.values.distinct() {
            (&self.values, &other.values)
        } else {
            (&other.values, &self.values)
        };
        let shared = small
            .iter()
            .filter_map(|(x, m)| {
                let k = large.count(x);
                (k > 0).then(|| {
                    let ln_eps = ln_alpha + log_base_prob(x, priors.lambda, size);
                    log_rising(ln_eps, m + k) - (log_rising(ln_eps, m) + log_rising(ln_eps, k))
                })
            })
            .fold(T::zero(), |a, b| a + b);
        let (nx, ny) = (self.values.total(), other.values.total());
        let normalizers =
            acrp_normalizer(priors.alpha, nx + ny) - (acrp_normalizer(priors.alpha, nx) + acrp_normalizer(priors.alpha, ny));
        Ok(normalizers + shared)
    }

    fn log_predictive<T: Scalar>(&self, value: &str, priors: &ModelPriors<T>) -> T {
        log_acrp_predictive(
            self.values.count(value),
            self.values.total(),
            priors.alpha,
            log_base_prob(value, priors.lambda, self.alphabet.len()),
        )
    }
}
