//! Log-space evaluation of the atomic Chinese Restaurant Process and of the
//! Poisson-length / uniform-character base distribution used by every model.
//!
//! Nothing here materializes a linear-space probability: with hundreds of
//! thousands of observations the Gamma terms overflow any float format.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Hyperparameters shared by the three model classes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelPriors<T> {
    /// CRP concentration.
    pub alpha: T,
    /// Mean of the Poisson string-length base distribution.
    pub lambda: T,
    /// Symmetric Dirichlet prior on character distributions.
    pub beta: T,
}

impl<T: Scalar> ModelPriors<T> {
    pub fn new(alpha: T, lambda: T, beta: T) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("lambda", lambda), ("beta", beta)] {
            if !(v.is_finite() && v > T::zero()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and positive, got {v}"
                )));
            }
        }
        Ok(ModelPriors { alpha, lambda, beta })
    }
}

impl<T: Scalar> Default for ModelPriors<T> {
    /// α = 3, λ = 4, β = 3.
    fn default() -> Self {
        ModelPriors {
            alpha: T::lit(3.0),
            lambda: T::lit(4.0),
            beta: T::lit(3.0),
        }
    }
}

/// Multiset of distinct values with their multiplicities.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ValueMultiset {
    counts: BTreeMap<String, u64>,
}

impl ValueMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, value: &str) {
        self.insert_n(value, 1);
    }

    pub fn insert_n(&mut self, value: &str, n: u64) {
        if n == 0 {
            return;
        }
        match self.counts.get_mut(value) {
            Some(c) => *c += n,
            None => {
                self.counts.insert(value.to_owned(), n);
            }
        }
    }

    pub fn count(&self, value: &str) -> u64 {
        self.counts.get(value).copied().unwrap_or(0)
    }

    /// Σ mᵢ.
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Number of distinct values.
    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Distinct values in lexicographic order with their counts.
    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn merge(&mut self, other: &ValueMultiset) {
        for (k, v) in other.iter() {
            self.insert_n(k, v);
        }
    }
}

impl<S: AsRef<str>> FromIterator<S> for ValueMultiset {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        let mut m = ValueMultiset::new();
        for v in iter {
            m.insert(v.as_ref());
        }
        m
    }
}

/// Natural log of Γ(x) for x > 0.
pub fn log_gamma<T: Scalar>(x: T) -> Result<T> {
    if x.is_nan() || x <= T::zero() {
        return Err(Error::Domain(x.to_f64_lossy()));
    }
    Ok(ln_gamma_pos(x))
}

// Stirling series coefficients B_{2k} / (2k (2k-1)).
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
];

/// lnΓ for a known-positive argument. Arguments below 10 are shifted up with
/// the recurrence, then the asymptotic series is summed; truncation error is
/// below 1e-17 from 10 upward.
pub(crate) fn ln_gamma_pos<T: Scalar>(x: T) -> T {
    debug_assert!(x > T::zero());
    if x == T::infinity() {
        return x;
    }
    let ten = T::lit(10.0);
    let mut z = x;
    let mut prod = T::one();
    while z < ten {
        prod = prod * z;
        z = z + T::one();
    }
    let inv = z.recip();
    let inv2 = inv * inv;
    let series = STIRLING
        .iter()
        .rev()
        .fold(T::zero(), |acc, &c| acc * inv2 + T::lit(c))
        * inv;
    let half = T::lit(0.5);
    let ln_sqrt_2pi = T::lit(0.918_938_533_204_672_8);
    (z - half) * z.ln() - z + ln_sqrt_2pi + series - prod.ln()
}

/// ln[Γ(ε + m) / Γ(ε)] with ε given by its logarithm, so ε may be far below
/// the smallest representable float.
pub(crate) fn log_rising<T: Scalar>(ln_eps: T, m: u64) -> T {
    if m == 0 {
        return T::zero();
    }
    let eps = ln_eps.exp();
    if eps > T::one() {
        return ln_gamma_pos(eps + T::count(m)) - ln_gamma_pos(eps);
    }
    // Γ(ε + m)/Γ(ε) = ε · Γ(ε + m)/Γ(ε + 1)
    ln_eps + ln_gamma_pos(eps + T::count(m)) - ln_gamma_pos(eps + T::one())
}

/// log Pois_λ(ℓ). λ = 0 is the point mass at zero.
pub fn log_poisson<T: Scalar>(len: u64, lambda: T) -> T {
    if lambda == T::zero() {
        return if len == 0 { T::zero() } else { T::neg_infinity() };
    }
    let l = T::count(len);
    if len == 0 {
        return -lambda;
    }
    l * lambda.ln() - lambda - ln_gamma_pos(l + T::one())
}

/// log H(s) for a string of `len` characters: Poisson length, then uniformly
/// chosen characters.
pub fn log_base_prob_len<T: Scalar>(len: u64, lambda: T, alphabet_size: usize) -> T {
    log_poisson(len, lambda) - T::count(len) * T::count(alphabet_size as u64).ln()
}

/// log H(s): the Poisson-length, uniform-character string distribution.
pub fn log_base_prob<T: Scalar>(s: &str, lambda: T, alphabet_size: usize) -> T {
    log_base_prob_len(s.chars().count() as u64, lambda, alphabet_size)
}

/// Log joint probability of a multiset under an atomic CRP with
/// concentration `alpha` and base log-mass `log_h`:
///
/// ```text
/// Γ(α) / Γ(α + Σmᵢ) · Πᵢ Γ(αH(xᵢ) + mᵢ) / Γ(αH(xᵢ))
/// ```
///
/// Fails if `log_h` is not finite for some value (the base must give every
/// atom positive mass).
pub fn log_acrp_joint<T, F>(multiset: &ValueMultiset, alpha: T, log_h: F) -> Result<T>
where
    T: Scalar,
    F: Fn(&str) -> T,
{
    if !(alpha.is_finite() && alpha > T::zero()) {
        return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
    }
    let ln_alpha = alpha.ln();
    let mut acc = T::zero();
    for (x, m) in multiset.iter() {
        let lh = log_h(x);
        if !lh.is_finite() {
            return Err(Error::NonFinite("base log-probability"));
        }
        acc = acc + log_rising(ln_alpha + lh, m);
    }
    Ok(acc + acrp_normalizer(alpha, multiset.total()))
}

/// ln Γ(α) − ln Γ(α + n).
pub(crate) fn acrp_normalizer<T: Scalar>(alpha: T, n: u64) -> T {
    if n == 0 {
        return T::zero();
    }
    ln_gamma_pos(alpha) - ln_gamma_pos(alpha + T::count(n))
}

/// Log predictive probability that the next draw is an atom already seen
/// `count` times out of `total`, with base log-mass `log_h`:
/// (m + αH) / (n + α).
pub fn log_acrp_predictive<T: Scalar>(count: u64, total: u64, alpha: T, log_h: T) -> T {
    let numer = if count == 0 {
        alpha.ln() + log_h
    } else {
        (T::count(count) + alpha * log_h.exp()).ln()
    };
    numer - (T::count(total) + alpha).ln()
}
