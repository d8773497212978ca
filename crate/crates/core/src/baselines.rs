//! Instance-based similarity scores from the schema-matching literature:
//! two set scores (Jaccard, PMI) and three multiset scores (entropy
//! difference, unsorted and sorted Euclidean distance on value proportions).

use crate::crp::ValueMultiset;
use crate::models::DiscreteStats;
use crate::scalar::Scalar;
use crate::scorer::Scorer;
use std::cmp::Ordering;
use std::collections::BTreeMap;

/// Value proportions of one field.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldDistribution<T> {
    proportions: BTreeMap<String, T>,
    sorted: Vec<T>,
    observations: u64,
    entropy: T,
}

impl<T: Scalar> FieldDistribution<T> {
    pub fn from_multiset(values: &ValueMultiset) -> Self {
        let n = values.total();
        let total = T::count(n);
        let proportions: BTreeMap<String, T> = values
            .iter()
            .map(|(v, m)| (v.to_string(), T::count(m) / total))
            .collect();
        let mut sorted: Vec<T> = proportions.values().copied().collect();
        sorted.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
        let entropy = -proportions
            .values()
            .map(|&p| p * p.ln())
            .fold(T::zero(), |a, b| a + b);
        FieldDistribution {
            proportions,
            sorted,
            observations: n,
            entropy,
        }
    }

    pub fn from_values<I: IntoIterator<Item = S>, S: AsRef<str>>(values: I) -> Self {
        Self::from_multiset(&values.into_iter().collect())
    }

    pub fn from_stats(stats: &DiscreteStats) -> Self {
        Self::from_multiset(&stats.values)
    }

    /// Proportion of each distinct value.
    pub fn proportions(&self) -> &BTreeMap<String, T> {
        &self.proportions
    }

    /// Proportions in nonincreasing order.
    pub fn sorted(&self) -> &[T] {
        &self.sorted
    }

    /// Number of distinct values, |C|.
    pub fn distinct(&self) -> usize {
        self.proportions.len()
    }

    /// Observations including repetitions.
    pub fn observations(&self) -> u64 {
        self.observations
    }

    /// −Σ p ln p
    pub fn entropy(&self) -> T {
        self.entropy
    }
}

/// Walks both sorted proportion maps in step, calling `f` with the pair of
/// proportions (zero when absent) for every value in the union.
fn merge_join<T: Scalar>(a: &FieldDistribution<T>, b: &FieldDistribution<T>, mut f: impl FnMut(T, T)) {
    let mut ia = a.proportions.iter().peekable();
    let mut ib = b.proportions.iter().peekable();
    loop {
        match (ia.peek(), ib.peek()) {
            (Some((ka, &pa)), Some((kb, &pb))) => match ka.cmp(kb) {
                Ordering::Less => {
                    f(pa, T::zero());
                    ia.next();
                }
                Ordering::Greater => {
                    f(T::zero(), pb);
                    ib.next();
                }
                Ordering::Equal => {
                    f(pa, pb);
                    ia.next();
                    ib.next();
                }
            },
            (Some((_, &pa)), None) => {
                f(pa, T::zero());
                ia.next();
            }
            (None, Some((_, &pb))) => {
                f(T::zero(), pb);
                ib.next();
            }
            (None, None) => break,
        }
    }
}

/// |C ∩ D|
pub fn shared_values<T: Scalar>(a: &FieldDistribution<T>, b: &FieldDistribution<T>) -> usize {
    let mut shared = 0;
    merge_join(a, b, |p, q| {
        if p > T::zero() && q > T::zero() {
            shared += 1;
        }
    });
    shared
}

/// |C ∩ D| / |C ∪ D|; 0 when both fields are empty.
pub fn jaccard<T: Scalar>(a: &FieldDistribution<T>, b: &FieldDistribution<T>) -> T {
    let shared = shared_values(a, b);
    let union = a.distinct() + b.distinct() - shared;
    if union == 0 {
        return T::zero();
    }
    T::count(shared as u64) / T::count(union as u64)
}

/// log₂(|C ∩ D|·N / (|C|·|D|)) with N the observations of both fields
/// together; −∞ when the fields share no value.
pub fn pmi<T: Scalar>(a: &FieldDistribution<T>, b: &FieldDistribution<T>) -> T {
    pmi_counts(
        shared_values(a, b),
        a.distinct(),
        b.distinct(),
        a.observations() + b.observations(),
    )
}

/// PMI from raw counts.
pub fn pmi_counts<T: Scalar>(shared: usize, c: usize, d: usize, n: u64) -> T {
    if shared == 0 || c == 0 || d == 0 {
        return T::neg_infinity();
    }
    let ratio = T::count(shared as u64) * T::count(n) / (T::count(c as u64) * T::count(d as u64));
    ratio.log2()
}

/// |H(p) − H(q)| in nats.
pub fn entropy_difference<T: Scalar>(a: &FieldDistribution<T>, b: &FieldDistribution<T>) -> T {
    (a.entropy() - b.entropy()).abs()
}

/// Σ (pᵢ − qᵢ)² over the union of values.
pub fn unsorted_euclidean<T: Scalar>(a: &FieldDistribution<T>, b: &FieldDistribution<T>) -> T {
    let mut acc = T::zero();
    merge_join(a, b, |p, q| acc = acc + (p - q) * (p - q));
    acc
}

/// Σ (p′ᵢ − q′ᵢ)² over the independently sorted, zero-padded proportions.
pub fn sorted_euclidean<T: Scalar>(a: &FieldDistribution<T>, b: &FieldDistribution<T>) -> T {
    let (long, short) = if a.sorted.len() >= b.sorted.len() {
        (&a.sorted, &b.sorted)
    } else {
        (&b.sorted, &a.sorted)
    };
    long.iter()
        .enumerate()
        .map(|(i, &p)| {
            let q = short.get(i).copied().unwrap_or(T::zero());
            (p - q) * (p - q)
        })
        .fold(T::zero(), |x, y| x + y)
}

/// Raw baseline score, or `None` for model-based scorers.
pub fn raw_score<T: Scalar>(scorer: Scorer, a: &FieldDistribution<T>, b: &FieldDistribution<T>) -> Option<T> {
    Some(match scorer {
        Scorer::Jaccard => jaccard(a, b),
        Scorer::Pmi => pmi(a, b),
        Scorer::EntropyDiff => entropy_difference(a, b),
        Scorer::EuclidUnsorted => unsorted_euclidean(a, b),
        Scorer::EuclidSorted => sorted_euclidean(a, b),
        Scorer::Bayesian(_) | Scorer::Mle(_) => return None,
    })
}

/// Maps a raw score to higher-is-more-alike by negating distances. Apply
/// once, at the point where scores enter a ranking.
pub fn orient<T: Scalar>(score: T, scorer: Scorer) -> T {
    if scorer.is_distance() {
        -score
    } else {
        score
    }
}
