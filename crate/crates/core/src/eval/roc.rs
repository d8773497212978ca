use crate::error::{Error, Result};
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// Scored examples with ground-truth labels.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LabeledScores<T> {
    items: Vec<(T, bool)>,
}

impl<T: Scalar> LabeledScores<T> {
    pub fn new() -> Self {
        LabeledScores { items: Vec::new() }
    }

    pub fn push(&mut self, score: T, is_match: bool) {
        self.items.push((score, is_match));
    }

    pub fn positives(&self) -> usize {
        self.items.iter().filter(|(_, m)| *m).count()
    }

    pub fn negatives(&self) -> usize {
        self.items.len() - self.positives()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[(T, bool)] {
        &self.items
    }

    /// Applies `f` to every score, keeping labels.
    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        LabeledScores {
            items: self.items.iter().map(|&(s, m)| (f(s), m)).collect(),
        }
    }

    /// Groups of tied scores in descending score order, as
    /// (score, positives, negatives).
    fn tie_groups(&self) -> Result<Vec<(T, u64, u64)>> {
        if let Some(i) = self.items.iter().position(|(s, _)| s.is_nan()) {
            return Err(Error::NanScore(i));
        }
        if self.positives() == 0 || self.negatives() == 0 {
            return Err(Error::DegenerateLabels);
        }
        let mut sorted = self.items.clone();
        sorted.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(Ordering::Equal));
        let mut groups: Vec<(T, u64, u64)> = Vec::new();
        for (s, m) in sorted {
            match groups.last_mut() {
                Some(g) if g.0 == s => {
                    if m { g.1 += 1 } else { g.2 += 1 }
                }
                _ => groups.push((s, m as u64, !m as u64)),
            }
        }
        Ok(groups)
    }
}

impl<T: Scalar> FromIterator<(T, bool)> for LabeledScores<T> {
    fn from_iter<I: IntoIterator<Item = (T, bool)>>(iter: I) -> Self {
        LabeledScores {
            items: iter.into_iter().collect(),
        }
    }
}

/// Probability that a random positive outscores a random negative, ties
/// counting one half. −∞ scores are ordinary values below every finite one.
pub fn auc<T: Scalar>(scores: &LabeledScores<T>) -> Result<f64> {
    let groups = scores.tie_groups()?;
    let p = scores.positives() as f64;
    let n = scores.negatives() as f64;
    // walk from the lowest score up, counting negatives already passed
    let mut below = 0u64;
    let mut wins = 0.0f64;
    for &(_, pos, neg) in groups.iter().rev() {
        wins += pos as f64 * below as f64 + 0.5 * pos as f64 * neg as f64;
        below += neg;
    }
    Ok(wins / (p * n))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct RocPoint<T> {
    pub fpr: f64,
    pub tpr: f64,
    /// Examples scoring at least this much are called matches; `None` for
    /// the (0, 0) origin.
    #[serde(with = "crate::report::float::option")]
    pub threshold: Option<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct RocReport<T> {
    pub points: Vec<RocPoint<T>>,
    pub auc: f64,
}

impl<T: Scalar> RocReport<T> {
    /// Trapezoidal area under the curve.
    pub fn trapezoid_area(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| (w[1].fpr - w[0].fpr) * (w[1].tpr + w[0].tpr) * 0.5)
            .sum()
    }
}

/// Threshold sweep over the distinct scores, highest first. Tied examples
/// enter together, producing a diagonal segment, so the trapezoidal area
/// equals the rank statistic.
pub fn roc_curve<T: Scalar>(scores: &LabeledScores<T>) -> Result<RocReport<T>> {
    let groups = scores.tie_groups()?;
    let p = scores.positives() as f64;
    let n = scores.negatives() as f64;
    let mut points = Vec::with_capacity(groups.len() + 1);
    points.push(RocPoint {
        fpr: 0.0,
        tpr: 0.0,
        threshold: None,
    });
    let (mut tp, mut fp) = (0u64, 0u64);
    for (s, pos, neg) in groups {
        tp += pos;
        fp += neg;
        points.push(RocPoint {
            fpr: fp as f64 / n,
            tpr: tp as f64 / p,
            threshold: Some(s),
        });
    }
    Ok(RocReport {
        points,
        auc: auc(scores)?,
    })
}
