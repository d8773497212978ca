//! Character-pattern reports read directly off fitted positional and
//! apositional counts, plus the outlier scan built on them.

use super::{ApositionalStats, FieldModel, ModelClass, PositionalStats};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A character is flagged dominant when its empirical frequency reaches this.
pub const DEFAULT_DOMINANCE_THRESHOLD: f64 = 0.99;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LengthShare {
    pub length: u64,
    pub count: u64,
    pub frequency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharShare {
    pub symbol: char,
    pub count: u64,
    /// count / observations
    pub frequency: f64,
    /// (count + β) / (observations + |A|β)
    pub posterior: f64,
    pub dominant: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositionPattern {
    /// 1-based position, `None` for the pooled apositional distribution.
    pub position: Option<usize>,
    pub observations: u64,
    /// Observed characters, most frequent first.
    pub characters: Vec<CharShare>,
    /// Posterior probability of each character never seen here.
    pub unseen_posterior: f64,
}

impl PositionPattern {
    pub fn dominant(&self) -> impl Iterator<Item = &CharShare> {
        self.characters.iter().filter(|c| c.dominant)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternReport {
    pub model: ModelClass,
    pub observations: u64,
    pub threshold: f64,
    pub lengths: Vec<LengthShare>,
    pub positions: Vec<PositionPattern>,
}

fn lengths(counts: &BTreeMap<u64, u64>) -> Vec<LengthShare> {
    let n: u64 = counts.values().sum();
    counts
        .iter()
        .map(|(&length, &count)| LengthShare {
            length,
            count,
            frequency: count as f64 / n as f64,
        })
        .collect()
}

fn distribution(
    position: Option<usize>,
    counts: &BTreeMap<char, u64>,
    alphabet_size: usize,
    beta: f64,
    threshold: f64,
) -> PositionPattern {
    let n: u64 = counts.values().sum();
    let denom = n as f64 + alphabet_size as f64 * beta;
    let mut characters: Vec<CharShare> = counts
        .iter()
        .map(|(&symbol, &count)| {
            let frequency = count as f64 / n as f64;
            CharShare {
                symbol,
                count,
                frequency,
                posterior: (count as f64 + beta) / denom,
                dominant: frequency >= threshold,
            }
        })
        .collect();
    characters.sort_by(|a, b| b.count.cmp(&a.count).then(a.symbol.cmp(&b.symbol)));
    PositionPattern {
        position,
        observations: n,
        characters,
        unseen_posterior: beta / denom,
    }
}

pub fn inspect_positional(stats: &PositionalStats, beta: f64, threshold: f64) -> PatternReport {
    let size = stats.alphabet.len();
    PatternReport {
        model: ModelClass::Positional,
        observations: stats.observations(),
        threshold,
        lengths: lengths(&stats.length_counts),
        positions: stats
            .char_counts
            .iter()
            .enumerate()
            .map(|(j, m)| distribution(Some(j + 1), m, size, beta, threshold))
            .collect(),
    }
}

pub fn inspect_apositional(stats: &ApositionalStats, beta: f64, threshold: f64) -> PatternReport {
    let positions = if stats.char_counts.is_empty() {
        Vec::new()
    } else {
        vec![distribution(None, &stats.char_counts, stats.alphabet.len(), beta, threshold)]
    };
    PatternReport {
        model: ModelClass::Apositional,
        observations: stats.observations(),
        threshold,
        lengths: lengths(&stats.length_counts),
        positions,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnomalyCause {
    /// 1-based position, `None` when the pooled frequency is the rare one.
    pub position: Option<usize>,
    pub symbol: char,
    pub frequency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Anomaly {
    /// 1-based row within the scanned values.
    pub row: usize,
    pub value: String,
    pub causes: Vec<AnomalyCause>,
}

/// Values holding a character whose empirical frequency, at its position or
/// pooled over all positions, is below `1 − threshold`.
pub fn find_anomalies<'a>(
    values: impl IntoIterator<Item = &'a str>,
    positional: &PositionalStats,
    apositional: &ApositionalStats,
    threshold: f64,
) -> Vec<Anomaly> {
    let rare = 1.0 - threshold;
    let pooled_total = apositional.total_chars() as f64;
    let mut out = Vec::new();
    for (i, value) in values.into_iter().enumerate() {
        let mut causes = Vec::new();
        for (j, c) in value.chars().enumerate() {
            let position = j + 1;
            let at = positional.at_least(position);
            if at > 0 {
                let freq = positional.char_count(position, c) as f64 / at as f64;
                if freq < rare {
                    causes.push(AnomalyCause {
                        position: Some(position),
                        symbol: c,
                        frequency: freq,
                    });
                }
            }
            if pooled_total > 0.0 {
                let freq = apositional.char_count(c) as f64 / pooled_total;
                if freq < rare && !causes.iter().any(|a| a.position.is_none() && a.symbol == c) {
                    causes.push(AnomalyCause {
                        position: None,
                        symbol: c,
                        frequency: freq,
                    });
                }
            }
        }
        if !causes.is_empty() {
            out.push(Anomaly {
                row: i + 1,
                value: value.to_string(),
                causes,
            });
        }
    }
    out
}
