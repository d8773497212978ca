use crate::error::{Error, Result};
use crate::models::ModelClass;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Every field-pair score the matcher can produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Scorer {
    Bayesian(ModelClass),
    Mle(ModelClass),
    Jaccard,
    Pmi,
    EntropyDiff,
    EuclidUnsorted,
    EuclidSorted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScorerFamily {
    Bayesian,
    Mle,
    /// Multiset-based literature scores.
    Multiset,
    /// Set-based literature scores.
    Set,
}

impl Scorer {
    /// Three Bayesian models followed by the five literature baselines.
    pub const DEFAULT: [Scorer; 8] = [
        Scorer::Bayesian(ModelClass::Apositional),
        Scorer::Bayesian(ModelClass::Positional),
        Scorer::Bayesian(ModelClass::Discrete),
        Scorer::EuclidSorted,
        Scorer::EuclidUnsorted,
        Scorer::EntropyDiff,
        Scorer::Jaccard,
        Scorer::Pmi,
    ];

    pub const MLE: [Scorer; 3] = [
        Scorer::Mle(ModelClass::Apositional),
        Scorer::Mle(ModelClass::Positional),
        Scorer::Mle(ModelClass::Discrete),
    ];

    pub fn all() -> Vec<Scorer> {
        Self::DEFAULT.iter().chain(&Self::MLE).copied().collect()
    }

    pub fn id(self) -> &'static str {
        match self {
            Scorer::Bayesian(m) => m.name(),
            Scorer::Mle(ModelClass::Discrete) => "mle-discrete",
            Scorer::Mle(ModelClass::Positional) => "mle-positional",
            Scorer::Mle(ModelClass::Apositional) => "mle-apositional",
            Scorer::Jaccard => "jaccard",
            Scorer::Pmi => "pmi",
            Scorer::EntropyDiff => "entropy-diff",
            Scorer::EuclidUnsorted => "euclid-unsorted",
            Scorer::EuclidSorted => "euclid-sorted",
        }
    }

    pub fn family(self) -> ScorerFamily {
        match self {
            Scorer::Bayesian(_) => ScorerFamily::Bayesian,
            Scorer::Mle(_) => ScorerFamily::Mle,
            Scorer::Jaccard | Scorer::Pmi => ScorerFamily::Set,
            Scorer::EntropyDiff | Scorer::EuclidUnsorted | Scorer::EuclidSorted => ScorerFamily::Multiset,
        }
    }

    /// True when the raw score is a distance (smaller means more alike).
    pub fn is_distance(self) -> bool {
        matches!(self, Scorer::EntropyDiff | Scorer::EuclidUnsorted | Scorer::EuclidSorted)
    }

    /// Model class whose statistics this scorer needs, if any.
    pub fn model(self) -> Option<ModelClass> {
        match self {
            Scorer::Bayesian(m) | Scorer::Mle(m) => Some(m),
            _ => None,
        }
    }

    /// Parses a comma-separated list; `default` and `all` expand to the
    /// standard sets.
    pub fn parse_list(text: &str) -> Result<Vec<Scorer>> {
        let mut out: Vec<Scorer> = Vec::new();
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let add: Vec<Scorer> = match part {
                "default" => Self::DEFAULT.to_vec(),
                "all" => Self::all(),
                "mle" => Self::MLE.to_vec(),
                id => vec![id.parse()?],
            };
            for s in add {
                if !out.contains(&s) {
                    out.push(s);
                }
            }
        }
        if out.is_empty() {
            return Err(Error::UnknownScorer(text.to_string()));
        }
        Ok(out)
    }
}

impl FromStr for Scorer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scorer::all()
            .into_iter()
            .find(|sc| sc.id() == s)
            .ok_or_else(|| Error::UnknownScorer(s.to_string()))
    }
}

impl fmt::Display for Scorer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl From<Scorer> for String {
    fn from(s: Scorer) -> String {
        s.id().to_string()
    }
}

impl TryFrom<String> for Scorer {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}
