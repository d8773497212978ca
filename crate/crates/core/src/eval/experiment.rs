use super::roc::{roc_curve, LabeledScores, RocReport};
use crate::error::{Error, Result};
use crate::ingest::{filter_fields, split_subsamples, Table, DEFAULT_FILTER_THRESHOLD};
use crate::matcher::{score_matrix, MatchConfig, MatchMatrix, ProfiledTable};
use crate::models::ModelClass;
use crate::scalar::Scalar;
use crate::scorer::Scorer;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig<T> {
    pub matching: MatchConfig<T>,
    /// Modal-frequency cut-off applied to the full table before splitting.
    pub filter_threshold: f64,
}

impl<T: Scalar> Default for ExperimentConfig<T> {
    fn default() -> Self {
        ExperimentConfig {
            matching: MatchConfig::default(),
            filter_threshold: DEFAULT_FILTER_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct ScorerResult<T> {
    pub scorer: Scorer,
    pub auc: f64,
    pub roc: RocReport<T>,
}

/// Mean number of nonzero parameters per field for one model class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterSummary {
    pub model: ModelClass,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct ExperimentReport<T> {
    pub subsample_size: usize,
    pub records: usize,
    pub original_fields: usize,
    /// Fields that survived filtering, in table order.
    pub fields: Vec<String>,
    pub results: Vec<ScorerResult<T>>,
    pub parameters: Vec<ParameterSummary>,
}

impl<T> ExperimentReport<T> {
    pub fn auc(&self, scorer: Scorer) -> Option<f64> {
        self.results.iter().find(|r| r.scorer == scorer).map(|r| r.auc)
    }

    pub fn mean_parameters(&self, model: ModelClass) -> Option<f64> {
        self.parameters.iter().find(|p| p.model == model).map(|p| p.mean)
    }
}

/// Labels the diagonal of a square self-match matrix as the matches.
pub fn self_match_labels<T: Scalar>(m: &MatchMatrix<T>) -> LabeledScores<T> {
    let d = m.cols.len();
    m.scores
        .iter()
        .enumerate()
        .map(|(k, &s)| (s, k / d == k % d))
        .collect()
}

/// Filters `table`, splits it into its first and last `n` rows, matches every
/// field of one half against every field of the other, and scores the
/// diagonal ground truth with each scorer.
pub fn self_match_experiment<T: Scalar>(
    table: &Table,
    n: usize,
    scorers: &[Scorer],
    config: &ExperimentConfig<T>,
) -> Result<ExperimentReport<T>> {
    let filtered = filter_fields(table, config.filter_threshold)?;
    if filtered.field_count() < 2 {
        return Err(Error::TooFewFields(filtered.field_count()));
    }
    let (first, second) = split_subsamples(&filtered, n)?;

    // always fit the three model classes so parameter counts are reported
    let mut profile_scorers: Vec<Scorer> = scorers.to_vec();
    for m in ModelClass::ALL {
        if !profile_scorers.iter().any(|s| s.model() == Some(m)) {
            profile_scorers.push(Scorer::Bayesian(m));
        }
    }
    let pa = ProfiledTable::build(&first, &profile_scorers, &config.matching)?;
    let pb = ProfiledTable::build(&second, &profile_scorers, &config.matching)?;

    let results = scorers
        .iter()
        .map(|&scorer| {
            let matrix = score_matrix(&pa, &pb, scorer, &config.matching)?;
            let roc = roc_curve(&self_match_labels(&matrix))?;
            Ok(ScorerResult {
                scorer,
                auc: roc.auc,
                roc,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let parameters = ModelClass::ALL
        .iter()
        .map(|&model| {
            let a = pa.mean_parameters(model).expect("fitted above");
            let b = pb.mean_parameters(model).expect("fitted above");
            ParameterSummary {
                model,
                mean: (a + b) / 2.0,
            }
        })
        .collect();

    Ok(ExperimentReport {
        subsample_size: n,
        records: table.record_count(),
        original_fields: table.field_count(),
        fields: filtered.field_names(),
        results,
        parameters,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct SweepEntry<T> {
    pub subsample_size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<ExperimentReport<T>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct SizeSweep<T> {
    pub scorers: Vec<Scorer>,
    pub entries: Vec<SweepEntry<T>>,
}

impl<T> SizeSweep<T> {
    /// AUC of `scorer` at every size, `None` where that size failed.
    pub fn auc_row(&self, scorer: Scorer) -> Vec<Option<f64>> {
        self.entries
            .iter()
            .map(|e| e.report.as_ref().and_then(|r| r.auc(scorer)))
            .collect()
    }
}

/// Runs the self-match experiment once per subsample size. A size that
/// fails (for example, larger than half the records) is recorded as an
/// error entry and the sweep continues.
pub fn size_sweep<T: Scalar>(
    table: &Table,
    sizes: &[usize],
    scorers: &[Scorer],
    config: &ExperimentConfig<T>,
) -> SizeSweep<T> {
    let entries = sizes
        .iter()
        .map(|&n| match self_match_experiment(table, n, scorers, config) {
            Ok(report) => SweepEntry {
                subsample_size: n,
                report: Some(report),
                error: None,
            },
            Err(e) => SweepEntry {
                subsample_size: n,
                report: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    SizeSweep {
        scorers: scorers.to_vec(),
        entries,
    }
}
