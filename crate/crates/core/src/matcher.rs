//! Pairwise match posteriors and full match matrices.
//!
//! For fields X and Y the two hypotheses are S (one model generated both)
//! and ¬S (independent models), so
//!
//! ```text
//! P(S | X+Y) = P(X+Y|S)P(S) / [P(X+Y|S)P(S) + P(X)P(Y)P(¬S)]
//! ```
//!
//! where P(X+Y|S) is the joint of the merged sufficient statistics. Matrices
//! store the posterior log-odds for model-based scorers, which orders pairs
//! exactly like the probability but does not saturate at 0 or 1.

use crate::alphabet::Alphabet;
use crate::baselines::{orient, raw_score, FieldDistribution};
use crate::crp::ModelPriors;
use crate::error::{Error, Result};
use crate::ingest::{FieldColumn, Table};
use crate::mle::MleScore;
use crate::models::{ApositionalStats, DiscreteStats, FieldModel, ModelClass, PositionalStats};
use crate::scalar::{log_add_exp, Scalar};
use crate::scorer::Scorer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Prior probability that a candidate pair is a match.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MatchHypothesisPrior<T>(T);

impl<T: Scalar> MatchHypothesisPrior<T> {
    pub fn new(p_same: T) -> Result<Self> {
        if p_same > T::zero() && p_same < T::one() {
            Ok(MatchHypothesisPrior(p_same))
        } else {
            Err(Error::InvalidParameter(format!("P(S) must lie in (0, 1), got {p_same}")))
        }
    }

    pub fn p_same(self) -> T {
        self.0
    }
}

impl<T: Scalar> Default for MatchHypothesisPrior<T> {
    fn default() -> Self {
        MatchHypothesisPrior(T::lit(0.5))
    }
}

/// ln[P(S|X+Y) / P(¬S|X+Y)].
pub fn log_match_odds<T: Scalar>(log_px: T, log_py: T, log_pxy: T, prior: MatchHypothesisPrior<T>) -> Result<T> {
    if !log_pxy.is_finite() {
        return Err(Error::NonFinite("joint log probability of merged fields"));
    }
    if log_px.is_nan() || log_py.is_nan() || log_px == T::infinity() || log_py == T::infinity() {
        return Err(Error::NonFinite("field log probability"));
    }
    let p = prior.p_same();
    Ok(log_pxy + p.ln() - (log_px + log_py + (T::one() - p).ln()))
}

/// ln P(S | X+Y), computed by log-sum-exp so it stays finite for any finite
/// evidence.
pub fn log_match_probability<T: Scalar>(
    log_px: T,
    log_py: T,
    log_pxy: T,
    prior: MatchHypothesisPrior<T>,
) -> Result<T> {
    Ok(log_probability_from_odds(log_match_odds(log_px, log_py, log_pxy, prior)?))
}

/// P(S | X+Y).
pub fn match_probability<T: Scalar>(log_px: T, log_py: T, log_pxy: T, prior: MatchHypothesisPrior<T>) -> Result<T> {
    Ok(log_match_probability(log_px, log_py, log_pxy, prior)?.exp())
}

/// Posterior log-odds from the log Bayes factor
/// log P(X+Y) − log P(X) − log P(Y).
pub fn odds_from_evidence<T: Scalar>(log_evidence: T, prior: MatchHypothesisPrior<T>) -> Result<T> {
    if !log_evidence.is_finite() {
        return Err(Error::NonFinite("log evidence"));
    }
    let p = prior.p_same();
    Ok(log_evidence + (p.ln() - (T::one() - p).ln()))
}

/// ln σ(odds) = −ln(1 + e^{−odds}).
pub fn log_probability_from_odds<T: Scalar>(log_odds: T) -> T {
    -log_add_exp(T::zero(), -log_odds)
}

/// Match posterior of two fitted models of the same class.
pub fn model_match_odds<T: Scalar, M: FieldModel>(
    x: &M,
    y: &M,
    priors: &ModelPriors<T>,
    prior: MatchHypothesisPrior<T>,
) -> Result<T> {
    odds_from_evidence(x.log_evidence(y, priors)?, prior)
}

/// Same comparison with maximum-likelihood scoring.
pub fn mle_match_odds<T: Scalar, M: MleScore>(x: &M, y: &M, prior: MatchHypothesisPrior<T>) -> Result<T> {
    odds_from_evidence(x.mle_log_evidence(y)?, prior)
}

/// Fits both fields with one model class and returns P(S | X+Y).
pub fn score_pair<T: Scalar>(
    a: &FieldColumn,
    b: &FieldColumn,
    model: ModelClass,
    alphabet: &Alphabet,
    priors: &ModelPriors<T>,
    prior: MatchHypothesisPrior<T>,
) -> Result<T> {
    fn go<T: Scalar, M: FieldModel>(
        a: &FieldColumn,
        b: &FieldColumn,
        alphabet: &Alphabet,
        priors: &ModelPriors<T>,
        prior: MatchHypothesisPrior<T>,
    ) -> Result<T> {
        let x = M::fit(a.iter(), alphabet);
        let y = M::fit(b.iter(), alphabet);
        model_match_odds(&x, &y, priors, prior)
    }
    let odds = match model {
        ModelClass::Discrete => go::<T, DiscreteStats>(a, b, alphabet, priors, prior),
        ModelClass::Positional => go::<T, PositionalStats>(a, b, alphabet, priors, prior),
        ModelClass::Apositional => go::<T, ApositionalStats>(a, b, alphabet, priors, prior),
    }?;
    Ok(log_probability_from_odds(odds).exp())
}

/// Settings shared by every pairwise comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchConfig<T> {
    pub priors: ModelPriors<T>,
    pub prior: MatchHypothesisPrior<T>,
    /// Worker threads for pair scoring; `None` uses all available cores.
    pub workers: Option<usize>,
}

impl<T: Scalar> Default for MatchConfig<T> {
    fn default() -> Self {
        MatchConfig {
            priors: ModelPriors::default(),
            prior: MatchHypothesisPrior::default(),
            workers: None,
        }
    }
}

impl<T: Scalar> MatchConfig<T> {
    /// Runs `f` on a pool limited to the configured worker count.
    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> Result<R> {
        match self.workers {
            None => Ok(f()),
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n.max(1))
                    .build()
                    .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
                Ok(pool.install(f))
            }
        }
    }
}

/// Everything one field contributes to pair scoring, computed once.
#[derive(Debug, Clone)]
pub struct FieldProfile<T> {
    pub name: String,
    pub discrete: Option<DiscreteStats>,
    pub positional: Option<PositionalStats>,
    pub apositional: Option<ApositionalStats>,
    pub distribution: Option<FieldDistribution<T>>,
    /// Own log joints of the character models, indexed like `ModelClass::ALL`.
    joints: [Option<T>; 3],
    mle_joints: [Option<T>; 3],
}

fn class_slot(m: ModelClass) -> usize {
    match m {
        ModelClass::Apositional => 0,
        ModelClass::Positional => 1,
        ModelClass::Discrete => 2,
    }
}

impl<T: Scalar> FieldProfile<T> {
    pub fn build(field: &FieldColumn, alphabet: &Alphabet, scorers: &[Scorer], priors: &ModelPriors<T>) -> Self {
        let needs = |m: ModelClass| scorers.iter().any(|s| s.model() == Some(m));
        let needs_distribution = scorers.iter().any(|s| s.model().is_none());
        let discrete = (needs(ModelClass::Discrete) || needs_distribution).then(|| DiscreteStats::fit(field.iter(), alphabet));
        let positional = needs(ModelClass::Positional).then(|| PositionalStats::fit(field.iter(), alphabet));
        let apositional = needs(ModelClass::Apositional).then(|| ApositionalStats::fit(field.iter(), alphabet));
        let distribution = needs_distribution.then(|| FieldDistribution::from_stats(discrete.as_ref().expect("fitted above")));
        let mut profile = FieldProfile {
            name: field.name.clone(),
            discrete,
            positional,
            apositional,
            distribution,
            joints: [None; 3],
            mle_joints: [None; 3],
        };
        for s in scorers {
            match *s {
                Scorer::Bayesian(m) if m != ModelClass::Discrete => profile.joints[class_slot(m)] = profile.own_joint(m, priors, false),
                Scorer::Mle(m) if m != ModelClass::Discrete => profile.mle_joints[class_slot(m)] = profile.own_joint(m, priors, true),
                _ => {}
            }
        }
        profile
    }

    fn own_joint(&self, m: ModelClass, priors: &ModelPriors<T>, mle: bool) -> Option<T> {
        Some(match (m, mle) {
            (ModelClass::Discrete, false) => self.discrete.as_ref()?.log_joint(priors),
            (ModelClass::Positional, false) => self.positional.as_ref()?.log_joint(priors),
            (ModelClass::Apositional, false) => self.apositional.as_ref()?.log_joint(priors),
            (ModelClass::Discrete, true) => self.discrete.as_ref()?.mle_log_joint(),
            (ModelClass::Positional, true) => self.positional.as_ref()?.mle_log_joint(),
            (ModelClass::Apositional, true) => self.apositional.as_ref()?.mle_log_joint(),
        })
    }

    /// Parameter count of one model class, if fitted.
    pub fn parameters(&self, m: ModelClass) -> Option<usize> {
        match m {
            ModelClass::Discrete => self.discrete.as_ref().map(FieldModel::count_parameters),
            ModelClass::Positional => self.positional.as_ref().map(FieldModel::count_parameters),
            ModelClass::Apositional => self.apositional.as_ref().map(FieldModel::count_parameters),
        }
    }

    /// Oriented score of this field against `other` (higher is a better match).
    pub fn score(&self, other: &Self, scorer: Scorer, config: &MatchConfig<T>) -> Result<T> {
        fn pair<'a, M>(a: &'a Option<M>, b: &'a Option<M>) -> Result<(&'a M, &'a M)> {
            match (a, b) {
                (Some(x), Some(y)) => Ok((x, y)),
                _ => Err(Error::InvalidParameter("field profile lacks statistics for this scorer".into())),
            }
        }
        let cached = |p: &Self, m: ModelClass, mle: bool| -> Result<T> {
            let slot = class_slot(m);
            let v = if mle { p.mle_joints[slot] } else { p.joints[slot] };
            v.ok_or_else(|| Error::InvalidParameter("field profile lacks a cached joint".into()))
        };
        let prior = config.prior;
        match scorer {
            Scorer::Bayesian(m) | Scorer::Mle(m) => {
                let mle = matches!(scorer, Scorer::Mle(_));
                // own joints are cached; the discrete model has a cheaper
                // shared-values form that needs no merged multiset
                let with_cache = |merged: T| Ok::<T, Error>(merged - (cached(self, m, mle)? + cached(other, m, mle)?));
                let evidence = match m {
                    ModelClass::Discrete => {
                        let (x, y) = pair(&self.discrete, &other.discrete)?;
                        if mle { x.mle_log_evidence(y)? } else { x.log_evidence(y, &config.priors)? }
                    }
                    ModelClass::Positional => {
                        let (x, y) = pair(&self.positional, &other.positional)?;
                        let z = x.merge(y)?;
                        with_cache(if mle { z.mle_log_joint() } else { z.log_joint(&config.priors) })?
                    }
                    ModelClass::Apositional => {
                        let (x, y) = pair(&self.apositional, &other.apositional)?;
                        let z = x.merge(y)?;
                        with_cache(if mle { z.mle_log_joint() } else { z.log_joint(&config.priors) })?
                    }
                };
                odds_from_evidence(evidence, prior)
            }
            _ => {
                let (x, y) = pair(&self.distribution, &other.distribution)?;
                let raw = raw_score(scorer, x, y).expect("baseline scorer");
                Ok(orient(raw, scorer))
            }
        }
    }
}

/// Per-field profiles of a whole table.
#[derive(Debug, Clone)]
pub struct ProfiledTable<T> {
    pub alphabet: Alphabet,
    pub scorers: Vec<Scorer>,
    pub fields: Vec<FieldProfile<T>>,
}

impl<T: Scalar> ProfiledTable<T> {
    pub fn build(table: &Table, scorers: &[Scorer], config: &MatchConfig<T>) -> Result<Self> {
        if table.field_count() == 0 {
            return Err(Error::EmptyTable);
        }
        let alphabet = table.alphabet().clone();
        let fields = config.install(|| {
            table
                .fields()
                .par_iter()
                .map(|f| FieldProfile::build(f, &alphabet, scorers, &config.priors))
                .collect()
        })?;
        Ok(ProfiledTable {
            alphabet,
            scorers: scorers.to_vec(),
            fields,
        })
    }

    pub fn names(&self) -> Vec<String> {
        self.fields.iter().map(|f| f.name.clone()).collect()
    }

    /// Mean parameter count of a model class over the fields.
    pub fn mean_parameters(&self, m: ModelClass) -> Option<f64> {
        let counts: Option<Vec<usize>> = self.fields.iter().map(|f| f.parameters(m)).collect();
        let counts = counts?;
        Some(counts.iter().sum::<usize>() as f64 / counts.len() as f64)
    }
}

/// d_A × d_B oriented scores for one scorer, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct MatchMatrix<T> {
    pub scorer: Scorer,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    #[serde(with = "crate::report::float::vec")]
    pub scores: Vec<T>,
}

impl<T: Scalar> MatchMatrix<T> {
    pub fn get(&self, row: usize, col: usize) -> T {
        self.scores[row * self.cols.len() + col]
    }

    pub fn row(&self, row: usize) -> &[T] {
        let d = self.cols.len();
        &self.scores[row * d..(row + 1) * d]
    }

    /// True when scores are posterior log-odds of a model-based scorer.
    pub fn is_log_odds(&self) -> bool {
        self.scorer.model().is_some()
    }

    /// Match probabilities for model-based scorers.
    pub fn probabilities(&self) -> Option<Vec<T>> {
        self.is_log_odds()
            .then(|| self.scores.iter().map(|&o| log_probability_from_odds(o).exp()).collect())
    }

    /// Column indices of the `k` best scores in a row, best first; ties keep
    /// column order.
    pub fn top(&self, row: usize, k: usize) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.cols.len()).collect();
        let r = self.row(row);
        idx.sort_by(|&a, &b| r[b].partial_cmp(&r[a]).unwrap_or(std::cmp::Ordering::Equal));
        idx.truncate(k);
        idx
    }
}

/// Scores every (row, column) pair of two profiled tables.
pub fn score_matrix<T: Scalar>(
    a: &ProfiledTable<T>,
    b: &ProfiledTable<T>,
    scorer: Scorer,
    config: &MatchConfig<T>,
) -> Result<MatchMatrix<T>> {
    if a.alphabet != b.alphabet {
        return Err(Error::AlphabetMismatch);
    }
    let d_b = b.fields.len();
    let cells: Result<Vec<T>> = config.install(|| {
        (0..a.fields.len() * d_b)
            .into_par_iter()
            .map(|k| a.fields[k / d_b].score(&b.fields[k % d_b], scorer, config))
            .collect()
    })?;
    Ok(MatchMatrix {
        scorer,
        rows: a.names(),
        cols: b.names(),
        scores: cells?,
    })
}

/// Fits both tables once and scores all pairs for each scorer.
pub fn match_matrices<T: Scalar>(
    a: &Table,
    b: &Table,
    scorers: &[Scorer],
    config: &MatchConfig<T>,
) -> Result<Vec<MatchMatrix<T>>> {
    let pa = ProfiledTable::build(a, scorers, config)?;
    let pb = ProfiledTable::build(b, scorers, config)?;
    scorers.iter().map(|&s| score_matrix(&pa, &pb, s, config)).collect()
}

pub fn match_matrix<T: Scalar>(a: &Table, b: &Table, scorer: Scorer, config: &MatchConfig<T>) -> Result<MatchMatrix<T>> {
    Ok(match_matrices(a, b, &[scorer], config)?.remove(0))
}
