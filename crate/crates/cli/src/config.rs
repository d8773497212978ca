//! Run configuration: defaults, optional TOML file, command-line overrides.

use anyhow::{bail, Context, Result};
use clap::Args;
use fieldmatch::alphabet::{ALPHABET_SIZE, DEFAULT_PLACEHOLDER};
use fieldmatch::ingest::DEFAULT_FILTER_THRESHOLD;
use fieldmatch::{Alphabet, ExperimentConfig, MatchConfig, MatchPrior, Priors, Scorer};
use serde::{Deserialize, Deserializer, Serialize};
use std::path::{Path, PathBuf};

/// Everything that determines a run's output. Echoed into every file written.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub alpha: f64,
    pub lambda: f64,
    pub beta: f64,
    pub prior_same: f64,
    /// Modal-frequency filter cut-off, also the dominance threshold of
    /// `inspect`.
    pub threshold: f64,
    #[serde(deserialize_with = "scorer_list")]
    pub scorers: Vec<Scorer>,
    pub n: usize,
    pub sizes: Vec<usize>,
    pub seed: u64,
    /// Rows of the synthetic table; defaults to twice the largest subsample.
    pub rows: Option<usize>,
    pub workers: Option<usize>,
    pub top: usize,
    pub out: Option<PathBuf>,
    /// Custom symbol roster; 64 symbols form a full alphabet, fewer a
    /// compact one.
    pub alphabet: Option<String>,
    pub placeholder: char,
}

impl Default for RunConfig {
    fn default() -> Self {
        let priors = Priors::default();
        RunConfig {
            alpha: priors.alpha,
            lambda: priors.lambda,
            beta: priors.beta,
            prior_same: MatchPrior::default().p_same(),
            threshold: DEFAULT_FILTER_THRESHOLD,
            scorers: Scorer::DEFAULT.to_vec(),
            n: 5000,
            sizes: Vec::new(),
            seed: 0,
            rows: None,
            workers: None,
            top: 3,
            out: None,
            alphabet: None,
            placeholder: DEFAULT_PLACEHOLDER,
        }
    }
}

/// Accepts either `"default,mle"` or `["apositional", "jaccard"]`.
fn scorer_list<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Scorer>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        One(String),
        Many(Vec<String>),
    }
    let text = match Raw::deserialize(d)? {
        Raw::One(s) => s,
        Raw::Many(v) => v.join(","),
    };
    Scorer::parse_list(&text).map_err(serde::de::Error::custom)
}

/// Flags shared by every subcommand. Each one overrides the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// TOML file with any of the settings below
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// CRP concentration
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Mean string length of the base distribution
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Dirichlet pseudo-count per character
    #[arg(long)]
    pub beta: Option<f64>,
    /// Prior probability that two fields share one model
    #[arg(long)]
    pub prior_same: Option<f64>,
    /// Drop fields whose most common value has at least this frequency
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Comma-separated scorer ids, or `default`, `mle`, `all`
    #[arg(long)]
    pub scorers: Option<String>,
    /// Subsample size for `eval`
    #[arg(long)]
    pub n: Option<usize>,
    /// Extra subsample sizes for an `eval` size sweep
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Rows of a generated table
    #[arg(long)]
    pub rows: Option<usize>,
    /// Worker threads for pair scoring (default: all cores)
    #[arg(long)]
    pub workers: Option<usize>,
    /// Best matches listed per field
    #[arg(long)]
    pub top: Option<usize>,
    /// Output directory
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Symbol roster replacing the default alphabet
    #[arg(long)]
    pub alphabet: Option<String>,
    /// Symbol that unknown characters map to
    #[arg(long)]
    pub placeholder: Option<char>,
}

impl CommonArgs {
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => load_file(path)?,
            None => RunConfig::default(),
        };
        macro_rules! take {
            ($($f:ident),*) => {$(
                if let Some(v) = &self.$f {
                    cfg.$f = v.clone();
                }
            )*};
        }
        take!(alpha, lambda, beta, prior_same, threshold, n, sizes, seed, top, placeholder);
        if let Some(s) = &self.scorers {
            cfg.scorers = Scorer::parse_list(s)?;
        }
        if self.rows.is_some() {
            cfg.rows = self.rows;
        }
        if self.workers.is_some() {
            cfg.workers = self.workers;
        }
        if self.out.is_some() {
            cfg.out.clone_from(&self.out);
        }
        if self.alphabet.is_some() {
            cfg.alphabet.clone_from(&self.alphabet);
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn load_file(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("invalid config {}", path.display()))
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.priors()?;
        self.match_prior()?;
        if !(self.threshold > 0.0 && self.threshold <= 1.0) {
            bail!("threshold must lie in (0, 1], got {}", self.threshold);
        }
        if self.n == 0 || self.sizes.contains(&0) {
            bail!("subsample sizes must be positive");
        }
        if self.workers == Some(0) {
            bail!("workers must be at least 1");
        }
        if self.rows == Some(0) {
            bail!("rows must be positive");
        }
        self.alphabet()?;
        Ok(())
    }

    pub fn priors(&self) -> fieldmatch::Result<Priors> {
        Priors::new(self.alpha, self.lambda, self.beta)
    }

    pub fn match_prior(&self) -> fieldmatch::Result<MatchPrior> {
        MatchPrior::new(self.prior_same)
    }

    pub fn alphabet(&self) -> fieldmatch::Result<Alphabet> {
        match &self.alphabet {
            None if self.placeholder == DEFAULT_PLACEHOLDER => Ok(Alphabet::default()),
            None => {
                let default = Alphabet::default();
                let symbols: String = default
                    .symbols()
                    .iter()
                    .map(|&c| if c == DEFAULT_PLACEHOLDER { self.placeholder } else { c })
                    .collect();
                Alphabet::new(&symbols, self.placeholder)
            }
            Some(s) if s.chars().count() == ALPHABET_SIZE => Alphabet::new(s, self.placeholder),
            Some(s) => Alphabet::compact(s, self.placeholder),
        }
    }

    pub fn match_config(&self) -> fieldmatch::Result<MatchConfig> {
        Ok(MatchConfig {
            priors: self.priors()?,
            prior: self.match_prior()?,
            workers: self.workers,
        })
    }

    pub fn experiment_config(&self) -> fieldmatch::Result<ExperimentConfig> {
        Ok(ExperimentConfig {
            matching: self.match_config()?,
            filter_threshold: self.threshold,
        })
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("."))
    }
}
