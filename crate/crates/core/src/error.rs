use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed CSV in {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("{path}: row {row} has {found} fields, header has {expected}")]
    RaggedRow {
        path: PathBuf,
        row: u64,
        expected: usize,
        found: usize,
    },

    #[error("{path}: missing header row")]
    MissingHeader { path: PathBuf },

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("statistics were fitted over different alphabets")]
    AlphabetMismatch,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("log-gamma domain error: argument {0} is not positive")]
    Domain(f64),

    #[error("non-finite value: {0}")]
    NonFinite(&'static str),

    #[error("subsample size {requested} too large for {records} records (maximum {max})")]
    SubsampleTooLarge {
        requested: usize,
        records: usize,
        max: usize,
    },

    #[error("need at least two fields after filtering, found {0}")]
    TooFewFields(usize),

    #[error("table has no fields")]
    EmptyTable,

    #[error("ROC needs at least one positive and one negative example")]
    DegenerateLabels,

    #[error("NaN score at index {0}")]
    NanScore(usize),

    #[error("unknown scorer `{0}`")]
    UnknownScorer(String),

    #[error("unknown field `{name}`; available: {}", available.join(", "))]
    UnknownField { name: String, available: Vec<String> },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by the input data rather than by configuration.
    pub fn is_data_error(&self) -> bool {
        !matches!(
            self,
            Error::InvalidParameter(_)
                | Error::InvalidAlphabet(_)
                | Error::UnknownScorer(_)
                | Error::SubsampleTooLarge { .. }
                | Error::UnknownField { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
