//! Output formats: JSON documents, match-matrix TSV, ROC point CSV and
//! aligned text tables. Every output carries the format version and the
//! caller's run configuration, and contains nothing run-dependent besides
//! them, so identical inputs produce identical bytes.

use crate::error::Result;
use crate::eval::{ExperimentReport, RocReport, SizeSweep};
use crate::matcher::MatchMatrix;
use crate::models::ModelClass;
use crate::scalar::Scalar;
use serde::Serialize;
use serde_json::Value;
use std::fmt::Write;

pub const FORMAT_VERSION: u32 = 1;

/// Floats that may be infinite (the PMI sentinel, saturated log-odds).
/// JSON has no infinities, so non-finite values are written as the strings
/// `"inf"`, `"-inf"` and `"nan"`.
pub(crate) mod float {
    use crate::scalar::Scalar;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub(crate) struct Ext<T>(pub T);

    impl<T: Scalar> Serialize for Ext<T> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            let v = self.0.to_f64_lossy();
            if v.is_finite() {
                s.serialize_f64(v)
            } else if v.is_nan() {
                s.serialize_str("nan")
            } else if v > 0.0 {
                s.serialize_str("inf")
            } else {
                s.serialize_str("-inf")
            }
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Str(String),
    }

    impl<'de, T: Scalar> Deserialize<'de> for Ext<T> {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            let v = match Repr::deserialize(d)? {
                Repr::Num(v) => v,
                Repr::Str(s) => match s.as_str() {
                    "inf" => f64::INFINITY,
                    "-inf" => f64::NEG_INFINITY,
                    "nan" => f64::NAN,
                    other => return Err(serde::de::Error::custom(format!("not a number: {other:?}"))),
                },
            };
            Ok(Ext(T::lit(v)))
        }
    }

    pub(crate) mod vec {
        use super::Ext;
        use crate::scalar::Scalar;
        use serde::{Deserialize, Deserializer, Serializer};

        pub(crate) fn serialize<T: Scalar, S: Serializer>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(|&x| Ext(x)))
        }

        pub(crate) fn deserialize<'de, T: Scalar, D: Deserializer<'de>>(d: D) -> Result<Vec<T>, D::Error> {
            Ok(Vec::<Ext<T>>::deserialize(d)?.into_iter().map(|e| e.0).collect())
        }
    }

    pub(crate) mod option {
        use super::Ext;
        use crate::scalar::Scalar;
        use serde::{Deserialize, Deserializer, Serializer};

        pub(crate) fn serialize<T: Scalar, S: Serializer>(v: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(x) => s.serialize_some(&Ext(*x)),
                None => s.serialize_none(),
            }
        }

        pub(crate) fn deserialize<'de, T: Scalar, D: Deserializer<'de>>(d: D) -> Result<Option<T>, D::Error> {
            Ok(Option::<Ext<T>>::deserialize(d)?.map(|e| e.0))
        }
    }
}

#[derive(Serialize)]
struct Document<'a, B> {
    format_version: u32,
    kind: &'a str,
    config: &'a Value,
    data: B,
}

/// Pretty JSON document `{format_version, kind, config, data}` with a
/// trailing newline.
pub fn json_document<B: Serialize>(kind: &str, config: &Value, data: &B) -> Result<String> {
    let doc = Document {
        format_version: FORMAT_VERSION,
        kind,
        config,
        data,
    };
    let mut s = serde_json::to_string_pretty(&doc)?;
    s.push('\n');
    Ok(s)
}

/// Comment lines heading every text output.
pub fn text_header(config: &Value) -> String {
    format!("# fieldmatch format {FORMAT_VERSION}\n# config {config}\n")
}

fn number<T: Scalar>(x: T) -> String {
    format!("{}", x.to_f64_lossy())
}

fn matrix_scale<T: Scalar>(m: &MatchMatrix<T>) -> &'static str {
    if m.is_log_odds() {
        "log_odds"
    } else {
        "score"
    }
}

/// Rows are fields of the first table, columns fields of the second.
/// Model-based scorers are written as posterior log-odds.
pub fn matrix_tsv<T: Scalar>(m: &MatchMatrix<T>, config: &Value) -> String {
    let mut out = text_header(config);
    let _ = writeln!(out, "# scorer {}\n# scale {}", m.scorer.id(), matrix_scale(m));
    out.push_str("field");
    for c in &m.cols {
        out.push('\t');
        out.push_str(c);
    }
    out.push('\n');
    for (i, r) in m.rows.iter().enumerate() {
        out.push_str(r);
        for &s in m.row(i) {
            out.push('\t');
            out.push_str(&number(s));
        }
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct MatrixBody<'a, T: Scalar> {
    scorer: &'a str,
    scale: &'a str,
    rows: &'a [String],
    cols: &'a [String],
    #[serde(with = "float::vec")]
    scores: &'a [T],
    #[serde(with = "float::vec", skip_serializing_if = "Vec::is_empty")]
    probabilities: Vec<T>,
}

/// Row-major scores, plus match probabilities for model-based scorers.
pub fn matrix_json<T: Scalar>(m: &MatchMatrix<T>, config: &Value) -> Result<String> {
    let body = MatrixBody {
        scorer: m.scorer.id(),
        scale: matrix_scale(m),
        rows: &m.rows,
        cols: &m.cols,
        scores: &m.scores,
        probabilities: m.probabilities().unwrap_or_default(),
    };
    json_document("match_matrix", config, &body)
}

/// The `k` best columns for every row, best first.
pub fn top_pairs_text<T: Scalar>(m: &MatchMatrix<T>, k: usize, config: &Value) -> String {
    let mut out = text_header(config);
    let _ = writeln!(out, "# scorer {}", m.scorer.id());
    let probs = m.probabilities();
    let width = m.rows.iter().map(|r| r.len()).max().unwrap_or(0);
    for (i, r) in m.rows.iter().enumerate() {
        let picks: Vec<String> = m
            .top(i, k)
            .into_iter()
            .map(|j| {
                let at = i * m.cols.len() + j;
                match &probs {
                    Some(p) => format!("{} (p={:.4})", m.cols[j], p[at].to_f64_lossy()),
                    None => format!("{} ({:.4})", m.cols[j], m.scores[at].to_f64_lossy()),
                }
            })
            .collect();
        let _ = writeln!(out, "{r:<width$}  {}", picks.join(", "));
    }
    out
}

/// `fpr,tpr,threshold`; the first point has an empty threshold.
pub fn roc_csv<T: Scalar>(roc: &RocReport<T>, config: &Value) -> String {
    let mut out = text_header(config);
    out.push_str("fpr,tpr,threshold\n");
    for p in &roc.points {
        let t = p.threshold.map(number).unwrap_or_default();
        let _ = writeln!(out, "{},{},{}", p.fpr, p.tpr, t);
    }
    out
}

fn table(out: &mut String, header: &[String], rows: &[Vec<String>]) {
    let cols = header.len();
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().map(|r| r[c].len()).chain([header[c].len()]).max().unwrap_or(0))
        .collect();
    let line = |cells: &[String]| {
        let mut s = String::new();
        for (c, cell) in cells.iter().enumerate() {
            if c == 0 {
                let _ = write!(s, "{cell:<w$}", w = widths[c]);
            } else {
                let _ = write!(s, "  {cell:>w$}", w = widths[c]);
            }
        }
        s.push('\n');
        s
    };
    out.push_str(&line(header));
    let rule: usize = widths.iter().sum::<usize>() + 2 * (cols - 1);
    out.push_str(&"-".repeat(rule));
    out.push('\n');
    for r in rows {
        out.push_str(&line(r));
    }
}

/// AUC per scorer and mean parameter counts, as aligned text.
pub fn auc_summary_text<T>(report: &ExperimentReport<T>, config: &Value) -> String {
    let mut out = text_header(config);
    let _ = writeln!(
        out,
        "subsample size {}, {} records, {} of {} fields kept\n",
        report.subsample_size,
        report.records,
        report.fields.len(),
        report.original_fields
    );
    let rows: Vec<Vec<String>> = report
        .results
        .iter()
        .map(|r| vec![r.scorer.id().to_string(), format!("{:.4}", r.auc)])
        .collect();
    table(&mut out, &["scorer".into(), "auc".into()], &rows);
    out.push('\n');
    let rows: Vec<Vec<String>> = ModelClass::ALL
        .iter()
        .filter_map(|&m| report.mean_parameters(m).map(|p| vec![m.name().to_string(), format!("{p:.1}")]))
        .collect();
    table(&mut out, &["model".into(), "mean parameters".into()], &rows);
    out
}

/// One row per scorer and one column per subsample size. Failed sizes show
/// `-` and their errors are listed below the table.
pub fn size_sweep_text<T>(sweep: &SizeSweep<T>, config: &Value) -> String {
    let mut out = text_header(config);
    let mut header = vec!["scorer".to_string()];
    header.extend(sweep.entries.iter().map(|e| e.subsample_size.to_string()));
    let rows: Vec<Vec<String>> = sweep
        .scorers
        .iter()
        .map(|&s| {
            let mut row = vec![s.id().to_string()];
            row.extend(
                sweep
                    .auc_row(s)
                    .into_iter()
                    .map(|a| a.map_or_else(|| "-".to_string(), |a| format!("{a:.4}"))),
            );
            row
        })
        .collect();
    table(&mut out, &header, &rows);
    for e in &sweep.entries {
        if let Some(err) = &e.error {
            let _ = writeln!(out, "n={}: {err}", e.subsample_size);
        }
    }
    out
}
