//! Loading tables from CSV, dropping near-constant fields and splitting a
//! table into the first/last-n subsamples used for self-matching.

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use std::collections::HashMap;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};

/// One column of a table. The name is carried for reporting only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldColumn {
    pub name: String,
    pub values: Vec<String>,
}

impl FieldColumn {
    /// Normalizes `raw` against `alphabet`.
    pub fn normalized<I, S>(name: impl Into<String>, raw: I, alphabet: &Alphabet) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        FieldColumn {
            name: name.into(),
            values: raw.into_iter().map(|s| alphabet.normalize(s.as_ref())).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.values.iter().map(String::as_str)
    }

    /// Relative frequency of the most common value, `None` for an empty column.
    pub fn modal_frequency(&self) -> Option<f64> {
        if self.values.is_empty() {
            return None;
        }
        let mut counts: HashMap<&str, usize> = HashMap::new();
        for v in &self.values {
            *counts.entry(v.as_str()).or_default() += 1;
        }
        let top = counts.values().copied().max().unwrap_or(0);
        Some(top as f64 / self.values.len() as f64)
    }

    fn rows(&self, range: std::ops::Range<usize>) -> FieldColumn {
        FieldColumn {
            name: self.name.clone(),
            values: self.values[range].to_vec(),
        }
    }
}

/// Equal-length normalized columns sharing one alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    fields: Vec<FieldColumn>,
    record_count: usize,
    alphabet: Alphabet,
}

impl Table {
    pub fn new(fields: Vec<FieldColumn>, alphabet: Alphabet) -> Result<Self> {
        let record_count = fields.first().map_or(0, FieldColumn::len);
        if let Some(f) = fields.iter().find(|f| f.len() != record_count) {
            return Err(Error::InvalidParameter(format!(
                "field `{}` has {} values, expected {record_count}",
                f.name,
                f.len()
            )));
        }
        for f in &fields {
            if let Some(v) = f.values.iter().find(|v| !alphabet.is_normalized(v)) {
                return Err(Error::InvalidParameter(format!(
                    "field `{}` holds unnormalized value {v:?}",
                    f.name
                )));
            }
        }
        Ok(Table {
            fields,
            record_count,
            alphabet,
        })
    }

    pub fn fields(&self) -> &[FieldColumn] {
        &self.fields
    }

    pub fn field_count(&self) -> usize {
        self.fields.len()
    }

    pub fn record_count(&self) -> usize {
        self.record_count
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn field_names(&self) -> Vec<String> {
        self.fields.iter().map(|f| f.name.clone()).collect()
    }

    pub fn field(&self, name: &str) -> Result<&FieldColumn> {
        self.fields
            .iter()
            .find(|f| f.name == name)
            .ok_or_else(|| Error::UnknownField {
                name: name.to_string(),
                available: self.field_names(),
            })
    }

    fn rows(&self, range: std::ops::Range<usize>) -> Table {
        Table {
            fields: self.fields.iter().map(|f| f.rows(range.clone())).collect(),
            record_count: range.len(),
            alphabet: self.alphabet.clone(),
        }
    }

    /// Writes `preamble` verbatim, then the table as CSV. Meant for the
    /// comment lines produced by [`crate::report::text_header`], which
    /// [`read_table`] skips again.
    pub fn write_csv_with_header<W: Write>(&self, preamble: &str, mut out: W) -> Result<()> {
        out.write_all(preamble.as_bytes()).map_err(|source| Error::Io {
            path: PathBuf::from("<output>"),
            source,
        })?;
        self.write_csv(out)
    }

    /// Writes the (normalized) table back out as CSV with a header row.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let to_err = |source: csv::Error| {
            let path = PathBuf::from("<output>");
            if !source.is_io_error() {
                return Error::Csv { path, source };
            }
            let source = match source.into_kind() {
                csv::ErrorKind::Io(e) => e,
                other => std::io::Error::other(format!("{other:?}")),
            };
            Error::Io { path, source }
        };
        w.write_record(self.fields.iter().map(|f| f.name.as_str()))
            .map_err(to_err)?;
        for row in 0..self.record_count {
            w.write_record(self.fields.iter().map(|f| f.values[row].as_str()))
                .map_err(to_err)?;
        }
        w.flush().map_err(|source| Error::Io {
            path: PathBuf::from("<output>"),
            source,
        })
    }
}

/// Reads a CSV file with a mandatory header row, normalizing every value.
pub fn load_table(path: impl AsRef<Path>, alphabet: &Alphabet) -> Result<Table> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_table(file, path, alphabet)
}

/// Comment lines that may precede the header of a CSV written by
/// [`Table::write_csv_with_header`].
const PREAMBLE: [&str; 2] = ["# fieldmatch format ", "# config "];

/// Like [`load_table`] but from any reader; `label` is used in error messages.
/// Leading provenance lines (`# fieldmatch format …`, `# config …`) are
/// skipped.
pub fn read_table<R: Read>(reader: R, label: &Path, alphabet: &Alphabet) -> Result<Table> {
    let csv_err = |source| Error::Csv {
        path: label.to_path_buf(),
        source,
    };
    let io_err = |source| Error::Io {
        path: label.to_path_buf(),
        source,
    };
    // skip the provenance comment lines this crate writes above CSV output
    let mut reader = BufReader::new(reader);
    loop {
        let head = reader.fill_buf().map_err(io_err)?;
        if !PREAMBLE.iter().any(|p| head.starts_with(p.as_bytes())) {
            break;
        }
        reader.read_until(b'\n', &mut Vec::new()).map_err(io_err)?;
    }
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);
    let header = rdr.byte_headers().map_err(csv_err)?.clone();
    if header.is_empty() {
        return Err(Error::MissingHeader {
            path: label.to_path_buf(),
        });
    }
    let mut columns: Vec<Vec<String>> = vec![Vec::new(); header.len()];
    let mut record = csv::ByteRecord::new();
    let mut row = 0u64;
    while rdr.read_byte_record(&mut record).map_err(csv_err)? {
        row += 1;
        if record.len() != header.len() {
            return Err(Error::RaggedRow {
                path: label.to_path_buf(),
                row,
                expected: header.len(),
                found: record.len(),
            });
        }
        for (col, raw) in columns.iter_mut().zip(record.iter()) {
            col.push(alphabet.normalize(&String::from_utf8_lossy(raw)));
        }
    }
    let fields = header
        .iter()
        .zip(columns)
        .map(|(name, values)| FieldColumn {
            name: String::from_utf8_lossy(name).into_owned(),
            values,
        })
        .collect();
    Ok(Table {
        fields,
        record_count: row as usize,
        alphabet: alphabet.clone(),
    })
}

/// Default modal-frequency cut-off for [`filter_fields`].
pub const DEFAULT_FILTER_THRESHOLD: f64 = 0.99;

/// Drops every field whose most common value makes up at least `threshold`
/// of its values. Columns with no values are dropped as well.
pub fn filter_fields(table: &Table, threshold: f64) -> Result<Table> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "filter threshold must be in (0, 1], got {threshold}"
        )));
    }
    let fields = table
        .fields
        .iter()
        .filter(|f| f.modal_frequency().is_some_and(|m| m < threshold))
        .cloned()
        .collect();
    Ok(Table {
        fields,
        record_count: table.record_count,
        alphabet: table.alphabet.clone(),
    })
}

/// Splits off the first `n` and the last `n` rows.
pub fn split_subsamples(table: &Table, n: usize) -> Result<(Table, Table)> {
    let records = table.record_count;
    if n.checked_mul(2).is_none_or(|twice| twice > records) {
        return Err(Error::SubsampleTooLarge {
            requested: n,
            records,
            max: records / 2,
        });
    }
    Ok((table.rows(0..n), table.rows(records - n..records)))
}
