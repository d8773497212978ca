//! Seeded synthetic tables with declared field formats, used as fixtures
//! when the real corpora are not at hand.

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::ingest::{FieldColumn, Table};
use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

const MONTHS: [&str; 12] = ["JAN", "FEB", "MAR", "APR", "MAY", "JUN", "JUL", "AUG", "SEP", "OCT", "NOV", "DEC"];
const CONSONANTS: &[u8] = b"BCDFGHJKLMNPRSTVWZ";
const VOWELS: &[u8] = b"AEIOUY";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DateLayout {
    /// `YYYY-MM-DD`
    IsoDay,
    /// `MMM-YYYY`
    MonthYear,
    /// `MM/DD/YYYY`
    UsDay,
}

/// Column formats. Formats with a `pool` draw that many distinct values and
/// sample them with Zipf weights; a pool of zero draws every row fresh.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldFormat {
    /// Dates over `years` calendar years from `first_year`. Uniform when
    /// `ordered` is false; otherwise the year advances with the row index,
    /// like a table sorted by entry date.
    Date {
        layout: DateLayout,
        first_year: u32,
        years: u32,
        #[serde(default)]
        ordered: bool,
    },
    /// Increasing identifiers: `prefix` then `digits` zero-padded digits,
    /// starting at `start` and advancing by a random step in `1..=max_step`.
    Sequence { prefix: String, digits: usize, start: u64, max_step: u64 },
    /// `prefix` followed by `digits` random digits, drawn from a pool.
    PrefixedId { prefix: String, digits: usize, pool: usize },
    /// Fixed-width digit strings (zip codes), drawn from a pool.
    Digits { len: usize, pool: usize },
    /// Pronounceable letter strings of 2–4 syllables, drawn from a pool.
    Name { pool: usize },
    /// One or two name-like words separated by a space.
    Place { pool: usize },
    /// Decimal amounts `min..=max` in multiples of `step`, two decimals.
    Amount { min: u32, max: u32, step: u32 },
    /// Percentages with two decimals and a trailing `%`.
    Percent { min_bp: u32, max_bp: u32 },
    /// `NNN-NNN-NNNN`, drawn from a pool.
    Phone { pool: usize },
    /// Fixed categories with relative weights (Zipf when `weights` is empty).
    Category { values: Vec<String>, weights: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub name: String,
    pub format: FieldFormat,
}

impl FieldSpec {
    pub fn new(name: &str, format: FieldFormat) -> Self {
        FieldSpec {
            name: name.to_string(),
            format,
        }
    }
}

fn category(values: &[&str], weights: &[f64]) -> FieldFormat {
    FieldFormat::Category {
        values: values.iter().map(|s| s.to_string()).collect(),
        weights: weights.to_vec(),
    }
}

/// Twelve fields shaped like a provider registry: an increasing
/// identifier, dates in two layouts, zip codes, names, places, categories,
/// unique phone numbers, and two sparse issuer columns that share one
/// format spec (the intentionally ambiguous pair).
pub fn default_fixture() -> Vec<FieldSpec> {
    const STATES: [&str; 50] = [
        "CA", "TX", "FL", "NY", "PA", "IL", "OH", "GA", "NC", "MI", "NJ", "VA", "WA", "AZ", "MA", "TN", "IN", "MO",
        "MD", "WI", "CO", "MN", "SC", "AL", "LA", "KY", "OR", "OK", "CT", "UT", "IA", "NV", "AR", "MS", "KS", "NM",
        "NE", "ID", "WV", "HI", "NH", "ME", "MT", "RI", "DE", "SD", "ND", "AK", "VT", "WY",
    ];
    const CREDENTIALS: [&str; 10] = ["MD", "DO", "NP", "PA", "RN", "DDS", "PHD", "LCSW", "PT", "OD"];
    use FieldFormat::*;
    let issuer = category(
        &["", "MEDICAID", "OTHER", "BCBS", "MEDICARE UPIN"],
        &[0.85, 0.07, 0.04, 0.025, 0.015],
    );
    vec![
        FieldSpec::new(
            "npi",
            Sequence {
                prefix: "1".into(),
                digits: 9,
                start: 3_000_000,
                max_step: 40,
            },
        ),
        FieldSpec::new(
            "enumeration_date",
            Date {
                layout: DateLayout::IsoDay,
                first_year: 2005,
                years: 12,
                ordered: false,
            },
        ),
        FieldSpec::new(
            "last_update",
            Date {
                layout: DateLayout::UsDay,
                first_year: 2007,
                years: 10,
                ordered: false,
            },
        ),
        FieldSpec::new("practice_zip", Digits { len: 5, pool: 900 }),
        FieldSpec::new("mailing_zip", Digits { len: 9, pool: 0 }),
        FieldSpec::new("last_name", Name { pool: 20000 }),
        FieldSpec::new("city", Place { pool: 300 }),
        FieldSpec::new("state", category(&STATES, &[])),
        FieldSpec::new("phone", Phone { pool: 0 }),
        FieldSpec::new("credential", category(&CREDENTIALS, &[])),
        FieldSpec::new("other_id_issuer_1", issuer.clone()),
        FieldSpec::new("other_id_issuer_2", issuer),
    ]
}

fn zipf_weights(k: usize) -> Vec<f64> {
    (1..=k).map(|r| 1.0 / r as f64).collect()
}

fn digits(rng: &mut ChaCha8Rng, len: usize) -> String {
    (0..len).map(|_| char::from(b'0' + rng.gen_range(0..10u8))).collect()
}

fn name(rng: &mut ChaCha8Rng) -> String {
    let syllables = rng.gen_range(2..=4);
    let mut s = String::new();
    for _ in 0..syllables {
        s.push(char::from(CONSONANTS[rng.gen_range(0..CONSONANTS.len())]));
        s.push(char::from(VOWELS[rng.gen_range(0..VOWELS.len())]));
        if rng.gen_bool(0.3) {
            s.push(char::from(CONSONANTS[rng.gen_range(0..CONSONANTS.len())]));
        }
    }
    s
}

fn days_in_month(year: u32, month: u32) -> u32 {
    match month {
        2 if (year.is_multiple_of(4) && !year.is_multiple_of(100)) || year.is_multiple_of(400) => 29,
        2 => 28,
        4 | 6 | 9 | 11 => 30,
        _ => 31,
    }
}

/// Draws distinct pool members with `make`, then samples them Zipf-weighted.
/// A pool of zero skips the pool and makes a fresh value for every row.
fn pooled(rng: &mut ChaCha8Rng, pool: usize, rows: usize, mut make: impl FnMut(&mut ChaCha8Rng) -> String) -> Vec<String> {
    if pool == 0 {
        return (0..rows).map(|_| make(rng)).collect();
    }
    let mut members: Vec<String> = Vec::with_capacity(pool);
    let mut seen = std::collections::HashSet::new();
    let mut attempts = 0usize;
    while members.len() < pool && attempts < pool * 50 {
        let v = make(rng);
        if seen.insert(v.clone()) {
            members.push(v);
        }
        attempts += 1;
    }
    let weights = WeightedIndex::new(zipf_weights(members.len())).expect("positive weights");
    (0..rows).map(|_| members[weights.sample(rng)].clone()).collect()
}

fn column(format: &FieldFormat, rows: usize, rng: &mut ChaCha8Rng) -> Result<Vec<String>> {
    Ok(match format {
        FieldFormat::Date {
            layout,
            first_year,
            years,
            ordered,
        } => {
            if *years == 0 {
                return Err(Error::InvalidParameter("date range must span at least one year".into()));
            }
            (0..rows)
                .map(|i| {
                    let offset = if *ordered {
                        (i as u64 * u64::from(*years) / rows as u64) as u32
                    } else {
                        rng.gen_range(0..*years)
                    };
                    let y = first_year + offset;
                    let m = rng.gen_range(1..=12u32);
                    let d = rng.gen_range(1..=days_in_month(y, m));
                    match layout {
                        DateLayout::IsoDay => format!("{y:04}-{m:02}-{d:02}"),
                        DateLayout::MonthYear => format!("{}-{y:04}", MONTHS[m as usize - 1]),
                        DateLayout::UsDay => format!("{m:02}/{d:02}/{y:04}"),
                    }
                })
                .collect()
        }
        FieldFormat::Sequence {
            prefix,
            digits: n,
            start,
            max_step,
        } => {
            if *max_step == 0 {
                return Err(Error::InvalidParameter("sequence step must be positive".into()));
            }
            let mut next = *start;
            (0..rows)
                .map(|_| {
                    let v = format!("{prefix}{next:0n$}", n = *n);
                    next += rng.gen_range(1..=*max_step);
                    v
                })
                .collect()
        }
        FieldFormat::PrefixedId { prefix, digits: n, pool } => {
            pooled(rng, *pool, rows, |r| format!("{prefix}{}", digits(r, *n)))
        }
        FieldFormat::Digits { len, pool } => pooled(rng, *pool, rows, |r| digits(r, *len)),
        FieldFormat::Name { pool } => pooled(rng, *pool, rows, name),
        FieldFormat::Place { pool } => pooled(rng, *pool, rows, |r| {
            if r.gen_bool(0.35) {
                format!("{} {}", name(r), name(r))
            } else {
                name(r)
            }
        }),
        FieldFormat::Amount { min, max, step } => {
            if *step == 0 || max < min {
                return Err(Error::InvalidParameter("amount range needs min <= max and step > 0".into()));
            }
            let steps = (max - min) / step;
            (0..rows)
                .map(|_| format!("{}.00", min + step * rng.gen_range(0..=steps)))
                .collect()
        }
        FieldFormat::Percent { min_bp, max_bp } => {
            if max_bp < min_bp {
                return Err(Error::InvalidParameter("percent range needs min <= max".into()));
            }
            (0..rows)
                .map(|_| {
                    let bp = rng.gen_range(*min_bp..=*max_bp);
                    format!("{}.{:02}%", bp / 100, bp % 100)
                })
                .collect()
        }
        FieldFormat::Phone { pool } => pooled(rng, *pool, rows, |r| {
            format!("{}{}-{}-{}", rng_digit_nonzero(r), digits(r, 2), digits(r, 3), digits(r, 4))
        }),
        FieldFormat::Category { values, weights } => {
            if values.is_empty() {
                return Err(Error::InvalidParameter("category list is empty".into()));
            }
            let w = if weights.is_empty() {
                zipf_weights(values.len())
            } else if weights.len() == values.len() {
                weights.clone()
            } else {
                return Err(Error::InvalidParameter("category weights do not match values".into()));
            };
            let idx = WeightedIndex::new(w).map_err(|e| Error::InvalidParameter(format!("category weights: {e}")))?;
            (0..rows).map(|_| values[idx.sample(rng)].clone()).collect()
        }
    })
}

fn rng_digit_nonzero(rng: &mut ChaCha8Rng) -> char {
    char::from(b'1' + rng.gen_range(0..9u8))
}

/// Deterministic table with one column per spec. Each column has its own
/// stream derived from `seed` and the column index, so adding a field does
/// not perturb the others.
pub fn generate_synthetic_table(specs: &[FieldSpec], rows: usize, seed: u64) -> Result<Table> {
    let alphabet = Alphabet::default();
    let fields = specs
        .iter()
        .enumerate()
        .map(|(i, spec)| {
            let stream = seed ^ (i as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
            let mut rng = ChaCha8Rng::seed_from_u64(stream);
            let raw = column(&spec.format, rows, &mut rng)?;
            Ok(FieldColumn::normalized(spec.name.clone(), raw, &alphabet))
        })
        .collect::<Result<Vec<_>>>()?;
    Table::new(fields, alphabet)
}
