use crate::config::RunConfig;
use anyhow::{bail, Context, Result};
use fieldmatch::eval::{default_fixture, generate_synthetic_table, self_match_experiment, size_sweep, FieldSpec};
use fieldmatch::ingest::{filter_fields, load_table};
use fieldmatch::matcher::match_matrices;
use fieldmatch::models::{find_anomalies, fit_apositional, fit_positional, inspect_apositional, inspect_positional};
use fieldmatch::models::{Anomaly, PatternReport};
use fieldmatch::{report, Error, Table};
use serde::Serialize;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

/// Config echo written into every output: the command, its inputs and the
/// resolved settings.
fn provenance(command: &str, inputs: &[&Path], cfg: &RunConfig) -> Result<Value> {
    let inputs: Vec<String> = inputs.iter().map(|p| p.display().to_string()).collect();
    Ok(json!({
        "command": command,
        "inputs": inputs,
        "settings": serde_json::to_value(cfg)?,
    }))
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|source| Error::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

fn out_dir(cfg: &RunConfig) -> Result<PathBuf> {
    let dir = cfg.out_dir();
    std::fs::create_dir_all(&dir).map_err(|source| Error::Io {
        path: dir.clone(),
        source,
    })?;
    Ok(dir)
}

fn load(path: &Path, cfg: &RunConfig) -> Result<Table> {
    Ok(load_table(path, &cfg.alphabet()?)?)
}

pub fn run_match(a: &Path, b: &Path, cfg: &RunConfig) -> Result<()> {
    let echo = provenance("match", &[a, b], cfg)?;
    let mut sides = Vec::with_capacity(2);
    for path in [a, b] {
        let table = filter_fields(&load(path, cfg)?, cfg.threshold)?;
        if table.field_count() == 0 {
            return Err(Error::EmptyTable)
                .with_context(|| format!("{}: no field survives the {} filter", path.display(), cfg.threshold));
        }
        sides.push(table);
    }
    let matrices = match_matrices(&sides[0], &sides[1], &cfg.scorers, &cfg.match_config()?)?;

    let dir = out_dir(cfg)?;
    let mut summary = String::new();
    for m in &matrices {
        let id = m.scorer.id();
        write_file(&dir, &format!("match_{id}.tsv"), &report::matrix_tsv(m, &echo))?;
        write_file(&dir, &format!("match_{id}.json"), &report::matrix_json(m, &echo)?)?;
        let top = report::top_pairs_text(m, cfg.top, &echo);
        write_file(&dir, &format!("top_{id}.txt"), &top)?;
        if summary.is_empty() {
            summary = top;
        }
    }
    print!("{summary}");
    eprintln!("wrote {} matrices to {}", matrices.len(), dir.display());
    Ok(())
}

pub fn run_eval(table: Option<&Path>, synthetic: bool, cfg: &RunConfig) -> Result<()> {
    let (data, label) = match (table, synthetic) {
        (Some(path), false) => (load(path, cfg)?, path.to_path_buf()),
        (None, true) => {
            let largest = cfg.sizes.iter().copied().chain([cfg.n]).max().unwrap_or(cfg.n);
            let rows = cfg.rows.unwrap_or(2 * largest);
            (generate_synthetic_table(&default_fixture(), rows, cfg.seed)?, PathBuf::from("<synthetic>"))
        }
        _ => bail!("eval needs exactly one of TABLE or --synthetic"),
    };
    let echo = provenance("eval", &[&label], cfg)?;
    let experiment = cfg.experiment_config()?;
    let result = self_match_experiment(&data, cfg.n, &cfg.scorers, &experiment)?;

    let dir = out_dir(cfg)?;
    write_file(&dir, "report.json", &report::json_document("experiment", &echo, &result)?)?;
    for r in &result.results {
        write_file(&dir, &format!("roc_{}.csv", r.scorer.id()), &report::roc_csv(&r.roc, &echo))?;
    }
    let summary = report::auc_summary_text(&result, &echo);
    write_file(&dir, "auc_summary.txt", &summary)?;
    print!("{summary}");

    if !cfg.sizes.is_empty() {
        let sweep = size_sweep(&data, &cfg.sizes, &cfg.scorers, &experiment);
        write_file(&dir, "size_sweep.json", &report::json_document("size_sweep", &echo, &sweep)?)?;
        let text = report::size_sweep_text(&sweep, &echo);
        write_file(&dir, "size_sweep.txt", &text)?;
        println!();
        print!("{text}");
    }
    Ok(())
}

#[derive(Serialize)]
struct Inspection<'a> {
    field: &'a str,
    records: usize,
    positional: PatternReport,
    apositional: PatternReport,
    anomalies: Vec<Anomaly>,
}

/// File-name-safe form of a field name.
fn sanitize(name: &str) -> String {
    let s: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect();
    if s.is_empty() {
        "field".into()
    } else {
        s
    }
}

pub fn run_inspect(path: &Path, field: &str, cfg: &RunConfig) -> Result<()> {
    let echo = provenance("inspect", &[path], cfg)?;
    let table = load(path, cfg)?;
    let column = table.field(field)?;
    let alphabet = table.alphabet();
    let pos = fit_positional(column.iter(), alphabet);
    let apos = fit_apositional(column.iter(), alphabet);
    let found = Inspection {
        field,
        records: column.len(),
        positional: inspect_positional(&pos, cfg.beta, cfg.threshold),
        apositional: inspect_apositional(&apos, cfg.beta, cfg.threshold),
        anomalies: find_anomalies(column.iter(), &pos, &apos, cfg.threshold),
    };
    let dir = out_dir(cfg)?;
    let name = format!("patterns_{}.json", sanitize(field));
    write_file(&dir, &name, &report::json_document("patterns", &echo, &found)?)?;
    print!("{}", inspection_text(&found));
    Ok(())
}

const ANOMALIES_SHOWN: usize = 20;

fn inspection_text(found: &Inspection) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "field {} ({} values)", found.field, found.records);
    let lengths: Vec<String> = found
        .positional
        .lengths
        .iter()
        .map(|l| format!("{}:{:.3}", l.length, l.frequency))
        .collect();
    let _ = writeln!(out, "lengths {}", lengths.join(" "));
    for p in &found.positional.positions {
        let dominant: Vec<String> = p.dominant().map(|c| format!("'{}' {:.4}", c.symbol, c.frequency)).collect();
        if !dominant.is_empty() {
            let _ = writeln!(out, "position {} dominant {}", p.position.unwrap_or(0), dominant.join(", "));
        }
    }
    for p in &found.apositional.positions {
        for c in p.dominant() {
            let _ = writeln!(out, "pooled dominant '{}' {:.4}", c.symbol, c.frequency);
        }
    }
    let _ = writeln!(out, "{} anomalous values", found.anomalies.len());
    for a in found.anomalies.iter().take(ANOMALIES_SHOWN) {
        let causes: Vec<String> = a
            .causes
            .iter()
            .map(|c| match c.position {
                Some(p) => format!("'{}' at {p} ({:.4})", c.symbol, c.frequency),
                None => format!("'{}' pooled ({:.4})", c.symbol, c.frequency),
            })
            .collect();
        let _ = writeln!(out, "  row {}: {:?} {}", a.row, a.value, causes.join(", "));
    }
    if found.anomalies.len() > ANOMALIES_SHOWN {
        let _ = writeln!(out, "  ... {} more", found.anomalies.len() - ANOMALIES_SHOWN);
    }
    out
}

/// Writes a table with its provenance preamble to `out/name`, or to stdout
/// when no output directory is set.
fn emit_table(table: &Table, name: &str, echo: &Value, cfg: &RunConfig) -> Result<()> {
    let head = report::text_header(echo);
    match &cfg.out {
        Some(_) => {
            let path = out_dir(cfg)?.join(name);
            let file = std::fs::File::create(&path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            table.write_csv_with_header(&head, std::io::BufWriter::new(file))?;
            eprintln!("wrote {}", path.display());
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            table.write_csv_with_header(&head, &mut lock)?;
            lock.flush()?;
        }
    }
    Ok(())
}

pub fn run_normalize(path: &Path, cfg: &RunConfig) -> Result<()> {
    let echo = provenance("normalize", &[path], cfg)?;
    let table = load(path, cfg)?;
    emit_table(&table, "normalized.csv", &echo, cfg)
}

pub fn run_generate(spec: Option<&Path>, cfg: &RunConfig) -> Result<()> {
    let specs: Vec<FieldSpec> = match spec {
        None => default_fixture(),
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("invalid field specs in {}", p.display()))?
        }
    };
    let rows = cfg.rows.unwrap_or(2 * cfg.n);
    let table = generate_synthetic_table(&specs, rows, cfg.seed)?;
    let label = spec.map_or_else(|| PathBuf::from("<default fixture>"), Path::to_path_buf);
    let echo = provenance("generate", &[&label], cfg)?;
    emit_table(&table, "synthetic.csv", &echo, cfg)
}
