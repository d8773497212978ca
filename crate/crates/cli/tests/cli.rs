use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fieldmatch"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn ok(args: &[&str]) -> Output {
    let o = run(args);
    assert!(o.status.success(), "{args:?} failed: {}", stderr(&o));
    o
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Data lines of a TSV matrix as (row name, cells).
fn matrix(path: &Path) -> (Vec<String>, Vec<(String, Vec<f64>)>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let cols = lines.next().unwrap().split('\t').skip(1).map(String::from).collect();
    let rows = lines
        .map(|l| {
            let mut parts = l.split('\t');
            let name = parts.next().unwrap().to_string();
            (name, parts.map(|c| c.parse().unwrap()).collect())
        })
        .collect();
    (cols, rows)
}

fn write_csv(dir: &Path, name: &str, header: &str, rows: impl IntoIterator<Item = String>) -> PathBuf {
    let mut text = format!("{header}\n");
    for r in rows {
        text.push_str(&r);
        text.push('\n');
    }
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

const SURNAMES: [&str; 12] = [
    "SMITH", "JOHNSON", "WILLIAMS", "BROWN", "JONES", "MILLER", "DAVIS", "GARCIA", "WILSON", "TAYLOR", "MOORE", "CLARK",
];

fn small_tables(dir: &Path) -> (PathBuf, PathBuf) {
    let a = write_csv(
        dir,
        "a.csv",
        "zip,name,phone",
        (0..60).map(|i| format!("{:05},{},555-{:04}", 10000 + i * 37, SURNAMES[i % 9], i * 13)),
    );
    let b = write_csv(
        dir,
        "b.csv",
        "postcode,surname,tel",
        (0..40).map(|i| format!("{:05},{},555-{:04}", 20000 + i * 91, SURNAMES[(i * 5 + 2) % 12], i * 7)),
    );
    (a, b)
}

#[test]
fn match_writes_one_three_by_three_matrix_per_scorer() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = small_tables(dir.path());
    let out = dir.path().join("out");
    let o = ok(&["match", p(&a), p(&b), "--out", p(&out)]);
    assert!(stdout(&o).contains("zip"));
    for id in [
        "apositional",
        "positional",
        "discrete",
        "euclid-sorted",
        "euclid-unsorted",
        "entropy-diff",
        "jaccard",
        "pmi",
    ] {
        let (cols, rows) = matrix(&out.join(format!("match_{id}.tsv")));
        assert_eq!(cols, ["postcode", "surname", "tel"], "{id}");
        assert_eq!(rows.len(), 3, "{id}");
        let cells: usize = rows.iter().map(|(_, r)| r.len()).sum();
        assert_eq!(cells, 9, "{id}");
        let json: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(out.join(format!("match_{id}.json"))).unwrap()).unwrap();
        assert_eq!(json["format_version"], 1);
        assert_eq!(json["data"]["scores"].as_array().unwrap().len(), 9);
        assert_eq!(json["config"]["command"], "match");
        assert!(out.join(format!("top_{id}.txt")).exists());
    }
    // like formats pair up under the apositional model
    let (_, rows) = matrix(&out.join("match_apositional.tsv"));
    for (i, (name, row)) in rows.iter().enumerate() {
        let best = (0..3).max_by(|&x, &y| row[x].total_cmp(&row[y])).unwrap();
        assert_eq!(best, i, "{name}");
    }
}

#[test]
fn same_file_twice_puts_each_row_maximum_on_the_diagonal() {
    let dir = tempfile::tempdir().unwrap();
    let table = write_csv(
        dir.path(),
        "varied.csv",
        "id,date,zip,name,phone,code",
        (0..300).map(|i| {
            format!(
                "{},{}-{:02}-{:02},{:05},{},({:03}) {:03}-{:04},{}",
                1_000_000 + i * 7,
                2000 + i % 20,
                1 + i % 12,
                1 + i % 28,
                (i * 7919) % 100_000,
                ["SMITH", "JONES", "GARCIA", "LEE", "NGUYEN", "PATEL", "KIM"][i % 7],
                200 + i % 700,
                (i * 31) % 1000,
                (i * 97) % 10_000,
                ["A1", "B2", "C3", "D4"][i % 4],
            )
        }),
    );
    let out = dir.path().join("out");
    ok(&["match", p(&table), p(&table), "--scorers", "apositional,positional,discrete", "--out", p(&out)]);
    for id in ["apositional", "positional", "discrete"] {
        let (_, rows) = matrix(&out.join(format!("match_{id}.tsv")));
        assert_eq!(rows.len(), 6);
        for (i, (name, row)) in rows.iter().enumerate() {
            let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            assert_eq!(row[i], max, "{id}: {name} {row:?}");
        }
    }
}

#[test]
fn missing_file_exits_nonzero_with_message() {
    let dir = tempfile::tempdir().unwrap();
    let (a, _) = small_tables(dir.path());
    let missing = dir.path().join("nope.csv");
    let o = run(&["match", p(&a), p(&missing), "--out", p(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("nope.csv"), "{}", stderr(&o));
}

#[test]
fn synthetic_eval_reports_every_default_scorer() {
    let dir = tempfile::tempdir().unwrap();
    let o = ok(&["eval", "--synthetic", "--seed", "1", "--out", p(dir.path())]);
    let summary = stdout(&o);
    let ids = [
        "apositional",
        "positional",
        "discrete",
        "euclid-sorted",
        "euclid-unsorted",
        "entropy-diff",
        "jaccard",
        "pmi",
    ];
    for id in ids {
        assert!(summary.lines().any(|l| l.starts_with(&format!("{id} "))), "{id} missing:\n{summary}");
        let roc = fs::read_to_string(dir.path().join(format!("roc_{id}.csv"))).unwrap();
        assert!(roc.lines().any(|l| l == "fpr,tpr,threshold"));
    }
    assert!(summary.contains("subsample size 5000"));
    assert!(!summary.contains("mle-"));
    assert_eq!(summary, fs::read_to_string(dir.path().join("auc_summary.txt")).unwrap());
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["data"]["results"].as_array().unwrap().len(), 8);
    assert_eq!(report["config"]["settings"]["n"], 5000);

    let o = ok(&["eval", "--synthetic", "--n", "200", "--scorers", "all", "--out", p(dir.path())]);
    let summary = stdout(&o);
    for id in ["mle-apositional", "mle-positional", "mle-discrete"] {
        assert!(summary.contains(id), "{summary}");
    }
}

#[test]
fn size_sweep_has_one_column_per_size() {
    let dir = tempfile::tempdir().unwrap();
    let o = ok(&["eval", "--synthetic", "--n", "500", "--sizes", "500,5000", "--out", p(dir.path())]);
    let text = fs::read_to_string(dir.path().join("size_sweep.txt")).unwrap();
    assert!(stdout(&o).contains(&text[text.find("scorer").unwrap()..]));
    let rows: Vec<Vec<&str>> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('-'))
        .map(|l| l.split_whitespace().collect())
        .collect();
    assert_eq!(rows[0], ["scorer", "500", "5000"]);
    assert_eq!(rows.len(), 9);
    for r in &rows[1..] {
        assert_eq!(r.len(), 3);
        for auc in &r[1..] {
            let v: f64 = auc.parse().unwrap();
            assert!((0.0..=1.0).contains(&v));
        }
    }
}

#[test]
fn oversized_subsample_is_a_clear_error() {
    let dir = tempfile::tempdir().unwrap();
    let (a, _) = small_tables(dir.path());
    let o = run(&["eval", p(&a), "--n", "31", "--out", p(dir.path())]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("31") && err.contains("too large") && err.contains("maximum 30"), "{err}");
}

fn inspect(dir: &Path, table: &Path, field: &str) -> (String, serde_json::Value) {
    let o = ok(&["inspect", p(table), field, "--out", p(dir)]);
    let json = fs::read_to_string(dir.join(format!("patterns_{field}.json"))).unwrap();
    (stdout(&o), serde_json::from_str(&json).unwrap())
}

#[test]
fn injected_letter_in_zip_is_an_anomaly() {
    let dir = tempfile::tempdir().unwrap();
    let rows = (0..500).map(|i| if i == 321 { "9O210".to_string() } else { format!("{:05}", (i * 7919) % 100_000) });
    let table = write_csv(dir.path(), "zips.csv", "zip", rows);
    let (text, json) = inspect(dir.path(), &table, "zip");
    let anomalies = json["data"]["anomalies"].as_array().unwrap();
    assert_eq!(anomalies.len(), 1, "{anomalies:?}");
    assert_eq!(anomalies[0]["row"], 322);
    assert_eq!(anomalies[0]["value"], "9O210");
    assert!(anomalies[0]["causes"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["position"] == 2 && c["symbol"] == "O"));
    assert!(text.contains("9O210"));
}

#[test]
fn constant_field_is_dominant_everywhere() {
    let dir = tempfile::tempdir().unwrap();
    let table = write_csv(dir.path(), "c.csv", "code,other", (0..50).map(|i| format!("AB-7,{i}")));
    let (text, json) = inspect(dir.path(), &table, "code");
    let positions = json["data"]["positional"]["positions"].as_array().unwrap();
    assert_eq!(positions.len(), 4);
    for (j, pos) in positions.iter().enumerate() {
        let dominant: Vec<&serde_json::Value> =
            pos["characters"].as_array().unwrap().iter().filter(|c| c["dominant"] == true).collect();
        assert_eq!(dominant.len(), 1, "position {}", j + 1);
        assert_eq!(dominant[0]["symbol"], ["A", "B", "-", "7"][j]);
    }
    assert_eq!(text.matches("dominant").count(), 4);
    assert!(json["data"]["anomalies"].as_array().unwrap().is_empty());
}

#[test]
fn unknown_field_lists_the_available_ones() {
    let dir = tempfile::tempdir().unwrap();
    let (a, _) = small_tables(dir.path());
    let o = run(&["inspect", p(&a), "zipcode", "--out", p(dir.path())]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("zipcode") && stderr(&o).contains("zip, name, phone"), "{}", stderr(&o));
}

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect()
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = small_tables(dir.path());
    let out = dir.path().join("out");
    let runs: Vec<Vec<String>> = vec![
        vec!["match".into(), p(&a).into(), p(&b).into(), "--scorers".into(), "all".into()],
        vec!["eval".into(), "--synthetic".into(), "--n".into(), "300".into(), "--sizes".into(), "100,300".into()],
        vec!["inspect".into(), p(&a).into(), "phone".into()],
        vec!["generate".into(), "--rows".into(), "50".into(), "--seed".into(), "9".into()],
    ];
    for args in runs {
        let mut args = args;
        args.extend(["--out".into(), p(&out).into()]);
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let _ = fs::remove_dir_all(&out);
        ok(&args);
        let first = snapshot(&out);
        ok(&args);
        assert_eq!(snapshot(&out), first, "{args:?}");
        assert!(first.values().all(|f| f.starts_with(b"# fieldmatch format 1\n") || f.starts_with(b"{")));
    }
}

#[test]
fn worker_count_only_changes_the_config_echo() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = small_tables(dir.path());
    let serial = dir.path().join("serial");
    let parallel = dir.path().join("parallel");
    ok(&["match", p(&a), p(&b), "--workers", "1", "--out", p(&serial)]);
    ok(&["match", p(&a), p(&b), "--workers", "4", "--out", p(&parallel)]);
    for id in ["apositional", "discrete", "pmi"] {
        let name = format!("match_{id}.tsv");
        let (c1, r1) = matrix(&serial.join(&name));
        let (c2, r2) = matrix(&parallel.join(&name));
        assert_eq!((c1, r1), (c2, r2));
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = small_tables(dir.path());
    let code = |args: &[&str]| run(args).status.code();
    assert_eq!(code(&["--help"]), Some(0));
    assert_eq!(code(&["--version"]), Some(0));
    assert_eq!(code(&["match", "--help"]), Some(0));
    assert_eq!(code(&["frobnicate"]), Some(1));
    assert_eq!(code(&["match", p(&a)]), Some(1));
    assert_eq!(code(&["match", p(&a), p(&b), "--alpha", "-1"]), Some(1));
    assert_eq!(code(&["match", p(&a), p(&b), "--prior-same", "1.5"]), Some(1));
    assert_eq!(code(&["match", p(&a), p(&b), "--scorers", "cosine"]), Some(1));
    assert_eq!(code(&["eval"]), Some(1));

    let ragged = write_csv(dir.path(), "ragged.csv", "x,y", ["1,2".into(), "3".into()]);
    assert_eq!(code(&["normalize", p(&ragged)]), Some(2));
    let flat = write_csv(dir.path(), "flat.csv", "x,y", (0..20).map(|_| "1,2".to_string()));
    let o = run(&["match", p(&flat), p(&a), "--out", p(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("no field survives"), "{}", stderr(&o));

    let bad_config = dir.path().join("bad.toml");
    fs::write(&bad_config, "alpah = 2.0\n").unwrap();
    let o = run(&["match", p(&a), p(&b), "--config", p(&bad_config)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("alpah"), "{}", stderr(&o));
}

#[test]
fn config_file_is_overridden_by_flags_and_echoed() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = small_tables(dir.path());
    let config = dir.path().join("run.toml");
    fs::write(&config, "alpha = 9.0\nbeta = 0.5\nscorers = [\"positional\"]\ntop = 1\n").unwrap();
    let out = dir.path().join("out");
    let o = ok(&["match", p(&a), p(&b), "--config", p(&config), "--beta", "2.0", "--out", p(&out)]);
    let files = snapshot(&out);
    assert_eq!(files.len(), 3, "{:?}", files.keys());
    let json: serde_json::Value = serde_json::from_slice(&files["match_positional.json"]).unwrap();
    let settings = &json["config"]["settings"];
    assert_eq!(settings["alpha"], 9.0);
    assert_eq!(settings["beta"], 2.0);
    assert_eq!(settings["top"], 1);
    assert!(stdout(&o).lines().filter(|l| !l.starts_with('#')).all(|l| !l.contains(", ")));
}

#[test]
fn normalized_output_reads_back_unchanged() {
    let dir = tempfile::tempdir().unwrap();
    let raw = write_csv(
        dir.path(),
        "raw.csv",
        "name,note",
        ["o'brien,\"a, b\"".into(), "Zoë ✓,~tilde~".into(), "plain,".into()],
    );
    let once = ok(&["normalize", p(&raw)]).stdout;
    let text = String::from_utf8(once.clone()).unwrap();
    assert!(text.starts_with("# fieldmatch format 1\n# config "));
    assert!(text.contains("O'BRIEN") && text.contains("\"A, B\"") && text.contains("ZO# #"), "{text}");
    let first = dir.path().join("first.csv");
    fs::write(&first, &once).unwrap();
    let twice = ok(&["normalize", p(&first)]).stdout;
    let body = |b: &[u8]| String::from_utf8(b.to_vec()).unwrap().lines().skip(2).collect::<Vec<_>>().join("\n");
    assert_eq!(body(&once), body(&twice));

    let out = dir.path().join("out");
    ok(&["normalize", p(&raw), "--out", p(&out)]);
    assert!(out.join("normalized.csv").exists());
}

#[test]
fn compact_alphabet_maps_the_rest_to_the_placeholder() {
    let dir = tempfile::tempdir().unwrap();
    let raw = write_csv(dir.path(), "bits.csv", "bits", ["0110".into(), "10x1".into()]);
    let o = ok(&["normalize", p(&raw), "--alphabet", "01#"]);
    let text = stdout(&o);
    assert!(text.ends_with("bits\n0110\n10#1\n"), "{text}");
}
