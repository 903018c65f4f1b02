use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn opart(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opart"))
        .args(args)
        .env_remove("OPART_DIGITS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn compute_writes_cache_and_reports_digit_count() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("table.txt");
    let o = opart(&["compute", "--max", "100", "--cache", path_str(&cache)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("p̄(100) has "), "{}", stdout(&o));
    assert!(cache.exists());
    let table = opart::cache::load_table(&cache).unwrap();
    assert_eq!(table.n_max(), 100);
    assert_eq!(table.value(4).unwrap().to_string(), "14");
}

#[test]
fn method_choice_does_not_change_checksum() {
    let sums: Vec<String> = ["series", "sparse", "both"]
        .iter()
        .map(|m| {
            let s = stdout(&opart(&["compute", "--max", "300", "--method", m]));
            s.rsplit("checksum ").next().unwrap().trim_end_matches(")\n").to_string()
        })
        .collect();
    assert_eq!(sums[0], sums[1]);
    assert_eq!(sums[1], sums[2]);
}

#[test]
fn empty_range_is_a_usage_error() {
    let o = opart(&["verify", "theorem1", "--alpha", "0", "--from", "4522", "--to", "4521"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn below_threshold_needs_exploratory() {
    let o = opart(&["verify", "corollary1", "--alpha", "1", "--from", "18", "--to", "18"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn counterexample_exits_one_with_detail() {
    let o = opart(&["verify", "corollary1", "--alpha", "1", "--from", "18", "--to", "18", "--exploratory"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("18"), "{err}");
}

#[test]
fn unknown_flag_and_bad_alpha_exit_two() {
    assert_eq!(opart(&["compute", "--max", "5", "--bogus"]).status.code(), Some(2));
    assert_eq!(opart(&["verify", "lemma4", "--alpha", "-1"]).status.code(), Some(2));
    assert_eq!(opart(&["verify", "lemma4", "--alpha", "0"]).status.code(), Some(2));
    assert_eq!(opart(&["--digits", "10", "estimate", "--n", "5"]).status.code(), Some(2));
}

#[test]
fn help_exits_zero() {
    assert_eq!(opart(&["--help"]).status.code(), Some(0));
}

#[test]
fn corrupt_cache_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("table.txt");
    std::fs::write(&cache, "not a table\n").unwrap();
    let o = opart(&["verify", "lemma3", "--from", "38", "--to", "40", "--cache", path_str(&cache)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn estimate_contains_exact_value() {
    let o = opart(&["estimate", "--n", "100"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("contains_exact = true"), "{s}");
}

fn json(args: &[&str], digits_env: Option<&str>) -> Value {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_opart"));
    cmd.args(args).env_remove("OPART_DIGITS");
    if let Some(d) = digits_env {
        cmd.env("OPART_DIGITS", d);
    }
    let o = cmd.output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn digits_env_is_honoured_and_flag_wins() {
    let args = ["--format", "json", "verify", "lemma4", "--from", "7", "--to", "9"];
    let v = json(&args, Some("60"));
    assert_eq!(v["header"]["digits"], 60);
    let mut with_flag = vec!["--digits", "80"];
    with_flag.extend_from_slice(&args);
    let v = json(&with_flag, Some("60"));
    assert_eq!(v["header"]["digits"], 80);
}

#[test]
fn output_is_deterministic_across_runs_and_jobs() {
    let run = |jobs: &str| {
        let o = opart(&["--format", "csv", "--jobs", jobs, "verify", "corollary3", "--from", "2", "--to", "60"]);
        assert_eq!(o.status.code(), Some(0));
        o.stdout
    };
    let a = run("1");
    assert_eq!(a, run("1"));
    assert_eq!(a, run("3"));
}

#[test]
fn csv_and_json_carry_the_same_records() {
    let args = ["verify", "lemma2", "--from", "2", "--to", "20"];
    let mut csv_args = vec!["--format", "csv"];
    csv_args.extend_from_slice(&args);
    let csv = stdout(&opart(&csv_args));
    let mut json_args = vec!["--format", "json"];
    json_args.extend_from_slice(&args);
    let v = json(&json_args, None);
    let rows: Vec<Vec<String>> = csv
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    let records = v["records"].as_array().unwrap();
    assert_eq!(rows.len(), records.len());
    let text = |x: &Value| x.as_str().map(str::to_string).unwrap_or_default();
    for (row, rec) in rows.iter().zip(records) {
        assert_eq!(row[0], rec["n"].to_string());
        assert_eq!(row[1], text(&rec["lower"]));
        assert_eq!(row[2], text(&rec["middle"]));
        assert_eq!(row[3], text(&rec["upper"]));
        assert_eq!(row[4], text(&rec["margin"]));
        assert_eq!(row[5], text(&rec["pass"]));
    }
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rows.csv");
    let o = opart(&["--format", "csv", "--output", path_str(&out), "table", "asymptotic", "--points", "100,200"]);
    assert_eq!(o.status.code(), Some(0));
    let s = std::fs::read_to_string(&out).unwrap();
    assert!(s.lines().any(|l| l.starts_with("100,")), "{s}");
    assert!(s.lines().any(|l| l.starts_with("200,")), "{s}");
}
