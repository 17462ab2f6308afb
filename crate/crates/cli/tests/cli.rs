use std::process::{Command, Output};

fn fdviews(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fdviews"))
        .args(args)
        .current_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/../.."))
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn check_lemmas_passes_with_summary() {
    let o = fdviews(&["check", "--suite", "lemmas", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("CHECK lemmas/scale(2)/classification PASS"));
    assert!(out.lines().last().unwrap().starts_with("SUMMARY suite=lemmas seed=7"));
}

#[test]
fn check_json_is_one_object() {
    let o = fdviews(&["check", "--suite", "lemmas", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["suite"], "lemmas");
    assert!(v["reports"].as_array().unwrap().len() > 10);
}

#[test]
fn unknown_suite_is_a_usage_error() {
    assert_eq!(fdviews(&["check", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(fdviews(&["bench", "models/eq20.mod", "--mode", "fast"]).status.code(), Some(2));
    assert_eq!(fdviews(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn four_queens_has_two_solutions() {
    let o = fdviews(&["model-run", "models/queens4_all.mod"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("SOLUTION")).count(), 2);
    assert!(out.contains("SOLUTION q1=2 q2=4 q3=1 q4=3"));
}

#[test]
fn trivial_and_inconsistent_models() {
    let o = fdviews(&["model-run", "models/trivial.mod"]);
    assert!(stdout(&o).starts_with("SOLUTION x=1 y=3"));
    let o = fdviews(&["model-run", "models/unsat.mod", "--mode", "decomposed"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("UNSAT"));
}

#[test]
fn alpha_solution() {
    let o = fdviews(&["model-run", "models/alpha.mod"]);
    let out = stdout(&o);
    for kv in ["a=5", "b=13", "e=20", "z=18", "v=26", "u=1"] {
        assert!(out.split_whitespace().any(|t| t == kv), "{kv} missing in {out}");
    }
}

#[test]
fn missing_and_malformed_models_exit_one() {
    assert_eq!(fdviews(&["bench", "models/absent.mod"]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.mod");
    std::fs::write(&bad, "var int x 0 3\ncon linear 1 2*y eq\n").unwrap();
    let o = fdviews(&["model-run", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn bench_both_reports_relative_line() {
    let o = fdviews(&["bench", "models/queens.mod", "--n", "10", "--mode", "both", "--reps", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let rel = out.lines().find(|l| l.starts_with("RELATIVE")).unwrap();
    assert!(rel.contains("same_nodes=true"));
    let space: f64 = rel
        .split_whitespace()
        .find_map(|t| t.strip_prefix("space_pct="))
        .unwrap()
        .parse()
        .unwrap();
    assert!(space > 100.0);
}

#[test]
fn bench_csv_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.csv");
    let o = fdviews(&[
        "bench", "models/eq20.mod", "--mode", "derived", "--reps", "1", "--format", "csv", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("model,mode,reps,time_ms"));
    assert!(lines[1].starts_with("eq20,derived,1,"));
}

#[test]
fn same_seed_same_report() {
    let a = fdviews(&["check", "--suite", "events", "--seed", "3"]);
    let b = fdviews(&["check", "--suite", "events", "--seed", "3"]);
    assert_eq!(a.stdout, b.stdout);
}
