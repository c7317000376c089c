use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_compdyn")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = run(&full);
    (out.status.code().unwrap(), serde_json::from_slice(&out.stdout).expect("one JSON document"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap()
}

#[test]
fn verify_reports_periodic_composite_row() {
    let out = run(&["verify", "--theorem", "2.4"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("G(0,q): periodic under gf"));
}

#[test]
fn verify_all_is_one_document_with_consistent_summary() {
    let (code, doc) = json(&["verify", "--theorem", "all"]);
    assert_eq!(code, 0);
    assert_eq!(doc["schema_version"], 1);
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(doc["summary"]["total"].as_u64().unwrap() as usize, rows.len());
    let passed = rows.iter().filter(|r| r["passed"] == true).count();
    assert_eq!(doc["summary"]["passed"].as_u64().unwrap() as usize, passed);
    assert_eq!(doc["summary"]["failed"], 0);
}

#[test]
fn json_is_byte_identical_across_runs_and_strategies() {
    let a = run(&["--format", "json", "table", "--theorem", "2.11"]).stdout;
    let b = run(&["--format", "json", "table", "--theorem", "2.11"]).stdout;
    let c = run(&["--format", "json", "--sequential", "table", "--theorem", "2.11"]).stdout;
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn classify_remark_example() {
    let (code, doc) = json(&["classify", "--theorem", "2.11", "--region", "B4", "--map", "gf"]);
    assert_eq!(code, 0);
    assert_eq!(doc["rows"][0]["class"]["kind"], "periodic");
}

#[test]
fn classify_grid_region_and_alias() {
    let (_, doc) = json(&["classify", "--theorem", "wandering-to-periodic", "--region", "G(0,3)", "--map", "g"]);
    assert_eq!(doc["rows"][0]["class"]["kind"], "wandering");
    assert_eq!(doc["rows"][0]["region"], "G(0,3)");
}

#[test]
fn user_specs_are_flagged_schedule_level() {
    let spec = fixture("ok.sched");
    let (code, doc) = json(&["classify", "--spec", spec.to_str().unwrap(), "--region", "B2", "--map", "gf"]);
    assert_eq!(code, 0);
    assert!(doc["notes"][0].as_str().unwrap().starts_with("schedule-level only"));
    assert_eq!(doc["rows"][0]["class"]["kind"], "preperiodic");
}

#[test]
fn modulus_example() {
    let (code, doc) = json(&["modulus", "--center", "2"]);
    assert_eq!(code, 0);
    let row = &doc["rows"][0];
    assert!((row["radius"].as_f64().unwrap() - 0.223_143_551_314_209_7).abs() < 1e-15);
    assert_eq!(row["agrees"], true);
    assert_eq!(run(&["modulus", "--center", "-1"]).status.code(), Some(3));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["validate", fixture("ok.sched").to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(run(&["validate", fixture("gap.sched").to_str().unwrap()]).status.code(), Some(3));
    assert_eq!(run(&["validate", "/definitely/missing.sched"]).status.code(), Some(4));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.sched");
    std::fs::write(&bad, "mode = linear\n[f]\nBASE => BASE\n").unwrap();
    let out = run(&["--format", "json", "validate", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["error"]["code"], "E_SYNTAX");
    assert_eq!(doc["error"]["line"], 3);
}

#[test]
fn broken_family_exits_one() {
    let out = run(&["check-family", "--window", "12", "--step", "0.25", "--family", "half-plane"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["check-family", "--window", "12", "--step", "0.25"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn diagrams_match_golden_files() {
    let dir = tempfile::tempdir().unwrap();
    for (id, name) in [("2.5", "thm_2_5_w12.svg"), ("2.1", "thm_2_1_w12.svg")] {
        let out = dir.path().join(name);
        let status = run(&["diagram", "--theorem", id, "--window", "12", "--out", out.to_str().unwrap()]).status;
        assert_eq!(status.code(), Some(0));
        assert_eq!(std::fs::read_to_string(&out).unwrap(), golden(name), "{name}");
    }
}
