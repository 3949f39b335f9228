use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_boolspec")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn tables_suite_passes() {
    let o = run(&["verify", "--suite", "tables", "--failures", "stdout"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS"));
}

#[test]
fn scan_writes_a_row_per_function() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    let o = run(&["scan", "--n", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read_to_string(out).unwrap().lines().count(), 257);
}

#[test]
fn analyze_family() {
    let o = run(&["analyze", "--family", "ad_tt", "--t", "8", "--tprime", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((&v["profile"]["delta"]["num"], &v["profile"]["delta"]["den"]), (&Value::from(1), &Value::from(8)));
    let chang = v["bounds"]["chang_best"].as_f64().unwrap();
    assert!((chang - 0.0709).abs() < 1e-3, "{chang}");
}

#[test]
fn construct_then_napdt() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("and3.txt");
    let o = run(&["construct", "--family", "and", "--n", "3", "--out", table.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["napdt", "--input", table.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["count"], 3);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["analyze"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn failure_json_is_deterministic() {
    let a = run(&["verify", "--suite", "napdt", "--samples", "20", "--seed", "7", "--failures", "stdout"]);
    let b = run(&["verify", "--suite", "napdt", "--samples", "20", "--seed", "7", "--failures", "stdout"]);
    let json = |o: &Output| stdout(o).lines().filter(|l| l.starts_with('[') || l.starts_with('{')).map(String::from).collect::<Vec<_>>();
    assert!(!json(&a).is_empty());
    assert_eq!(json(&a), json(&b));
}

#[test]
fn plotdata_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.csv");
    let o = run(&["plotdata", "--kind", "kprime", "--rho", "8", "--kappa", "4096", "--points", "16", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(fs::read_to_string(out).unwrap().lines().count(), 17);
}
