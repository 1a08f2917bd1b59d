use std::process::{Command, Output};

use serde_json::Value;

fn braidrep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_braidrep")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let o = braidrep(&all);
    (serde_json::from_slice(&o.stdout).expect("valid json"), o.status.code().unwrap())
}

#[test]
fn present_counts() {
    let (v, code) = json(&["present", "--group", "mvb", "-n", "3", "-k", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["presentation"]["relations"].as_array().unwrap().len(), 9);
    assert!(v["presentation"].get("forbidden").is_none());
    let (v, _) = json(&["present", "--group", "b", "-n", "3"]);
    assert_eq!(v["presentation"]["relations"].as_array().unwrap().len(), 1);
    let (v, _) = json(&["present", "--group", "mwb", "-n", "3", "-k", "2", "--show-forbidden"]);
    let tags: Vec<&str> =
        v["presentation"]["forbidden"].as_array().unwrap().iter().map(|r| r["tag"].as_str().unwrap()).collect();
    assert!(tags.contains(&"F2") && tags.contains(&"F3") && !tags.contains(&"F1"));
}

#[test]
fn verify_exit_codes() {
    let o = braidrep(&["verify", "--family", "beta7", "-n", "5", "-k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("pass"));
    // Burau-type blocks do not survive the welded move
    let o = braidrep(&["verify", "--family", "beta2", "-n", "3", "-k", "2", "--group", "mwb"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(braidrep(&["verify", "--family", "nope"]).status.code(), Some(2));
    assert_eq!(braidrep(&["verify", "--family", "beta3", "--params", "b=0"]).status.code(), Some(2));
    assert_eq!(braidrep(&["present", "--group", "xyz"]).status.code(), Some(2));
}

#[test]
fn classify_table_and_budget() {
    let (v, code) = json(&["classify", "--group", "mvb", "-k", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["branches"].as_array().unwrap().len(), 9);
    assert_eq!(v["bijection"], true);
    let o = braidrep(&["classify", "--group", "mwb", "-k", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("| ") && !l.starts_with("| #")).count(), 13);
    assert_eq!(braidrep(&["classify", "--group", "mvb", "-k", "4", "--branch-cap", "5"]).status.code(), Some(3));
}

#[test]
fn analyze_irreducible_message() {
    let o = braidrep(&["analyze", "--family", "beta3", "--params", "b=2,c=1", "--check", "irreducible"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Irreducible (generic, 5 samples)"));
}

#[test]
fn analyze_reducible_after_conjugation() {
    let (v, code) = json(&[
        "analyze",
        "--family",
        "beta6",
        "-n",
        "6",
        "--params",
        "x0=1/c,x1=1/c",
        "--check",
        "reducible",
        "--conjugator",
        "geometric:c",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["invariant_vector"], serde_json::json!(["1", "1", "1", "1", "1", "1"]));
}

#[test]
fn witness_json_shape() {
    let (v, code) = json(&["analyze", "--family", "beta2", "--check", "witness"]);
    assert_eq!(code, 0);
    let c = &v["witness"]["certificate"];
    assert_eq!(c["image"], "identity");
    assert!(c["word"].is_string() && c["quotient"].is_string() && c["value"].is_string());
}

#[test]
fn lkb_checks() {
    let o = braidrep(&["lkb", "--variant", "m2wb3", "--check", "relations"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("pass"));
    assert_eq!(braidrep(&["lkb", "--variant", "full", "-n", "4"]).status.code(), Some(0));
    assert_eq!(braidrep(&["lkb", "--variant", "m2wb3-exchanged"]).status.code(), Some(1));
    assert_eq!(braidrep(&["lkb", "--variant", "full", "--check", "t1"]).status.code(), Some(1));
    let o = braidrep(&["lkb", "--variant", "m2wb3", "--check", "irreducible", "--params", "q=2,b=3", "--samples", "1"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn explicit_rep_from_file() {
    let (v, _) = json(&["lkb", "--variant", "welded", "--check", "export"]);
    let path = std::env::temp_dir().join(format!("braidrep-welded-{}.json", std::process::id()));
    std::fs::write(&path, serde_json::to_string(&v["representation"]).unwrap()).unwrap();
    let o = braidrep(&["verify", "--rep-file", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn seeded_runs_are_identical() {
    let args = ["--format", "json", "--seed", "7", "analyze", "--family", "beta7", "--check", "irreducible"];
    assert_eq!(braidrep(&args).stdout, braidrep(&args).stdout);
    let args = ["--format", "json", "classify", "--group", "mwb", "-k", "2", "--samples", "50"];
    assert_eq!(braidrep(&args).stdout, braidrep(&args).stdout);
}
