use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eulersum"))
        .args(args)
        .env_remove("EULERSUM_MAX_TERMS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn number(v: &Value) -> f64 {
    v.as_str().unwrap().parse().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("eulersum-cli-{name}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    dir
}

#[test]
fn eval_reports_value_and_bound() {
    let out = run(&["eval", "--kind", "T", "--exps", "1", "--q", "2", "--digits", "30"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["command"], "eval");
    // pi^2 log 2 - 7/2 zeta(3)
    assert!((number(&v["result"]["value"]) - 2.633_889_302_798_536_5).abs() < 1e-14);
    assert!(number(&v["result"]["error_bound"]) < 1e-29);
    assert!(v["result"]["method"].is_string());
    assert!(v["timing_ms"].is_u64());
}

#[test]
fn closed_prints_canonical_expression() {
    let out = run(&["closed", "--kind", "S", "--variant", "plain", "--p", "1", "--q", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["expression"], "(1/2)*tau(3)");
    // 7/2 zeta(3)
    assert!((number(&v["result"]["value"]) - 4.207_199_161_058_58).abs() < 1e-13);
}

#[test]
fn quadratic_identity_passes() {
    let out = run(&[
        "verify-theorem", "--thm", "3.5", "--p", "1", "--m", "1", "--q", "2", "--A", "a1", "--B", "a2", "--C", "a2",
        "--digits", "30",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["pass"], true);
    assert!(number(&v["result"]["value"]).abs() < 1e-20);
}

#[test]
fn output_is_byte_stable_without_timing() {
    let args = ["crosscheck", "--kind", "T", "--variant", "bar_q", "--p", "2", "--q", "2", "--no-timing"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(json(&a).get("timing_ms").is_none());
}

#[test]
fn table_lists_determined_cases() {
    let out = run(&["table", "--max-weight", "4", "--format", "csv", "--digits", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("family,variant,p,q,weight,expression,value"));
    let rows: Vec<&str> = lines.collect();
    assert!(rows.contains(&"S,plain,1,2,3,(1/2)*tau(3),4.20719916106"));
    // T(1;3) only yields a vanishing identity
    assert!(!rows.iter().any(|r| r.starts_with("T,plain,1,3,")));
    let json_rows = json(&run(&["table", "--max-weight", "4"]));
    assert_eq!(json_rows["result"]["rows"].as_array().unwrap().len(), rows.len());
    assert_eq!(number(&json_rows["result"]["count"]) as usize, rows.len());
}

#[test]
fn lemma_check_within_bound() {
    let out = run(&["lemma-check", "--lemma", "2.1", "--seq", "a2", "--n", "-2", "--s", "-1.8", "--no-timing"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["pass"], true);
    let outside = run(&["lemma-check", "--lemma", "2.1", "--n", "0", "--s", "1.5"]);
    assert_eq!(outside.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["eval", "--kind", "T", "--q", "2", "--bars", "1"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--kind", "U", "--q", "2"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let exhausted = Command::new(env!("CARGO_BIN_EXE_eulersum"))
        .args(["eval", "--kind", "S", "--exps", "1", "--q", "2", "--method", "plain"])
        .env("EULERSUM_MAX_TERMS", "200")
        .output()
        .unwrap();
    assert_eq!(exhausted.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&exhausted.stderr).contains("budget exhausted"));
}

#[test]
fn max_terms_comes_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_eulersum"))
        .args(["closed", "--kind", "T", "--p", "1", "--q", "2"])
        .env("EULERSUM_MAX_TERMS", "5000")
        .output()
        .unwrap();
    assert_eq!(json(&out)["params"]["max_terms"], "5000");
}

#[test]
fn cache_dir_round_trips() {
    let dir = scratch("cache");
    let d = dir.to_str().unwrap();
    let first = run(&["closed", "--kind", "T", "--p", "1", "--q", "2", "--cache-dir", d, "--no-timing"]);
    assert_eq!(first.status.code(), Some(0));
    let snapshot = fs::read_to_string(dir.join("atoms.txt")).unwrap();
    assert!(snapshot.lines().any(|l| l.starts_with("tau(3) 30 ")));
    assert!(snapshot.lines().all(|l| l.split_whitespace().count() == 3));
    let second = run(&["closed", "--kind", "T", "--p", "1", "--q", "2", "--cache-dir", d, "--no-timing"]);
    assert_eq!(json(&first)["result"]["value"], json(&second)["result"]["value"]);
    fs::write(dir.join("atoms.txt"), "tau(3) thirty 1.0\n").unwrap();
    let broken = run(&["closed", "--kind", "T", "--p", "1", "--q", "2", "--cache-dir", d]);
    assert_eq!(broken.status.code(), Some(2));
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn csv_single_row() {
    let out = run(&["eval", "--kind", "S", "--exps", "1,1", "--bars", "0,1", "--q", "3", "--qbar", "--format", "csv", "--no-timing"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("command,spec,method,digits,max_terms,value,error_bound"));
    assert!(lines[1].starts_with("eval,\"S("));
}
