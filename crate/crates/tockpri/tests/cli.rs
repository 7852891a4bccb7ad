//! End-to-end checks of the `tockpri` binary: exit codes, deterministic
//! output, and the documented JSON shapes.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tockpri"))
}

fn spec(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../specs")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn denote_is_deterministic() {
    let args = ["denote", "--model", "tt", "--depth", "3", &spec("T.tockcsp")];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success(), "exit 0");
    assert_eq!(first.stdout, second.stdout, "byte-identical reruns");
    let report = stdout_json(&first);
    assert_eq!(report["model"], "tt");
    assert_eq!(report["depth"], 3);
    assert!(report["traces"].as_array().is_some_and(|t| !t.is_empty()));
}

#[test]
fn prioritise_r_yields_six_traces() {
    let out = run(&["prioritise", "--model", "fl", "--depth", "2", &spec("R.tockcsp")]);
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["traces"].as_array().map(Vec::len), Some(6));
}

#[test]
fn refine_passes_for_r_against_untimed_t() {
    let out = run(&[
        "refine", "--model", "fl", "--depth", "2",
        &spec("T_untimed.tockcsp"), &spec("R.tockcsp"),
    ]);
    assert!(out.status.success(), "refinement holds: exit 0");
    let report = stdout_json(&out);
    assert_eq!(report["verdict"], "PASS");
    assert_eq!(report["counterexample"], Value::Null);
}

#[test]
fn refine_failure_reports_least_counterexample() {
    let out = run(&["refine", "--model", "fl", "--depth", "1", "DIV", "CHAOS"]);
    assert_eq!(out.status.code(), Some(1), "refinement fails: exit 1");
    let report = stdout_json(&out);
    assert_eq!(report["verdict"], "FAIL");
    // The least extra trace of CHAOS beyond DIV is the empty trace ending in
    // the full final acceptance.
    assert_eq!(
        report["counterexample"],
        serde_json::json!({"cells": [], "final": ["a", "b", "tock"]})
    );
}

#[test]
fn depth_cap_is_enforced_and_overridable() {
    let capped = bin()
        .args(["denote", "--depth", "9", "STOP"])
        .env_remove("TOCKPRI_DEPTH_MAX")
        .output()
        .expect("binary runs");
    assert_eq!(capped.status.code(), Some(2), "over the default cap: exit 2");
    assert!(!capped.stderr.is_empty(), "cap violation goes to stderr");

    let raised = bin()
        .args(["denote", "--depth", "9", "STOP"])
        .env("TOCKPRI_DEPTH_MAX", "9")
        .output()
        .expect("binary runs");
    assert!(raised.status.success(), "raised cap: exit 0");
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let out = run(&["laws", "--suite", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn laws_suite_reports_pass() {
    let out = run(&["laws", "--suite", "lemma3"]);
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["suite"], "lemma3");
    assert_eq!(report["passed"], true);
}
