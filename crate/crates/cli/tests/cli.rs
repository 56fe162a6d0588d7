//! End-to-end tests driving the compiled binary.

use std::io::Write;
use std::process::{Command, Output};

fn topomc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_topomc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn check_true_and_false_verdicts() {
    let out = topomc(&[
        "check",
        "--theta",
        "thetaPrime",
        "--point",
        "111",
        "--formula",
        "K_e t",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "true");

    let out = topomc(&[
        "check",
        "--theta",
        "thetaPrime",
        "--point",
        "111",
        "--formula",
        "K_i t",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out).trim(), "false");
}

#[test]
fn check_with_announcements_and_json() {
    // after announcing j, Indiana knows the jewel is there
    let out = topomc(&[
        "--json",
        "check",
        "--theta",
        "thetaPrime",
        "--point",
        "111",
        "--announce",
        "j",
        "--formula",
        "K_i (j & d)",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verdict"], serde_json::Value::Bool(true));
}

#[test]
fn check_modes_are_exposed() {
    for mode in ["announcement", "effort"] {
        let out = topomc(&[
            "--mode",
            mode,
            "check",
            "--point",
            "111",
            "--formula",
            "dia (K_e (j & d & t) & K_i (j & d & t))",
        ]);
        assert_eq!(out.status.code(), Some(0), "mode {mode}");
    }
}

#[test]
fn valid_subcommand() {
    let out = topomc(&["valid", "--formula", "K_i j -> int(j)"]);
    assert_eq!(out.status.code(), Some(0));
    let out = topomc(&["valid", "--formula", "K_i t"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reduce_subcommand() {
    let out = topomc(&["reduce", "--formula", "[p] q"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "int(p) -> q");

    let out = topomc(&["--json", "reduce", "--formula", "[p] ~q"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["trace"][0]["rule"], "R2");

    // box formulas cannot be reduced: data error
    let out = topomc(&["reduce", "--formula", "box p"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validate_reports_violations() {
    let out = topomc(&["validate"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "ok");

    let broken = r#"{
        "points": ["x", "y"],
        "agents": ["a"],
        "subbase": [],
        "generators": [{ "name": "g", "cells": { "a": [["x"], ["y"]] } }],
        "valuation": { "p": ["x"] }
    }"#;
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(broken.as_bytes()).unwrap();
    let path = file.path().to_str().unwrap();
    let out = topomc(&["validate", "--model", path]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("not open"));
}

#[test]
fn parse_and_io_errors_exit_2() {
    let out = topomc(&[
        "check",
        "--point",
        "111",
        "--formula",
        "K_e &",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = topomc(&["check", "--point", "999", "--formula", "j"]);
    assert_eq!(out.status.code(), Some(2));
    let out = topomc(&["valid", "--model", "/nonexistent.json", "--formula", "j"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn example_round_trips() {
    let out = topomc(&["example"]);
    assert_eq!(out.status.code(), Some(0));
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(out.stdout.as_slice()).unwrap();
    let path = file.path().to_str().unwrap();
    let out = topomc(&["validate", "--model", path]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn axioms_and_diff() {
    let out = topomc(&[
        "--json",
        "axioms",
        "--seed",
        "1",
        "--trials",
        "3",
        "--max-points",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["trials"], 3);

    let out = topomc(&["diff", "--formula", "box ~K_i t", "--formula", "dia K_e t"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("no disagreement"));
}
