use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mldeg")).args(args).output().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["classify", &fixture("hat.json")]).status.code(), Some(1));
    assert_eq!(run(&["validate", "/nonexistent/system.json"]).status.code(), Some(1));
    let bad = run(&["ml-degree", &fixture("quartic.json"), "--min-step", "1"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("min_step"));
}

#[test]
fn negative_exponent_names_the_polynomial() {
    let out = run(&["validate", &fixture("negative_exponent.json")]);
    assert_eq!(out.status.code(), Some(1));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("polynomial 1") && msg.contains("negative exponent"), "{msg}");
    assert!(out.stdout.is_empty());
}

#[test]
fn validate_reports_shape_and_digest() {
    let out = run(&["validate", &fixture("square.json")]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["n"], 2);
    assert_eq!(r["k"], 2);
    assert_eq!(r["square"], true);
    assert_eq!(r["terms"], serde_json::json!([3, 3]));
    assert_eq!(r["input"]["sha256"].as_str().unwrap().len(), 64);
    assert_eq!(r["seed"], 11);
    assert_eq!(r["seed_source"], "document");
}

#[test]
fn seed_flag_overrides_document() {
    let r = report(&run(&["validate", &fixture("square.json"), "--seed", "4"]));
    assert_eq!(r["seed"], 4);
    assert_eq!(r["seed_source"], "flag");
}

#[test]
fn quartic_ml_degree() {
    let out = run(&["ml-degree", &fixture("quartic.json"), "--seed", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["mixed_volume"], 12);
    assert_eq!(r["count"], 12);
    assert_eq!(r["agreement"], true);
    assert_eq!(r["solutions"].as_array().unwrap().len(), 12);
    assert_eq!(r["config"]["newton_tolerance"], 1e-10);
    assert_eq!(r["variables"], serde_json::json!(["x1", "x2", "lambda1"]));

    let mv = report(&run(&["ml-degree", &fixture("quartic.json"), "--method", "mixed-volume"]));
    assert_eq!(mv["ml_degree"], 12);
    assert!(mv.get("solutions").is_none());
}

#[test]
fn starved_tracker_is_an_anomaly() {
    let out = run(&["ml-degree", &fixture("quartic.json"), "--max-steps", "2", "--no-retry"]);
    assert_eq!(out.status.code(), Some(2));
    let r = report(&out);
    assert_eq!(r["agreement"], false);
    assert_eq!(r["attempts"].as_array().unwrap().len(), 1);

    let retried = report(&run(&["ml-degree", &fixture("quartic.json"), "--max-steps", "2"]));
    assert_eq!(retried["attempts"].as_array().unwrap().len(), 2);
}

#[test]
fn reports_are_byte_identical_for_a_fixed_seed() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = run(&["ml-degree", &fixture("quartic.json"), "--seed", "17", "--out", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let c = dir.path().join("c.json");
    run(&["ml-degree", &fixture("quartic.json"), "--seed", "18", "--out", c.to_str().unwrap()]);
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&c).unwrap());
}

#[test]
fn mixed_volume_methods_agree() {
    for method in ["ie", "cells", "both"] {
        let r = report(&run(&["mixed-volume", &fixture("square.json"), "--method", method]));
        assert_eq!(r["mixed_volume"], 4, "{method}");
    }
    let ml = report(&run(&["mixed-volume", &fixture("quartic.json"), "--ml"]));
    assert_eq!(ml["mixed_volume"], 12);
    assert_eq!(ml["agreement"], true);
    assert_eq!(run(&["mixed-volume", &fixture("quartic.json")]).status.code(), Some(1));
}

#[test]
fn ml_system_output_is_a_system_document() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ml.json");
    let out = run(&["ml-system", &fixture("quartic.json"), "--seed", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    let text = std::fs::read_to_string(&path).unwrap();
    let doc = mldeg_core::model::parse_system(&text).unwrap();
    assert_eq!(doc.system.n(), 3);
    assert_eq!(doc.system.k(), 3);

    // The likelihood system is square, so its own mixed volume is the ML degree.
    let r = report(&run(&["mixed-volume", path.to_str().unwrap()]));
    assert_eq!(r["mixed_volume"], 12);
}

#[test]
fn classify_single_weights_and_scan() {
    let hat = fixture("hat.json");
    let r = report(&run(&["classify", &hat, "--weight", "-3,14,3"]));
    assert_eq!(r["classification"]["case"], 1);
    assert_eq!(r["hat_applied"], false);

    let r = report(&run(&["classify", &hat, "--weight=-3,12,3"]));
    assert_eq!(r["classification"]["case"], 3);
    assert_eq!(r["certificate_verified"], true);

    // The un-hatted file is transformed first and gives the same answer.
    let r = report(&run(&["classify", &fixture("quartic.json"), "--weight", "-3,-4,3"]));
    assert_eq!(r["classification"]["case"], 2);
    assert_eq!(r["hat_applied"], true);

    let scan = report(&run(&["classify", &hat, "--radius", "1"]));
    assert_eq!(scan["total"], 26);
    assert!(scan.get("rows").is_none());

    assert_eq!(run(&["classify", &hat, "--weight", "0,0,0"]).status.code(), Some(1));
    assert_eq!(run(&["classify", &hat, "--weight", "1,2"]).status.code(), Some(1));
}

#[test]
fn small_bkk_check() {
    let out = run(&["bkk-check", "--trials", "4", "--max-n", "2", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["final_pass"], 4);
    let trials = r["trials"].as_array().unwrap();
    assert_eq!(trials.len(), 4);
    assert_eq!(trials.iter().map(|t| t["n"].as_u64().unwrap()).collect::<Vec<_>>(), [1, 2, 1, 2]);
    assert!(trials.iter().all(|t| t["mixed_volume"].as_u64().unwrap() > 0));
    assert_eq!(run(&["bkk-check", "--max-terms", "1"]).status.code(), Some(1));
}
