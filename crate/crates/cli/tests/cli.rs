//! End-to-end checks of the binary: exit codes, report shapes, and
//! byte determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn akmove(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_akmove"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn invariant_report_for_trefoil() {
    let out = akmove(&["invariant", "--pd", &fixture("trefoil.pd")]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["invariants"]["conway"], serde_json::json!([1, 0, 1]));
    assert_eq!(v["invariants"]["arf"], 1);
}

#[test]
fn validate_rejects_single_use_arc() {
    let dir = std::env::temp_dir().join("akmove-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.pd");
    std::fs::write(&path, "X(1,4,2,5) X(3,6,4,1)").unwrap();
    let out = akmove(&["validate", "--pd", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["schema"], 1);
    // The error names the first offending arc.
    assert!(err["error"]["message"].as_str().unwrap().contains("arc 2"));
}

#[test]
fn catalog_lists_fixtures_and_models() {
    let out = akmove(&["catalog"]);
    assert!(out.status.success());
    let v = json(&out);
    let names: Vec<&str> = v["diagrams"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"whitehead"));
    let bor = v["models"]
        .as_array()
        .unwrap()
        .iter()
        .find(|m| m["name"] == "borromean")
        .expect("borromean model listed");
    assert_eq!(bor["feet"], 3);
}

#[test]
fn move_applies_site_file() {
    let out = akmove(&["move", "trefoil", "--spec", &fixture("crossing_change.json")]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["applied"]["move"], "crossing_change");
    assert!(v["code"].as_str().unwrap().contains("X"));
}

#[test]
fn experiment_whitehead_passes() {
    let out = akmove(&["experiment", "whitehead"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["report"]["verdict"], true);
}

#[test]
fn experiment_scheme_spec_and_seeded_battery_are_deterministic() {
    let spec = fixture("order12_scheme.json");
    let out = akmove(&["experiment", &spec]);
    assert!(out.status.success());
    assert_eq!(json(&out)["report"]["verdict"], true);

    let a = akmove(&["experiment", &spec, "--count", "3", "--seed", "7"]);
    let b = akmove(&["experiment", &spec, "--count", "3", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "same inputs and seed, different bytes");
    assert_eq!(json(&a)["report"]["seed"], 7);
}

#[test]
fn cache_bound_does_not_change_results() {
    let unbounded = akmove(&["invariant", "granny"]);
    let bounded = Command::new(env!("CARGO_BIN_EXE_akmove"))
        .args(["invariant", "granny"])
        .env("AKMOVE_CACHE_BYTES", "256")
        .output()
        .unwrap();
    assert!(bounded.status.success());
    assert_eq!(unbounded.stdout, bounded.stdout);
}

#[test]
fn budget_zero_is_a_usage_error() {
    let out = akmove(&["invariant", "trefoil", "--budget", "0"]);
    assert_eq!(out.status.code(), Some(2));
}
