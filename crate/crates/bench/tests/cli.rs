use std::path::Path;
use std::process::Command;

use sparsketch_bench::{ExperimentConfig, ExperimentId};

fn sparsketch(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_sparsketch")).args(args).output().unwrap()
}

fn write_config(dir: &Path, cfg: &ExperimentConfig) -> String {
    let path = dir.join("cfg.json");
    std::fs::write(&path, cfg.to_json().unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

fn sampling(max_rate: f64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(ExperimentId::SamplingFail);
    cfg.trials = 50;
    cfg.n = 30;
    cfg.d = 30;
    cfg.k = 1;
    cfg.max_success_rate = Some(max_rate);
    cfg
}

#[test]
fn met_thresholds_exit_zero_and_write_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &sampling(1.0));
    let out_dir = dir.path().join("out");
    let out = sparsketch(&[
        "sampling-fail",
        "--config",
        &cfg,
        "--out",
        out_dir.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(out_dir.join("sampling-fail.csv")).unwrap();
    assert_eq!(text.lines().count(), 51);
}

#[test]
fn missed_threshold_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &sampling(0.0));
    let out = sparsketch(&["sampling-fail", "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"experiment": "sampling-fail", "bogus": 1}"#).unwrap();
    let out = sparsketch(&["sampling-fail", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "unknown keys are rejected");

    let cfg = write_config(dir.path(), &sampling(1.0));
    let out = sparsketch(&["lasso", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1), "config for another experiment");

    let out = sparsketch(&["sampling-fail", "--config", "/nonexistent/cfg.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn seed_and_trials_flags_override_the_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &sampling(1.0));
    let out_dir = dir.path().join("o");
    let out = sparsketch(&[
        "sampling-fail",
        "--config",
        &cfg,
        "--seed",
        "77",
        "--trials",
        "7",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("sampling-fail.json")).unwrap()).unwrap();
    assert_eq!(report["config"]["master_seed"], 77);
    assert_eq!(report["records"].as_array().unwrap().len(), 7);
}

#[test]
fn presets_run_without_a_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = sparsketch(&["calibrate-stable", "--trials", "2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("calibrate-stable.json").exists());
}

#[test]
fn unknown_format_is_a_usage_error() {
    let out = sparsketch(&["lasso", "--format", "pdf"]);
    assert_eq!(out.status.code(), Some(1), "usage errors are errors, not threshold misses");
    assert!(String::from_utf8_lossy(&out.stderr).contains("pdf"));
}

#[test]
fn help_exits_zero() {
    let out = sparsketch(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("support-sweep"));
}
