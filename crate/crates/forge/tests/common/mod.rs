#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_holonomy-forge")
}

pub fn config_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

pub fn example_configs() -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = std::fs::read_dir(Path::new(env!("CARGO_MANIFEST_DIR")).join("configs"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    out.sort();
    out
}

pub fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

pub fn run_path(config: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["run", config.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

/// Writes `value` to a temporary config file and runs it.
pub fn run_value(value: &Value, extra: &[&str]) -> Output {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("config.json");
    std::fs::write(&path, serde_json::to_string_pretty(value).unwrap()).unwrap();
    run_path(&path, extra)
}

pub fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("report is json")
}

/// The single-line error record on stderr.
pub fn error_record(out: &Output) -> Value {
    let text = String::from_utf8(out.stderr.clone()).unwrap();
    let line = text.lines().last().expect("stderr has a record");
    serde_json::from_str::<Value>(line).expect("record is json")["error"].clone()
}

pub fn load(name: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(config_path(name)).unwrap()).unwrap()
}

pub fn complex(v: &Value) -> (f64, f64) {
    (v["re"].as_f64().unwrap(), v["im"].as_f64().unwrap())
}

/// Max entrywise distance between a reported 2x2 matrix and `expected`.
pub fn matrix_distance(m: &Value, expected: [[(f64, f64); 2]; 2]) -> f64 {
    let mut worst = 0.0f64;
    for r in 0..2 {
        for k in 0..2 {
            let (re, im) = complex(&m[r][k]);
            let (er, ei) = expected[r][k];
            worst = worst.max(((re - er).powi(2) + (im - ei).powi(2)).sqrt());
        }
    }
    worst
}
