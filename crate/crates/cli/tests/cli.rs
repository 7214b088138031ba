use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn ncgeo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncgeo")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("ncgeo-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn list_names_every_suite() {
    let out = ncgeo(&["list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["algebra", "universal", "jets", "ce", "connections", "matrix-geometry", "connes", "all"] {
        assert!(text.lines().any(|l| l.trim_start().starts_with(name)), "missing {name}");
    }
}

#[test]
fn json_is_byte_identical_across_runs() {
    let a = ncgeo(&["universal", "--seed", "5"]);
    let b = ncgeo(&["universal", "--seed", "5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let report = json(&a);
    assert_eq!(report["suite"], "universal");
    assert_eq!(report["params"]["seed"], "5");
    assert!(report["timings"].as_object().unwrap().is_empty());
}

#[test]
fn ledger_records_conventions() {
    let report = json(&ncgeo(&["matrix-geometry"]));
    assert_eq!(report["convention_ledger"]["lambda"], "-1/2");
    assert_eq!(report["convention_ledger"]["theta_sign"], "-1");
    let checks = report["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["status"] == "pass"));
    let ids: Vec<&str> = checks.iter().map(|c| c["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

#[test]
fn jets_on_truncated_polynomials() {
    let out = ncgeo(&["jets", "--algebra", "trunc-poly:3", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("dim O¹ = 2, dim J¹ = 5"), "{text}");
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["bogus"][..],
        &["ce", "--n", "9"],
        &["connes", "--m", "0"],
        &["jets", "--algebra", "matrix:2"],
        &["ce", "--format", "yaml"],
        &["connes", "--k-max", "5"],
    ] {
        let out = ncgeo(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn negative_scalars_parse() {
    let out = ncgeo(&["connes", "--m", "-2+1/3i"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["params"]["m"], "-2+1/3i");
}

#[test]
fn config_file_is_overridden_by_flags() {
    let path = temp_file("cfg.toml", "suite = \"universal\"\nformat = \"json\"\n[params]\nN = 5\nseed = 9\n");
    let out = ncgeo(&["universal", "--config", path.to_str().unwrap(), "--N", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["params"]["N"], "2");
    assert_eq!(report["params"]["seed"], "9");
    let wrong = temp_file("wrong.toml", "suite = \"jets\"\n");
    assert_eq!(ncgeo(&["ce", "--config", wrong.to_str().unwrap()]).status.code(), Some(2));
    let unknown = temp_file("unknown.toml", "[params]\nsize = 2\n");
    assert_eq!(ncgeo(&["ce", "--config", unknown.to_str().unwrap()]).status.code(), Some(2));
    for p in [path, wrong, unknown] {
        std::fs::remove_file(p).unwrap();
    }
}

#[test]
fn timings_are_opt_in() {
    let out = ncgeo(&["algebra", "--timings"]);
    let report = json(&out);
    let timings = report["timings"].as_object().unwrap();
    assert_eq!(timings.len(), report["checks"].as_array().unwrap().len());
}

#[test]
fn verbosity_controls_text_detail() {
    let text = |args: &[&str]| String::from_utf8(ncgeo(args).stdout).unwrap();
    let quiet = text(&["algebra", "--format", "text", "--verbosity", "0"]);
    assert!(!quiet.contains("pass  "), "{quiet}");
    assert!(quiet.ends_with(" 0 failed\n"));
    let loud = text(&["algebra", "--format", "text", "--verbosity", "2"]);
    assert!(loud.contains("anchor: "));
    assert_eq!(text(&["algebra", "--format", "text"]), text(&["algebra", "--format", "text", "--verbosity", "1"]));
}
