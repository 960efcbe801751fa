use std::process::{Command, Output};

use serde_json::Value;

fn qboson(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qboson")).args(args).env_remove("QBOSON_WORKERS").output().expect("binary runs")
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).expect("JSON line"))
        .collect()
}

#[test]
fn relation_example_passes() {
    let out = qboson(&["verify-relations", "--relation", "R6", "--sector", "0,0", "--degree", "2", "--window", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let reports = lines(&out);
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0]["relation"], "R6");
    assert_eq!(reports[0]["status"], "pass");
}

#[test]
fn half_integer_sector() {
    let out = qboson(&["verify-relations", "--relation", "R1", "--sector", "-1/2,0", "--degree", "1", "--window", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(lines(&out)[0]["sector"], serde_json::json!([-0.5, 0]));
}

#[test]
fn series_and_ope_examples_pass() {
    for args in [&["series-identity", "--which", "star", "--order", "8"][..], &["ope", "--formula", "4", "--order", "8"]] {
        let out = qboson(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        assert!(lines(&out).iter().all(|r| r["status"] == "pass"));
    }
}

#[test]
fn usage_errors_exit_two() {
    let bad: [&[&str]; 8] = [
        &["frobnicate"],
        &["ope", "--formula", "9"],
        &["verify-relations", "--relation", "R8"],
        &["verify-relations", "--sector", "1/3,0"],
        &["kernel-character", "--specialize", "u=0"],
        &["kernel-character", "--specialize", "u=3/2", "--specialize", "3/2"],
        &["intertwining", "--pair", "1->3"],
        &["two-point", "--order", "0"],
    ];
    for args in bad {
        let out = qboson(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn kernel_character_emits_series() {
    let out = qboson(&["kernel-character", "--family", "3", "--degree", "2", "--specialize", "u=5/3"]);
    assert_eq!(out.status.code(), Some(0));
    let ls = lines(&out);
    assert_eq!(ls[0]["status"], "pass");
    assert_eq!(ls[1]["series"], "character-F3");
}

#[test]
fn output_is_deterministic_across_worker_counts() {
    let dir = std::env::temp_dir();
    let a = dir.join(format!("qboson-det-{}-a.jsonl", std::process::id()));
    let b = dir.join(format!("qboson-det-{}-b.jsonl", std::process::id()));
    let run = |path: &std::path::Path, workers: &str| {
        let out = qboson(&["ope", "--order", "4", "--workers", workers, "--out", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
        std::fs::read(path).unwrap()
    };
    let (ra, rb) = (run(&a, "1"), run(&b, "3"));
    assert_eq!(ra, rb);
    assert_eq!(String::from_utf8(ra).unwrap().lines().count(), 8);
    let _ = (std::fs::remove_file(a), std::fs::remove_file(b));
}

#[test]
fn schema_describes_reports() {
    let out = qboson(&["schema"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    let again: Value = serde_json::from_str(&serde_json::to_string(&schema).unwrap()).unwrap();
    assert_eq!(schema, again);
    let report = &schema["$defs"]["report"];
    assert_eq!(report["properties"]["status"]["enum"], serde_json::json!(["pass", "fail"]));
    assert!(schema["$defs"]["failure"]["properties"]["residual"].is_object());

    // every key of an emitted report is declared
    let line = &lines(&qboson(&["hw-check", "--family", "2"]))[0];
    for key in line.as_object().unwrap().keys() {
        assert!(report["properties"].get(key).is_some(), "undeclared key {key}");
    }
}
