use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn spec(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../specs")
        .join(name)
}

fn coauto(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coauto"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn compose_lf_ac_is_finite() {
    let o = coauto(&["compose", path(&spec("lf_ac.json")), "--flatten"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["states"].as_array().unwrap().len(), 9);
    assert_eq!(doc["initial"][0], "(empty,q0)");
}

#[test]
fn compose_single_sync() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("sync.json");
    std::fs::write(
        &file,
        r#"{"reo": [{"kind": "sync", "name": "s", "ports": ["a", "b"]}]}"#,
    )
    .unwrap();
    let o = coauto(&["compose", path(&file)]);
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["states"].as_array().unwrap().len(), 1);
    assert_eq!(doc["transitions"].as_array().unwrap().len(), 2);
    let o = coauto(&["compose", path(&file), "--domain", "0,1,2"]);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["transitions"].as_array().unwrap().len(), 3);
}

#[test]
fn compose_hits_the_bound() {
    let o = coauto(&["compose", path(&spec("lf_ac.json")), "--bound", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bound exceeded"));
    assert!(!o.stdout.is_empty());
}

#[test]
fn export_dot_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("lf_ac.dot");
    let o = coauto(&[
        "export-dot",
        path(&spec("lf_ac.json")),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let dot = std::fs::read_to_string(&out).unwrap();
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("doublecircle"));
    let again = coauto(&["compose", path(&spec("lf_ac.json")), "--format", "dot"]);
    assert_eq!(stdout(&again), dot);
}

#[test]
fn run_is_deterministic_ndjson() {
    let file = spec("lossy_alternator.json");
    let args = ["run", path(&file), "--rounds", "10", "--seed", "4"];
    let a = coauto(&args);
    let b = coauto(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let lines: Vec<Value> = stdout(&a)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 11);
    for (n, rec) in lines[1..].iter().enumerate() {
        assert_eq!(rec["round"], n);
        for k in ["participants", "label", "states", "consulted"] {
            assert!(rec.get(k).is_some(), "missing {k}");
        }
    }
    let zero = coauto(&["run", path(&spec("lossy_alternator.json")), "--rounds", "0"]);
    assert_eq!(stdout(&zero).lines().count(), 1);
}

#[test]
fn run_linda_example() {
    let o = coauto(&[
        "run",
        path(&spec("linda_example.json")),
        "--rounds",
        "5",
        "--policy",
        "lex",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let heads: Vec<String> = lines[1..]
        .iter()
        .filter_map(|r| r["label"]["head"].as_str().map(String::from))
        .collect();
    assert_eq!(heads[0], "τout(42,43)");
    assert!(heads.iter().any(|h| h == "τin(42,43)"));
    assert_eq!(lines.last().unwrap()["deadlock"], true);
}

#[test]
fn explore_router() {
    let o = coauto(&["explore", path(&spec("router.json"))]);
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["states"].as_array().unwrap().len(), 1);
    assert_eq!(doc["truncated"], false);
}

#[test]
fn check_passes_and_fails() {
    for ok in [
        "lossy_alternator.json",
        "lossy_sync_fifo.json",
        "linda_example.json",
        "router.json",
    ] {
        let o = coauto(&["check", path(&spec(ok))]);
        assert_eq!(o.status.code(), Some(0), "{ok}: {}", stdout(&o));
    }
    let o = coauto(&["check", path(&spec("broken_predicate.json"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("locality greedy: FAIL"));
}

#[test]
fn bad_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    std::fs::write(&file, "{\"reo\": [").unwrap();
    assert_eq!(coauto(&["compose", path(&file)]).status.code(), Some(2));
    std::fs::write(
        &file,
        r#"{"reo": [{"kind": "sync", "name": "x", "ports": ["a", "b"]},
                   {"kind": "sync", "name": "y", "ports": ["a", "c"]},
                   {"kind": "sync", "name": "z", "ports": ["a", "d"]}]}"#,
    )
    .unwrap();
    let o = coauto(&["check", path(&file)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("port a"));
    assert_eq!(coauto(&["run", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(
        coauto(&["run", path(&spec("lf_ac.json")), "--policy", "fair"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn empty_spec_has_one_state() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("empty.json");
    std::fs::write(&file, "{}").unwrap();
    let o = coauto(&["explore", path(&file)]);
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["states"].as_array().unwrap().len(), 1);
}
