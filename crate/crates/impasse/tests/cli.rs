//! End-to-end runs of the `impasse-resolve` binary.

use std::io::Write;
use std::process::{Command, Output};

use tempfile::NamedTempFile;

fn source(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_impasse-resolve")).args(args).env("IMPASSE_LOG", "off").output().unwrap()
}

fn path(f: &NamedTempFile) -> &str {
    f.path().to_str().unwrap()
}

#[test]
fn resolve_writes_json_and_dot() {
    let src = source("delta = x*y; P = y; Q = x^2;");
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("tree.json");
    let dot = dir.path().join("tree.dot");
    let out = run(&["resolve", path(&src), "--json", json.to_str().unwrap(), "--dot", dot.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("1 singular point(s)"), "{stdout}");
    assert!(stdout.contains("7 nodes, 4 leaves"), "{stdout}");
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(json).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 1);
    assert_eq!(v[0]["tree"]["nodes"].as_array().unwrap().len(), 7);
    assert!(v[0]["error"].is_null());
    assert!(std::fs::read_to_string(dot).unwrap().starts_with("digraph resolution {"));
}

#[test]
fn algebraic_points_resolve() {
    // folds at (+-sqrt 2, 2)
    let src = source("delta = y - x^2; P = 1; Q = 2*x + x^2 - 2;");
    let out = run(&["resolve", path(&src)]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("2 singular point(s)"), "{stdout}");
    assert_eq!(stdout.matches(", resolved").count(), 2, "{stdout}");
}

#[test]
fn exit_codes() {
    let cusp = source("delta = x*y; P = y; Q = x^2;");
    assert_eq!(run(&["resolve", path(&cusp), "--max-depth", "1"]).status.code(), Some(2));
    let square = source("delta = x^2; P = 1; Q = x;");
    assert_eq!(run(&["resolve", path(&square)]).status.code(), Some(1));
    let bad = source("delta = x*/y;");
    let out = run(&["resolve", path(&bad)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stderr).unwrap().contains(":1:11:"));
    assert_eq!(run(&["resolve", "/nonexistent/system.txt"]).status.code(), Some(3));
}

#[test]
fn polygon_classify_and_plot() {
    let cusp = source("delta = x*y; P = y; Q = x^2;");
    let out = run(&["polygon", path(&cusp)]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["support"].as_array().unwrap().contains(&serde_json::json!([0, 2])));

    let sep = source("delta = y; P = 2*x; Q = -y;");
    let out = run(&["classify", path(&sep)]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("verdict: elementary"));

    let fold = source("delta = y - x^2; P = 1; Q = 3 - 2*x + y;");
    let out = run(&["classify", path(&fold), "--at", "1,1"]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(&["plot", path(&cusp), "--box", "-1,1,-1,1", "--grid", "4"]);
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.starts_with("# polygon\nr,s,vertex\n"), "{csv}");
    assert!(csv.contains("# impasse\nx,y\n"));
}
