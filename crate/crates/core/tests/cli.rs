//! End-to-end checks of the `evohopf` binary: outputs, exit codes, JSON and
//! replay determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

use evohopf::fields::FieldSpec;
use evohopf::hopf::{self, CatalogName};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evohopf"))
        .args(args)
        .env("EVOHOPF_WORKERS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let o = run(&full);
    (o.status.code().unwrap(), serde_json::from_slice(&o.stdout).unwrap())
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("evohopf-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn aut_orders() {
    let o = run(&["aut", "--family", "A2", "--alpha", "1", "--field", "GF:7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("order 6"));
    let o = run(&["aut", "--family", "A3", "--alpha", "2", "--field", "GF:5"]);
    assert!(stdout(&o).contains("order 1"));
}

#[test]
fn aut_over_rationals_is_an_input_error() {
    let o = run(&["aut", "--family", "A1", "--field", "Q"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("GF:"), "{err}");
}

#[test]
fn report_echoes_config_first() {
    let o = run(&["aut", "--family", "A2", "--alpha", "1"]);
    let text = stdout(&o);
    assert!(text.starts_with("config: {\"command\":\"aut\""));
    assert!(text.trim_end().ends_with("result: PASS"));
}

#[test]
fn hopf_verify_and_mutated_antipode() {
    assert_eq!(run(&["hopf", "verify", "--catalog", "H6", "--field", "Q"]).status.code(), Some(0));

    let h = hopf::catalog(CatalogName::H2, FieldSpec::Rationals, &[FieldSpec::Rationals.one()]).unwrap();
    let mut presentation = h.to_json();
    let good = temp_file("good.json", &serde_json::to_string(&presentation).unwrap());
    assert_eq!(run(&["hopf", "verify", "--file", good.to_str().unwrap()]).status.code(), Some(0));

    let key = presentation.antipode.keys().next().unwrap().clone();
    let image = presentation.antipode[&key].clone();
    presentation.antipode.insert(key, format!("{image} + 1"));
    let bad = temp_file("bad.json", &serde_json::to_string(&presentation).unwrap());
    let o = run(&["hopf", "verify", "--file", bad.to_str().unwrap()]);
    assert_ne!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("result: FAIL"));
}

#[test]
fn hopf_points_of_h2_over_gf13() {
    let (code, v) = json(&["hopf", "points", "--catalog", "H2", "--alpha", "1", "--field", "GF:13"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["count"], 6);
}

#[test]
fn upalg_examples() {
    let (code, v) = json(&["upalg", "--family", "A2", "--alpha", "1", "--law", "0,0,0,1", "--field", "Q"]);
    assert_eq!(code, 0);
    let text = v["result"].to_string();
    assert!(text.contains("\"faithful\":true"), "{text}");

    let o = run(&["upalg", "--family", "A2", "--alpha", "1", "--law", "0,0,0,1", "--field", "Q"]);
    let text = stdout(&o);
    assert!(text.contains("dim U = 7") && text.contains("dim T = 6"), "{text}");

    let o = run(&["upalg", "--family", "A4", "--alpha", "1", "--law", "0,1,2,1", "--field", "Q"]);
    assert!(stdout(&o).contains("not faithful"));

    let o = run(&[
        "upalg", "--family", "A8", "--alpha", "1", "--law-grid", "default", "--field", "GF:2", "--expect", "not-faithful",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 of 16 laws faithful"));

    let o = run(&["upalg", "--family", "A2", "--alpha", "1", "--law", "0,0,0,1", "--expect", "not-faithful"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn tables_default_and_char2() {
    let (code, v) = json(&["tables"]);
    assert_eq!(code, 0);
    let rows = v["result"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 12);
    let a8 = rows.iter().find(|r| r["label"] == "A8(1), char 2").unwrap();
    assert_eq!(a8["faithful"], false);
    assert_eq!(a8["hopf_dim"], 2);
}

#[test]
fn certify_passes() {
    let o = run(&["certify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn sampled_grid_is_deterministic_and_replayable() {
    let args = [
        "--json", "upalg", "--family", "A3", "--alpha", "1", "--field", "GF:5", "--law-grid", "sample:20", "--seed", "7",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
    let saved = temp_file("report.json", &String::from_utf8(first.stdout.clone()).unwrap());
    let replayed = run(&["--json", "replay", saved.to_str().unwrap()]);
    assert_eq!(replayed.stdout, first.stdout);
}

#[test]
fn law_needs_four_entries() {
    let o = run(&["upalg", "--family", "A2", "--alpha", "1", "--law", "0,1"]);
    assert_eq!(o.status.code(), Some(2));
}
