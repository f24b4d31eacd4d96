use std::process::{Command, Output};

use serde_json::Value;

fn undet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_undet")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn analyze_five_qubit_code() {
    let out = undet(&["analyze", "--catalog", "code_513", "--conditional", "2", "--json", "-"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    let r = &v["result"];
    assert_eq!(r["minimal_unconditional_d"], 3);
    assert_eq!(r["distance"], 3);
    assert_eq!(r["difference_coset_min_weight"], 3);
    assert_eq!(r["conditional"]["2"]["total"], 10);
    let m = &v["manifest"];
    assert_eq!(m["command"], "analyze");
    assert_eq!(m["result_digest"].as_str().unwrap().len(), 64);
    assert!(String::from_utf8_lossy(&out.stderr).contains("minimal unconditional D    3"));
}

#[test]
fn ghz_oracle_agrees() {
    let out = undet(&["analyze", "--catalog", "ghz", "--n", "3", "--oracle", "--json", "-"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json_of(&out)["result"];
    assert_eq!(r["oracle"]["disagreements"].as_array().unwrap().len(), 0);
    assert_eq!(r["oracle"]["subsets_checked"], 6);
    assert_eq!(r["methods"], serde_json::json!(["symbolic", "oracle"]));
}

#[test]
fn mixed_code_reports_mixed_section() {
    let out = undet(&["analyze", "--catalog", "code_422", "--json", "-"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json_of(&out)["result"];
    assert_eq!(r["pair"], "mixed");
    assert_eq!(r["mixed"]["d_mixed"], 3);
    assert_eq!(r["distance"], 2);
}

#[test]
fn spec_file_and_json_file() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("steane.json");
    let fixture = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/tests/fixtures/steane_713.json");
    let out = undet(&["analyze", "--spec", fixture, "--json", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["result"]["minimal_unconditional_d"], 5);
    assert_eq!(v["result"]["minimal_conditional_d"], 3);
}

#[test]
fn scan_cyclic_range() {
    let out = undet(&["scan-cyclic", "--from", "7", "--to", "15", "--json", "-"]);
    assert_eq!(out.status.code(), Some(0));
    let entries = json_of(&out)["result"]["entries"].as_array().unwrap().clone();
    assert_eq!(entries.len(), 9);
    let invalid: Vec<u64> = entries
        .iter()
        .filter(|e| e["validation"]["valid"] == false)
        .map(|e| e["n"].as_u64().unwrap())
        .collect();
    assert_eq!(invalid, vec![8, 10, 12, 15]);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("n =  8") && stderr.contains("invalid"));
}

#[test]
fn qss_and_bc_demo() {
    let out = undet(&["qss", "--rounds", "2000", "--seed", "5", "--strategy", "delay_discriminate", "--json", "-"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["manifest"]["seed"], 5);
    let acc = v["result"]["attacker_solo_accuracy"]["value"].as_f64().unwrap();
    assert!((acc - 0.5).abs() < 0.1);
    let again = json_of(&undet(&["qss", "--rounds", "2000", "--seed", "5", "--strategy", "delay_discriminate", "--json", "-"]));
    assert_eq!(v["result"], again["result"]);
    assert_eq!(v["manifest"]["result_digest"], again["manifest"]["result_digest"]);

    let out = undet(&["bc-demo", "--samples", "50", "--json", "-"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["result"]["open_success_bit1"]["value"], 1.0);
}

#[test]
fn verify_subset_of_claims() {
    let out = undet(&["verify-paper", "--only", "3", "--only", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert_eq!(stderr.matches("[PASS]").count(), 2);
    assert_eq!(undet(&["verify-paper", "--only", "13"]).status.code(), Some(1));
}

#[test]
fn catalog_export_loads_back() {
    let out = undet(&["catalog", "cyclic", "--n", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["stabilizers"][0], "XXZZZZXXI");
}

#[test]
fn input_errors_exit_1() {
    assert_eq!(undet(&["analyze", "--catalog", "toric"]).status.code(), Some(1));
    assert_eq!(undet(&["analyze", "--spec", "/nonexistent/spec.json"]).status.code(), Some(1));
    assert_eq!(undet(&["analyze"]).status.code(), Some(1));
    assert_eq!(undet(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(undet(&["qss", "--check-fraction", "1.5"]).status.code(), Some(1));
    assert_eq!(undet(&["qss", "--variant", "sideways"]).status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"name":"bad","n":1,"k":1,"stabilizers":[],"logical_z":["Q"]}"#).unwrap();
    let out = undet(&["analyze", "--spec", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let noncommuting = dir.path().join("nc.json");
    std::fs::write(&noncommuting, r#"{"name":"nc","n":2,"k":1,"stabilizers":["XI"],"logical_z":["ZI"]}"#).unwrap();
    let out = undet(&["analyze", "--spec", noncommuting.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid"));
}

#[test]
fn help_exits_0() {
    assert_eq!(undet(&["--help"]).status.code(), Some(0));
    assert_eq!(undet(&["--version"]).status.code(), Some(0));
}
