//! End-to-end runs of the binary: command output, determinism, exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_localtr"))
}

fn write_airy_spec(dir: &std::path::Path) -> PathBuf {
    let path = dir.join("airy.json");
    std::fs::write(
        &path,
        r#"{"N":1, "times":[["1","0","0","0","0","0","0","0"]], "truncation": {"times": 8, "jumps": 8}}"#,
    )
    .unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

#[test]
fn omega_command_emits_the_golden_value() {
    let dir = std::env::temp_dir().join("localtr-cli-omega");
    std::fs::create_dir_all(&dir).unwrap();
    let spec = write_airy_spec(&dir);
    let out = run(&["omega", "--curve", spec.to_str().unwrap(), "-g", "1", "-n", "1"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let entries = doc["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 1);
    assert_eq!(entries[0]["exponents"], serde_json::json!([-4]));
    assert_eq!(entries[0]["value"][0], "-1/16");
}

#[test]
fn graphsum_command_reports_weights_and_aut() {
    let dir = std::env::temp_dir().join("localtr-cli-graphsum");
    std::fs::create_dir_all(&dir).unwrap();
    let spec = write_airy_spec(&dir);
    let out = run(&["graphsum", "--curve", spec.to_str().unwrap(), "-g", "1", "-n", "1"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let graphs = doc["graphs"].as_array().unwrap();
    assert_eq!(graphs.len(), 3);
    assert!(graphs.iter().any(|g| g["aut"] == 2));
    let expansion = &doc["dxi_expansion"]["entries"].as_array().unwrap();
    assert_eq!(expansion.len(), 1);
    assert_eq!(expansion[0]["value"][0], "-1/48");
}

#[test]
fn dictionary_round_trip_is_byte_stable() {
    let dir = std::env::temp_dir().join("localtr-cli-dict");
    std::fs::create_dir_all(&dir).unwrap();
    // an R series the binary itself accepts: identity at order 5
    let id_mat = serde_json::json!([["1", "0"], ["0", "1"]]);
    let zero_mat = serde_json::json!([["0", "0"], ["0", "0"]]);
    let doc = serde_json::json!({
        "N": 2,
        "R": [id_mat, zero_mat.clone(), zero_mat.clone(), zero_mat.clone(), zero_mat.clone(), zero_mat],
    });
    let r_path = dir.join("r.json");
    std::fs::write(&r_path, serde_json::to_string(&doc).unwrap()).unwrap();
    let curve_path = dir.join("curve.json");
    let out = run(&[
        "dictionary",
        "to-curve",
        "--input",
        r_path.to_str().unwrap(),
        "--output",
        curve_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    // emit of a parse of the emission is identical
    let text = std::fs::read_to_string(&curve_path).unwrap();
    let reparse_path = dir.join("curve2.json");
    std::fs::write(&reparse_path, &text).unwrap();
    let back = run(&["dictionary", "from-curve", "--input", reparse_path.to_str().unwrap()]);
    assert!(back.status.success());
    let r_doc: serde_json::Value = serde_json::from_slice(&back.stdout).unwrap();
    assert_eq!(r_doc["N"], 2);
    let one = serde_json::json!(["1", "0", "0", "0"]);
    let zero = serde_json::json!(["0", "0", "0", "0"]);
    assert_eq!(
        r_doc["R"][0],
        serde_json::json!([[one.clone(), zero.clone()], [zero.clone(), one.clone()]])
    );
    // every recovered order of the identity input is the zero matrix
    for mat in r_doc["R"].as_array().unwrap().iter().skip(1) {
        for row in mat.as_array().unwrap() {
            for entry in row.as_array().unwrap() {
                assert_eq!(entry[0], "0");
            }
        }
    }
}

#[test]
fn stationary_value_and_exit_codes() {
    let out = run(&["cp1", "stationary", "--g", "1", "--a", "2"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["value"], "1/24");
    assert_eq!(doc["degree"], 1);

    // unknown suite name is a usage error
    let out = run(&["check", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));

    // a real suite exits zero and emits a JSON report
    let out = run(&["check", "airy"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["passed"], true);
}

#[test]
fn malformed_input_is_an_error_exit() {
    let dir = std::env::temp_dir().join("localtr-cli-bad");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(&path, r#"{"N":1, "times":[["1/0"]]}"#).unwrap();
    let out = run(&["omega", "--curve", path.to_str().unwrap(), "-g", "0", "-n", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse error"));
}
