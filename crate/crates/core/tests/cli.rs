use std::path::Path;
use std::process::{Command, Output};

use iceberg_core::code::{EncodedCircuit, Manifest};
use iceberg_core::sim::Program;
use iceberg_core::Circuit;

fn iceberg(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_iceberg")).args(args).current_dir(dir).output().unwrap()
}

#[test]
fn build_writes_circuit_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = iceberg(dir.path(), &["build", "BELL", "--config", "nonft", "--out", "bell.txt"]);
    assert!(out.status.success());
    let circuit = Circuit::parse(&std::fs::read_to_string(dir.path().join("bell.txt")).unwrap()).unwrap();
    let manifest: Manifest =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("bell.txt.manifest.json")).unwrap()).unwrap();
    let ec = EncodedCircuit::from_manifest(circuit, &manifest).unwrap();
    let (accepted, rejected) = ec.accepted(&Program::compile(&ec.circuit).unwrap().run::<f64>(&[]));
    assert_eq!(rejected, 0.0);
    assert!((accepted.prob("00") - 0.5).abs() < 1e-9 && (accepted.prob("11") - 0.5).abs() < 1e-9);

    let plain = iceberg(dir.path(), &["build", "bell", "--config", "unencoded", "--out", "raw.txt"]);
    assert!(plain.status.success());
    assert!(!dir.path().join("raw.txt.manifest.json").exists());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.txt"), "qubits 2\nfrob 0\n").unwrap();
    std::fs::write(dir.path().join("ccz.txt"), "qubits 3\nccz 0 1 2\nmeasz 0\nmeasz 1\nmeasz 2\n").unwrap();
    let code = |args: &[&str]| iceberg(dir.path(), args).status.code();
    assert_eq!(code(&["verify-ft", "bell"]), Some(0));
    assert_eq!(code(&["verify-ft", "ccz.txt"]), Some(0));
    assert_eq!(code(&["verify-ft", "ccz.txt", "--config", "nonft"]), Some(3));
    assert_eq!(code(&["verify-ft", "bad.txt"]), Some(2));
    assert_eq!(code(&["run", "bell", "--config", "ft", "--noise", "p2=1.5"]), Some(2));
    assert_eq!(code(&["run", "bell", "--config", "ft", "--shots", "0"]), Some(2));
    assert_eq!(code(&["build", "ghz", "--config", "ft"]), Some(2));
    assert_eq!(code(&["report", "--in", "missing.json"]), Some(1));
}

#[test]
fn run_then_report() {
    let dir = tempfile::tempdir().unwrap();
    let run = iceberg(dir.path(), &["run", "transversal-toffoli", "--config", "ft", "--exact", "--out", "tt.json"]);
    assert!(run.status.success());
    let rep = iceberg(dir.path(), &["report", "--in", "tt.json", "--reference"]);
    let table = String::from_utf8(rep.stdout).unwrap();
    assert!(table.contains("TRANSVERSAL_TOFFOLI") && table.contains("82.28%"), "{table}");
}

#[test]
fn sweep_emits_three_rows_per_point() {
    let dir = tempfile::tempdir().unwrap();
    let out = iceberg(dir.path(), &["sweep", "bell", "--p2", "1e-3,2e-3", "--exact"]);
    assert!(out.status.success());
    let rows: Vec<serde_json::Value> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[3]["noise"]["p2"], 2e-3);
}
