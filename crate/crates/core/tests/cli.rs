use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use symrecon::io::{CorrelationFile, StateFile};
use symrecon::linalg::CMatrix;
use symrecon::opspace::{DensityOperator, HilbertSpace};
use symrecon::simulate::fidelity;
use tempfile::TempDir;

const ZZ_SPEC: &str = r#"{"version": "v1", "num_sites": 2, "local_dim": 2,
  "generators": [{"kind": "pauli_sum", "terms": [{"string": "ZZ", "coefficient": 1.0}]}]}"#;

const TOTAL_SZ_SPEC: &str = r#"{"version": "v1", "num_sites": 2,
  "generators": [{"kind": "pauli_sum", "terms": [{"string": "ZI", "coefficient": 1.0},
                                                 {"string": "IZ", "coefficient": 1.0}]}]}"#;

fn symrecon(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symrecon"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn load_state(path: &Path) -> StateFile {
    StateFile::parse(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn mcso_prints_zz_basis_and_writes_file() {
    let dir = TempDir::new().unwrap();
    write(&dir, "zz.json", ZZ_SPEC);
    let o = symrecon(&["mcso", "--spec", "zz.json", "--out", "basis.json"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "dim=8, minimal basis size=8, minimal basis: II IZ XX XY YX YY ZI ZZ\n");
    let file: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("basis.json")).unwrap()).unwrap();
    assert_eq!(file["version"], "v1");
    assert_eq!(file["mcso_dim"], 8);
    assert_eq!(file["orthonormal_basis"].as_array().unwrap().len(), 8);
}

#[test]
fn mcso_trivial_and_total_spin() {
    let dir = TempDir::new().unwrap();
    write(&dir, "t.json", r#"{"version": "v1", "num_sites": 2, "trivial": true}"#);
    write(&dir, "s.json", TOTAL_SZ_SPEC);
    let o = symrecon(&["mcso", "--spec", "t.json"], dir.path());
    assert!(stdout(&o).starts_with("dim=16,"));
    let o = symrecon(&["mcso", "--spec", "s.json"], dir.path());
    assert!(stdout(&o).starts_with("dim=6, minimal basis size=8,"), "{}", stdout(&o));
}

#[test]
fn malformed_spec_exits_2_with_location() {
    let dir = TempDir::new().unwrap();
    write(&dir, "bad.json", "{\"num_sites\": 2,\n \"generators\": [{\"kind\": \"pauli_sum\", \"terms\": 7}]}");
    let o = symrecon(&["mcso", "--spec", "bad.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
    let o = symrecon(&["mcso", "--spec", "missing.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = symrecon(&["simulate", "--spec", "bad.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reconstruct_up_up_from_its_correlations() {
    let dir = TempDir::new().unwrap();
    write(&dir, "zz.json", ZZ_SPEC);
    write(
        &dir,
        "g.json",
        r#"{"version": "v1", "num_sites": 2, "values": [
            {"pauli": "00", "value": 1}, {"pauli": "03", "value": 1}, {"pauli": "30", "value": 1},
            {"pauli": "33", "value": 1}, {"pauli": "11", "value": 0}, {"pauli": "22", "value": 0},
            {"pauli": "12", "value": 0}, {"pauli": "21", "value": 0}]}"#,
    );
    let o = symrecon(&["reconstruct", "--spec", "zz.json", "--correlations", "g.json", "--out", "s.json"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let state = load_state(&dir.path().join("s.json"));
    let m = state.state.to_matrix().unwrap();
    let mut expected = CMatrix::zeros(4, 4);
    expected[(0, 0)] = 1.0.into();
    assert!((m - expected).norm() < 1e-15);
    let d = state.diagnostics.unwrap();
    assert_eq!(d.trace, 1.0);
    assert!(d.min_eigenvalue.abs() < 1e-15);
}

#[test]
fn reconstruct_maximally_mixed() {
    let dir = TempDir::new().unwrap();
    write(&dir, "zz.json", ZZ_SPEC);
    let values: Vec<String> = ["II", "IZ", "ZI", "ZZ", "XX", "XY", "YX", "YY"]
        .iter()
        .map(|p| format!(r#"{{"pauli": "{p}", "value": {}}}"#, if *p == "II" { 1 } else { 0 }))
        .collect();
    write(&dir, "g.json", &format!(r#"{{"num_sites": 2, "values": [{}]}}"#, values.join(",")));
    let o = symrecon(&["reconstruct", "--spec", "zz.json", "--correlations", "g.json", "--out", "s.json"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let m = load_state(&dir.path().join("s.json")).state.to_matrix().unwrap();
    assert!((m - CMatrix::identity(4, 4).scale(0.25)).norm() < 1e-15);
}

#[test]
fn missing_correlations_exit_4() {
    let dir = TempDir::new().unwrap();
    write(&dir, "t.json", r#"{"num_sites": 1, "trivial": true}"#);
    write(&dir, "g.json", r#"{"num_sites": 1, "values": [{"pauli": "I", "value": 1}]}"#);
    let o = symrecon(&["reconstruct", "--spec", "t.json", "--correlations", "g.json", "--out", "s.json"], dir.path());
    assert_eq!(o.status.code(), Some(4));
    let err = stderr(&o);
    assert!(err.contains('X') && err.contains('Y') && err.contains('Z'), "{err}");
    assert!(!dir.path().join("s.json").exists());
}

#[test]
fn psd_violation_warns_and_repairs() {
    let dir = TempDir::new().unwrap();
    write(&dir, "t.json", r#"{"num_sites": 1, "trivial": true}"#);
    write(
        &dir,
        "g.json",
        r#"{"num_sites": 1, "values": [{"pauli": "I", "value": 1}, {"pauli": "X", "value": 1},
            {"pauli": "Y", "value": 0}, {"pauli": "Z", "value": 1}]}"#,
    );
    let o = symrecon(&["reconstruct", "--spec", "t.json", "--correlations", "g.json", "--out", "raw.json"], dir.path());
    assert!(o.status.success());
    assert!(stderr(&o).contains("not positive semidefinite"), "{}", stderr(&o));
    let raw = load_state(&dir.path().join("raw.json"));
    assert!(raw.diagnostics.unwrap().min_eigenvalue < 0.0);
    let o = symrecon(
        &["reconstruct", "--spec", "t.json", "--correlations", "g.json", "--psd", "--out", "fixed.json"],
        dir.path(),
    );
    assert!(o.status.success());
    let fixed = load_state(&dir.path().join("fixed.json"));
    assert!(fixed.psd_repaired);
    let rho = DensityOperator::from_matrix(HilbertSpace::qubits(1).unwrap(), fixed.state.to_matrix().unwrap());
    assert!(rho.is_ok());
    assert!(!fs::read_to_string(dir.path().join("fixed.json")).unwrap().contains("warn"));
}

#[test]
fn simulate_is_deterministic_and_round_trips() {
    let dir = TempDir::new().unwrap();
    write(&dir, "zz.json", ZZ_SPEC);
    let args = |out: &'static str| ["simulate", "--spec", "zz.json", "--shots", "1000000", "--seed", "7", "--out", out];
    assert!(symrecon(&args("a.json"), dir.path()).status.success());
    assert!(symrecon(&args("b.json"), dir.path()).status.success());
    let a = fs::read(dir.path().join("a.json")).unwrap();
    assert_eq!(a, fs::read(dir.path().join("b.json")).unwrap());

    let file = CorrelationFile::parse(std::str::from_utf8(&a).unwrap()).unwrap();
    let reported = file.true_state_fidelity_after_reconstruction.unwrap();
    assert!(reported > 0.999, "{reported}");

    let o = symrecon(&["reconstruct", "--spec", "zz.json", "--correlations", "a.json", "--psd", "--out", "s.json"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let space = HilbertSpace::qubits(2).unwrap();
    let rebuilt = DensityOperator::from_matrix(space, load_state(&dir.path().join("s.json")).state.to_matrix().unwrap()).unwrap();
    let truth = DensityOperator::from_matrix(space, file.true_state.unwrap().to_matrix().unwrap()).unwrap();
    assert!((fidelity(&truth, &rebuilt).unwrap() - reported).abs() <= 1e-9);
}

#[test]
fn single_shot_values_are_plus_minus_one() {
    let dir = TempDir::new().unwrap();
    write(&dir, "zz.json", ZZ_SPEC);
    let o = symrecon(&["simulate", "--spec", "zz.json", "--shots", "1", "--seed", "3", "--out", "c.json"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let file = CorrelationFile::parse(&fs::read_to_string(dir.path().join("c.json")).unwrap()).unwrap();
    assert_eq!(file.values.len(), 8);
    for e in &file.values {
        if e.pauli == "II" {
            assert_eq!(e.value, 1.0);
        } else {
            assert!(e.value == 1.0 || e.value == -1.0, "{e:?}");
        }
    }
    let o = symrecon(&["simulate", "--spec", "zz.json", "--shots", "0", "--seed", "3", "--out", "c.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn simulate_from_state_file() {
    let dir = TempDir::new().unwrap();
    write(&dir, "zz.json", ZZ_SPEC);
    write(
        &dir,
        "state.json",
        r#"{"version": "v1", "num_sites": 2, "state": {"dim": 4, "data": [
            [0.5,0],[0,0],[0,0],[0.5,0], [0,0],[0,0],[0,0],[0,0],
            [0,0],[0,0],[0,0],[0,0], [0.5,0],[0,0],[0,0],[0.5,0]]}}"#,
    );
    let o = symrecon(
        &["simulate", "--spec", "zz.json", "--shots", "100000", "--seed", "1", "--state", "state.json", "--out", "c.json"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let file = CorrelationFile::parse(&fs::read_to_string(dir.path().join("c.json")).unwrap()).unwrap();
    assert_eq!(file.values.iter().find(|e| e.pauli == "ZZ").unwrap().value, 1.0);
}

#[test]
fn report_prints_reduction() {
    let dir = TempDir::new().unwrap();
    write(&dir, "zz.json", ZZ_SPEC);
    let o = symrecon(&["report", "--spec", "zz.json"], dir.path());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["full_count"], 16);
    assert_eq!(v["mcso_dim"], 8);
    assert_eq!(v["minimal_basis_size"], 8);
    assert_eq!(v["reduction_factor"], 2.0);
}

#[test]
fn demo_examples() {
    let dir = TempDir::new().unwrap();
    let o = symrecon(&["demo", "ising", "--sites", "4", "--J", "1", "--g", "0"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["classification"], "8-vertex (diagonal)");
    assert!((v["vertex8"]["r1"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((v["vertex8"]["r2"].as_f64().unwrap() - 0.5).abs() < 1e-12);

    let o = symrecon(&["demo", "ising", "--sites", "4", "--J", "1", "--g", "0.3", "--thermal", "1"], dir.path());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["classification"], "6-vertex");
    assert_eq!(v["vertex8"]["z1"], serde_json::json!([0.0, 0.0]));

    let o = symrecon(&["demo", "ising", "--sites", "4", "--J", "1", "--g", "-0.3", "--alpha", "0.6", "--beta", "0.8i"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));

    let o = symrecon(&["demo", "ising", "--sites", "3", "--J", "1", "--g", "0"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = symrecon(&["demo", "ising", "--sites", "4", "--J", "1", "--g", "0", "--alpha", "0.9", "--beta", "0.9"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}
