use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn latent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latent"))
        .args(args)
        .output()
        .expect("the binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn emit(dir: &Path, name: &str) -> PathBuf {
    let path = dir.join(format!("{name}.json"));
    let o = latent(&["emit-fixture", name, "--out", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_i2_passes() {
    let dir = tempfile::tempdir().unwrap();
    let i2 = emit(dir.path(), "FIX-I2");
    let o = latent(&["check", s(&i2)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("pass R.4"));
}

#[test]
fn check_reports_a_failed_axiom() {
    let dir = tempfile::tempdir().unwrap();
    let i2 = emit(dir.path(), "FIX-I2");
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&i2).unwrap()).unwrap();
    // The restriction of the identity is the empty map, so R.1 fails there.
    v["restriction"]["1"] = Value::from("0");
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, v.to_string()).unwrap();
    let o = latent(&["check", s(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL R.1"));
}

#[test]
fn parse_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"objects\": [\"A\"],\n  oops\n}").unwrap();
    let o = latent(&["check", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    let o = latent(&["check", "/nonexistent/cat.json"]);
    assert_eq!(o.status.code(), Some(2));
    let o = latent(&["emit-fixture", "FIX-NOPE"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn classify_lax_slice() {
    let dir = tempfile::tempdir().unwrap();
    let b = emit(dir.path(), "T1-LAX-SLICE");
    let o = latent(&["classify", s(&b)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("admissible: yes, separated: no, hyperconnected: no"));
}

#[test]
fn table1_reproduces_every_row() {
    let o = latent(&["table1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for i in 1..=9 {
        assert!(out.contains(&format!("pass row.{i}")), "{out}");
    }
}

#[test]
fn structured_output_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let b = emit(dir.path(), "T1-STRICT-CODOMAIN");
    let a = latent(&["--format", "structured", "prone", "--oracle", s(&b)]);
    let c = latent(&["--format", "structured", "prone", "--oracle", s(&b)]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, c.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["passed"], Value::Bool(true));
    let ids: Vec<&str> = v["reports"][0]["clauses"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

#[test]
fn emitted_fixtures_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["FIX-TRIV2", "FIX-I2", "FIX-PAR1", "FIX-PAR2"] {
        let p = emit(dir.path(), name);
        let o = latent(&["--format", "structured", "emit-fixture", name]);
        let printed: Value = serde_json::from_slice(&o.stdout).unwrap();
        let written: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
        assert_eq!(printed["data"]["fixture"], written, "{name}");
        assert_eq!(latent(&["check", s(&p)]).status.code(), Some(0), "{name}");
    }
}

#[test]
fn fixture_sizes() {
    let sizes = |name: &str| {
        let o = latent(&["--format", "structured", "emit-fixture", name]);
        let v: Value = serde_json::from_slice(&o.stdout).unwrap();
        let f = &v["data"]["fixture"];
        (f["objects"].as_array().unwrap().len(), f["arrows"].as_array().unwrap().len())
    };
    assert_eq!(sizes("FIX-TRIV2"), (2, 2));
    assert_eq!(sizes("FIX-I2"), (1, 7));
    assert_eq!(sizes("FIX-PAR2").0, 3);
}

#[test]
fn construct_then_classify() {
    let dir = tempfile::tempdir().unwrap();
    let par1 = emit(dir.path(), "FIX-PAR1");
    let out = dir.path().join("slice.json");
    let o = latent(&["construct", "simple-slice", s(&par1), "--mode", "strict", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = latent(&["classify", s(&out)]);
    assert!(stdout(&o).contains("admissible: yes, separated: yes, hyperconnected: yes"));

    let i2 = emit(dir.path(), "FIX-I2");
    let o = latent(&["construct", "elements", s(&i2)]);
    assert_eq!(o.status.code(), Some(2), "elements needs a presheaf block");
}

#[test]
fn pullbacks_agree_with_the_original_definition() {
    let dir = tempfile::tempdir().unwrap();
    let par1 = emit(dir.path(), "FIX-PAR1");
    let o = latent(&["pullbacks", "--oracle", s(&par1)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("pass oracle.agree"));
}

#[test]
fn par_of_injections_on_sets() {
    let dir = tempfile::tempdir().unwrap();
    let m = emit(dir.path(), "FIX-SETS1-MONO");
    let out = dir.path().join("par.json");
    let o = latent(&["par", s(&m), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(latent(&["check", s(&out)]).status.code(), Some(0));
}

#[test]
fn split_the_lax_slice() {
    let dir = tempfile::tempdir().unwrap();
    let b = emit(dir.path(), "T1-LAX-SLICE");
    let o = latent(&["split", s(&b)]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn dual_and_transposes() {
    let dir = tempfile::tempdir().unwrap();
    let e = emit(dir.path(), "T1-STRICT-SLICE");
    let dual = dir.path().join("dual.json");
    let o = latent(&["dual", "--double", s(&e), "--out", s(&dual)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("pass eta_then_epsilon"));

    // The identity of E* transposes both ways: to the unit E -> E** and to
    // the counit E** -> E.
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&dual).unwrap()).unwrap();
    let src = &v["source"];
    let objects: serde_json::Map<String, Value> =
        src["objects"].as_array().unwrap().iter().map(|o| (o.as_str().unwrap().into(), o.clone())).collect();
    let arrows: serde_json::Map<String, Value> = src["arrows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| (a["name"].as_str().unwrap().into(), a["name"].clone()))
        .collect();
    let id = dir.path().join("id.json");
    std::fs::write(&id, serde_json::json!({"objects": objects, "arrows": arrows}).to_string()).unwrap();

    let o = latent(&["transpose", s(&e), s(&dual), s(&id), "--into-dual"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = latent(&["transpose", s(&dual), s(&e), s(&id)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("pass round_trip"));
}

#[test]
fn dual_of_a_non_hyperfibration_fails() {
    let dir = tempfile::tempdir().unwrap();
    let b = emit(dir.path(), "T1-LAX-SLICE");
    let o = latent(&["dual", s(&b)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not hyperconnected"));
}

#[test]
fn factorize_one_arrow() {
    let dir = tempfile::tempdir().unwrap();
    let b = emit(dir.path(), "T1-STRICT-CODOMAIN");
    let o = latent(&["factorize", s(&b)]);
    assert_eq!(o.status.code(), Some(0));
    let o = latent(&["factorize", s(&b), "--arrow", "no such arrow"]);
    assert_eq!(o.status.code(), Some(2));
}
