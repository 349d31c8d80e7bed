mod common;

use common::fixture_path;
use serde_json::Value;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toricbundle")).args(args).output().expect("binary runs")
}

fn fx(name: &str) -> String {
    fixture_path(name).to_string_lossy().into_owned()
}

fn report(out: &Output) -> Value {
    let v: Value = serde_json::from_slice(&out.stdout).expect("json on stdout");
    v["report"].clone()
}

#[test]
fn check_exit_codes() {
    let ok = run(&["check", &fx("p2_hypersurface.json")]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(report(&ok)["adapted"], Value::Bool(true));

    let bad = run(&["check", &fx("broken.json")]);
    assert_eq!(bad.status.code(), Some(2));
    let r = report(&bad);
    let failing: Vec<&Value> = r["cones"].as_array().unwrap().iter().filter(|c| c["adapted"] == Value::Bool(false)).collect();
    assert_eq!(failing.len(), 1);
    assert_eq!(failing[0]["rays"], serde_json::json!([1, 2]));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("[1, 2]"));

    let dir = std::env::temp_dir().join(format!("tb-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let malformed = dir.join("malformed.json");
    std::fs::write(&malformed, "{\"fan\": [").unwrap();
    let err = run(&["check", malformed.to_str().unwrap()]);
    assert_eq!(err.status.code(), Some(1));
    assert!(err.stdout.is_empty());
}

#[test]
fn mds_reports() {
    let out = run(&["mds", &fx("p1p1.json")]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["strong_basis"], Value::Bool(false));
    assert_eq!(r["hypersurface_failing_pairs"], serde_json::json!([[1, 3], [2, 4]]));
    assert_eq!(r["prime_checks"][0]["verdict"]["verdict"], "not_prime");
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("strong basis fails") && err.contains("(1,3),(2,4)") && err.contains("X1"));

    let gr = report(&run(&["mds", &fx("gr24.json")]));
    assert_eq!(gr["verdict"], "mori_dream");
    assert_eq!(gr["presentation"]["generators"].as_array().unwrap().len(), 1);

    let zero = report(&run(&["mds", &fx("zero.json")]));
    assert_eq!(zero["verdict"], "mori_dream");
}

#[test]
fn cox_prints_the_presentation() {
    let out = run(&["cox", &fx("p2_hypersurface.json")]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    for term in ["Y1*X1^4", "Y2*X2^4", "Y3*X3^4", "Y4*X1^3*X2^2*X3", "Y5*X1^2*X2*X3^3", "Y6*X1*X2^3*X3^2"] {
        assert!(text.contains(term), "{term} missing from {text}");
    }
}

#[test]
fn extend_outputs_the_extended_diagram() {
    let out = run(&["extend", &fx("p1p1.json")]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let m = &r["extension"]["diagram"]["matrix"];
    assert_eq!(*m, serde_json::json!([[2, 1, 0, 0, 1, 0], [0, 2, 1, 0, 0, 1], [0, 0, 2, 1, 1, 0], [1, 0, 0, 2, 0, 1]]));
    assert_eq!(r["presentation"]["generators"].as_array().unwrap().len(), 5);
}

#[test]
fn klyachko_of_a_column_is_its_line() {
    let out = run(&["klyachko", &fx("p2_hypersurface.json"), "--psi", "0,4,0"]);
    let r = report(&out);
    assert_eq!(r["dimension"], 1);
    assert_eq!(r["basis_elements"], serde_json::json!([2]));
}

#[test]
fn skeleton_needs_a_seed_and_is_deterministic() {
    let dir = std::env::temp_dir().join(format!("tb-skel-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let pts = dir.join("points.json");
    std::fs::write(&pts, "{\"points\": [[0,0],[1,0],[0,1],[0,0]], \"m\": 2}").unwrap();
    let p = pts.to_str().unwrap();
    assert_eq!(run(&["skeleton", p]).status.code(), Some(1));
    let a = run(&["skeleton", p, "--seed", "11"]);
    let b = run(&["skeleton", p, "--seed", "11"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let r = report(&a);
    assert_eq!(r["plucker_tropical"], Value::Bool(true));
    assert_eq!(r["fan"]["rays"].as_array().unwrap().len(), 6);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["budgets"]["seed"], 11);
}

#[test]
fn tropcheck_and_out_file() {
    let ok = run(&["tropcheck", &fx("p1p1.json")]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = run(&["tropcheck", &fx("p1p1.json"), "--weight", "0,1,1,1"]);
    assert_eq!(bad.status.code(), Some(2));

    let dir = std::env::temp_dir().join(format!("tb-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("r.json");
    let out = run(&["check", &fx("p2_hypersurface.json"), "--out", path.to_str().unwrap(), "--budget-groebner", "500"]);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["budgets"]["groebner"], 500);
}

#[test]
fn identical_jobs_give_identical_bytes() {
    let a = run(&["mds", &fx("p1p1.json")]);
    let b = run(&["mds", &fx("p1p1.json")]);
    assert_eq!(a.stdout, b.stdout);
}
