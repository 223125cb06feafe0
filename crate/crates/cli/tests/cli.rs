use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn drgeom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_drgeom")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn records(path: &Path) -> Vec<Value> {
    fs::read_to_string(path).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn check<'a>(recs: &'a [Value], name: &str) -> &'a Value {
    recs.iter().find(|r| r["record"] == "check" && r["name"] == name).unwrap_or_else(|| panic!("no check {name}"))
}

#[test]
fn build_example_space() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "ex.json", r#"{"type": "damek_ricci", "m": 6, "mult_plus": 1, "mult_minus": 0}"#);
    let o = drgeom(&["build", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("dim 15, c1 = -8"), "{s}");
    assert!(s.contains("clifford axioms exact"), "{s}");
}

#[test]
fn build_both_classes_and_cayley() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "m3.json", r#"{"type": "damek_ricci", "m": 3, "mult_plus": 1, "mult_minus": 1}"#);
    let s = stdout(&drgeom(&["build", "--config", cfg.to_str().unwrap()]));
    assert!(s.contains("dim 12,"), "{s}");
    let cfg = write(dir.path(), "oh.json", r#"{"type": "cayley", "epsilon": -1}"#);
    let s = stdout(&drgeom(&["build", "--config", cfg.to_str().unwrap()]));
    assert!(s.contains("dim 16, c1 = -9"), "{s}");
}

#[test]
fn malformed_config_is_a_configuration_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.json", "{\"type\": \"damek_ricci\",\n  \"m\": 3,\n  \"colour\": 2}\n");
    let o = drgeom(&["build", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("colour") && err.contains("line 3"), "{err}");

    let cfg = write(dir.path(), "m9.json", r#"{"type": "damek_ricci", "m": 9}"#);
    let o = drgeom(&["build", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("field `m`"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(drgeom(&["verify", "--suite", "astrology"]).status.code(), Some(2));
    assert_eq!(drgeom(&["verify", "--suite", "cayley", "--samples", "5"]).status.code(), Some(2));
    assert_eq!(drgeom(&["verify", "--suite", "cayley", "--tol", "-1"]).status.code(), Some(2));
    assert_eq!(drgeom(&["verify", "--suite", "geodesy"]).status.code(), Some(2));
}

#[test]
fn einstein_suite_reports_the_sphere_radius() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.jsonl");
    let o = drgeom(&["verify", "--suite", "einstein", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
    let recs = records(&out);
    let c = check(&recs, "cot_r0");
    assert_eq!(c["status"], "pass");
    assert_eq!(c["value"]["rational"], "0");
    assert_eq!(c["value"]["radical_coeff"], "-5/24");
    assert_eq!(c["value"]["radicand"], 6);
    let d: f64 = c["value"]["decimal"].as_str().unwrap().parse().unwrap();
    assert!((d + 5.0 * 6f64.sqrt() / 24.0).abs() < 1e-15);
    let det = check(&recs, "det Q nonzero");
    assert_eq!(det["value"]["rational"], "-39015/16562");
    assert_eq!(recs.last().unwrap()["record"], "summary");
    assert!(recs.iter().filter(|r| r["record"] == "check").all(|r| r["anchor"].as_str().is_some_and(|a| !a.is_empty())));
}

#[test]
fn hyperbolic_cayley_plane_has_no_einstein_hypersurfaces() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.jsonl");
    let o = drgeom(&["verify", "--suite", "cayley", "--epsilon", "-1", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
    let recs = records(&out);
    for name in ["no (7,8) einstein hypersurface", "no (7,7,1) einstein hypersurface"] {
        assert_eq!(check(&recs, name)["status"], "pass");
    }
    assert_eq!(recs[0]["config"]["epsilon"], -1);
}

#[test]
fn example_subspace_passes_geodesy() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.jsonl");
    let o = drgeom(&["verify", "--suite", "geodesy", "--space", "example33", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
    let recs = records(&out);
    assert_eq!(check(&recs, "(-1)-subspace, eigenvalue +1")["status"], "pass");
    assert_eq!(check(&recs, "(-1)-subspace, eigenvalue -1")["status"], "pass");
    assert_eq!(check(&recs, "not homogeneous, eigenvalue +1")["status"], "pass");
}

#[test]
fn reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "ex.json", r#"{"type": "damek_ricci", "m": 5}"#);
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = drgeom(&[
            "verify",
            "--config",
            cfg.to_str().unwrap(),
            "--suite",
            "all",
            "--samples",
            "8",
            "--seed",
            "42",
            "--mode",
            "float",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stdout(&o));
        fs::read(out).unwrap()
    };
    assert_eq!(run("a.jsonl"), run("b.jsonl"));
}

#[test]
fn failing_checks_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "m2.json", r#"{"type": "damek_ricci", "m": 2}"#);
    let o = drgeom(&["verify", "--config", cfg.to_str().unwrap(), "--suite", "curvature", "--mode", "float", "--tol", "1e-300"]);
    assert_eq!(o.status.code(), Some(1));
    let recs: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(recs.iter().any(|r| r["status"] == "fail"));
}
