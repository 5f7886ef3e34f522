use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plsmooth")).args(args).output().unwrap()
}

fn json(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(bytes)))
}

fn catalog_file(dir: &Path, name: &str) -> PathBuf {
    let out = run(&["catalog", name]);
    assert!(out.status.success());
    let path = dir.join(format!("{name}.json"));
    std::fs::write(&path, out.stdout).unwrap();
    path
}

fn off_counts(text: &str) -> (usize, usize, usize) {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("OFF"));
    let counts: Vec<usize> = lines.next().unwrap().split(' ').map(|c| c.parse().unwrap()).collect();
    (counts[0], counts[1], counts[2])
}

#[test]
fn reports_carry_schema_version_and_command() {
    let dir = tempfile::tempdir().unwrap();
    let sphere = catalog_file(dir.path(), "sphere");
    let out = run(&["homology", sphere.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out.stdout);
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["command"], "homology");
    assert_eq!(report["groups"], serde_json::json!(["Z", "0", "Z"]));
}

#[test]
fn tolerance_report_is_opt_in() {
    let dir = tempfile::tempdir().unwrap();
    let sphere = catalog_file(dir.path(), "sphere");
    let plain = json(&run(&["check-manifold", sphere.to_str().unwrap(), "--dim", "2"]).stdout);
    assert!(plain.get("tolerances").is_none());
    let full = json(&run(&["--tolerance-report", "check-manifold", sphere.to_str().unwrap(), "--dim", "2"]).stdout);
    assert!(full["tolerances"].is_object());
    assert_eq!(full["report"]["verdict"], "verified_manifold");
}

#[test]
fn usage_errors_exit_2_with_json_on_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    for args in [
        vec!["validate", missing.to_str().unwrap()],
        vec!["no-such-command"],
        vec!["catalog", "no-such-entry"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
    let out = run(&["validate", missing.to_str().unwrap()]);
    let err = json(&out.stderr);
    assert_eq!(err["kind"], "usage");
    assert_eq!(err["schema_version"], 1);
}

#[test]
fn bad_index_is_reported_with_its_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"schema_version":1,"ambient_dim":2,"vertices":[["0","0"],["1","0"],["0","1"]],"top_simplices":[[0,1,3]]}"#,
    )
    .unwrap();
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("top_simplices[0][2]"));
}

#[test]
fn non_canonical_rational_warns_but_validates() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("half.json");
    std::fs::write(
        &path,
        r#"{"schema_version":1,"ambient_dim":1,"vertices":[["0"],["2/4"]],"top_simplices":[[0,1]]}"#,
    )
    .unwrap();
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = format!("{}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr));
    assert!(text.contains("2/4"), "{text}");
}

#[test]
fn failed_verdict_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let glued = catalog_file(dir.path(), "glued-tetrahedra");
    let out = run(&["check-manifold", glued.to_str().unwrap(), "--dim", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out.stdout)["ok"], false);
}

#[test]
fn off_export_counts() {
    let dir = tempfile::tempdir().unwrap();
    let tet = catalog_file(dir.path(), "tetrahedron");
    let out = run(&["export-off", tet.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(off_counts(&String::from_utf8(out.stdout).unwrap()), (4, 4, 6));

    let torus = catalog_file(dir.path(), "torus7");
    let out = run(&["export-off", torus.to_str().unwrap(), "--project"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(off_counts(&String::from_utf8(out.stdout).unwrap()), (7, 14, 21));

    let high = catalog_file(dir.path(), "boundary-4-simplex");
    assert_eq!(run(&["export-off", high.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn subdivision_writes_a_loadable_complex() {
    let dir = tempfile::tempdir().unwrap();
    let tri = catalog_file(dir.path(), "equilateral-triangle");
    let fine = dir.path().join("fine.json");
    let out = run(&["subdivide", tri.to_str().unwrap(), "--scheme", "edgewise", "--degree", "3", "-o", fine.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let file = json(&std::fs::read(&fine).unwrap());
    assert_eq!(file["top_simplices"].as_array().unwrap().len(), 9);
    assert_eq!(run(&["validate", fine.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn seeded_runs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let diamond = catalog_file(dir.path(), "diamond");
    let args = ["--seed", "5", "smooth-eval", diamond.to_str().unwrap(), "--map", "F", "--samples", "300"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn secant_reports_convergence() {
    let dir = tempfile::tempdir().unwrap();
    let interval = catalog_file(dir.path(), "interval");
    let out = run(&["secant", interval.to_str().unwrap(), "--function", "square", "--delta", "0.01"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out.stdout)["ok"], true);
}
