//! End-to-end tests of the `slantlab` binary: flags, file formats, exit
//! codes, and report determinism.

use std::path::Path;
use std::process::{Command, Output};

fn slantlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slantlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

const G16_QUARTER: &str = r#"{
    "name": "tilted-plane",
    "ambient": "S6",
    "variables": ["u", "v"],
    "constants": { "beta": 1.0471975511965979 },
    "components": ["u", "v*cos(beta)", "v*sin(beta)", "0"],
    "domain": [[-1.0, 1.0], [-1.0, 1.0]],
    "jacobian": "fd"
}"#;

#[test]
fn verify_structure_registry_entries() {
    let out = slantlab(&["verify-structure", "-r", "S5"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("Norden, epsilon=-1, anti-isometry"), "{text}");

    // The printed 4-dimensional structures classify para-complex and say so.
    let out = slantlab(&["verify-structure", "-r", "S1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("para-complex, epsilon=+1, anti-isometry"), "{text}");
    assert!(text.contains("not Norden"), "{text}");
}

#[test]
fn verify_structure_inline_manifold() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    write(
        &path,
        r#"{ "dim": 2, "J": [[0.0, 1.0], [-1.0, 0.0]], "g": [[1.0, 0.0], [0.0, -1.0]] }"#,
    );
    let out = slantlab(&["verify-structure", "-m", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("Norden"));
}

#[test]
fn verify_structure_rejects_bad_pair() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    write(
        &path,
        r#"{ "dim": 2, "J": [[1.0, 1.0], [0.0, 1.0]], "g": [[1.0, 0.0], [0.0, -1.0]] }"#,
    );
    let out = slantlab(&["verify-structure", "-m", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("residual"), "{}", stderr(&out));
}

#[test]
fn classify_norden_plane_type3() {
    // cos^2(beta) = 0.25 at beta = pi/3: lambda = 0.5, type 3,
    // theta = arcsinh(sqrt(0.5)).
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g16.json");
    write(&path, G16_QUARTER);
    let out = slantlab(&[
        "classify",
        "-r",
        "S6",
        "-i",
        path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["type"], "type3");
    let lambda = report["lambda"].as_f64().unwrap();
    assert!((lambda - 0.5).abs() < 1e-8, "{lambda}");
    let theta = report["theta"].as_f64().unwrap();
    assert!((theta - 0.5f64.sqrt().asinh()).abs() < 1e-8, "{theta}");
    assert_eq!(report["inducedSignature"][0], 2);
    assert_eq!(report["inducedSignature"][1], 0);
    assert_eq!(report["seed"], 42);
    assert_eq!(report["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(report["config"]["samples"], 64);
}

#[test]
fn classify_defaults_to_document_ambient() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g16.json");
    write(&path, G16_QUARTER);
    let out = slantlab(&[
        "classify",
        "-i",
        path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["structureClass"], "norden");
    assert_eq!(report["config"]["structure"], "immersion document");
}

#[test]
fn classify_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g16.json");
    write(&path, G16_QUARTER);
    let args = [
        "classify",
        "-r",
        "S6",
        "-i",
        path.to_str().unwrap(),
        "--format",
        "json",
        "--seed",
        "7",
    ];
    let a = slantlab(&args);
    let b = slantlab(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn classify_rejects_nonpositive_tolerances() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g16.json");
    write(&path, G16_QUARTER);
    let out = slantlab(&["classify", "-i", path.to_str().unwrap(), "--tol-const=-1.0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("positive"), "{}", stderr(&out));
    let out = slantlab(&["classify", "-i", path.to_str().unwrap(), "--tol-residual=0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("positive"), "{}", stderr(&out));
}

#[test]
fn malformed_json_names_the_byte_offset() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    write(&path, "{\n  \"name\": oops\n}");
    let out = slantlab(&["classify", "-i", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("byte"), "{err}");
}

#[test]
fn unknown_registry_key_is_a_validation_error() {
    let out = slantlab(&["verify-structure", "-r", "S99"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("S99"));
}

#[test]
fn gallery_run_single_entry() {
    let out = slantlab(&["gallery", "run", "G04", "-p", "a=2", "-p", "b=0"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("PASS"), "{text}");
    assert!(text.contains("type1"), "{text}");
    assert!(text.contains("1.3333333333333"), "{text}");
}

#[test]
fn gallery_run_all_entries_passes() {
    let out = slantlab(&["gallery", "run"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(!text.contains("FAIL"), "{text}");
    assert!(text.contains("G07    SKIP"), "{text}");
    // Every enabled entry produced a PASS line.
    assert!(text.matches("PASS").count() >= 17, "{text}");
}

#[test]
fn gallery_list_shows_entries() {
    let out = slantlab(&["gallery", "list"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("G01"));
    assert!(text.contains("G17"));
    assert!(text.contains("S7"));
}

#[test]
fn sweep_produces_csv_with_excluded_boundary() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("sweep.csv");
    let out = slantlab(&[
        "sweep",
        "G04",
        "--param",
        "a=0.5:1.5:0.5",
        "--fix",
        "b=0",
        "-o",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "paramValue,lambda,type,theta,residualP2,excludedReason"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].contains("type3"), "{}", rows[0]);
    assert!(rows[1].contains("degenerates"), "{}", rows[1]);
    assert!(rows[2].contains("type1"), "{}", rows[2]);
}

#[test]
fn sweep_rejects_unknown_parameter() {
    let out = slantlab(&["sweep", "G04", "--param", "zzz=0:1:0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("zzz"));
}

#[test]
fn curve_line_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("line.json");
    write(
        &path,
        r#"{
            "ambient": "S5",
            "variable": "s",
            "components": ["2*s", "s"],
            "domain": [-1.0, 1.0],
            "samples": 64
        }"#,
    );
    let out = slantlab(&["curve", "-i", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["type"], "type3");
    assert_eq!(report["verdict"], "geodesic");
    let lambda = report["lambda"].as_f64().unwrap();
    assert!((lambda - 16.0 / 9.0).abs() < 1e-9);
    assert_eq!(report["lightlikeSkipped"], 0);
}

#[test]
fn curve_lightlike_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("null.json");
    write(
        &path,
        r#"{
            "ambient": "S5",
            "variable": "s",
            "components": ["s", "s"],
            "domain": [-1.0, 1.0]
        }"#,
    );
    let out = slantlab(&["curve", "-i", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("light-like"));
}
