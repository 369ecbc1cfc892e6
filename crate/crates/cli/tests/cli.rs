use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const HEADER: &str = "family,g1,g2,g3,z_re,z_im,t,x,y,z,c12,c13,c23,e12,e13,e23,tau,c3,e_s,e_a,m1,m2,verdict1,verdict2";

fn monolab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monolab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn column(header: &str, name: &str) -> usize {
    header.split(',').position(|c| c == name).unwrap()
}

fn rows(path: &Path) -> Vec<Vec<String>> {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), HEADER);
    lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn state_reports_w_constants() {
    let out = monolab(&[
        "state", "--w", "--t", "0", "--x", "0.333333", "--y", "0.333333", "--z", "0.333334",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["family"], "w-mes");
    assert!((v["m1"].as_f64().unwrap() - 0.0923).abs() < 1e-4);
    assert_eq!(v["verdict1"], "satisfied");
}

#[test]
fn state_reports_ghz_mes() {
    let out = monolab(&[
        "state", "--ghz", "--g", "0,0,0", "--z-re", "1", "--z-im", "0",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["family"], "ghz-mes-all-zero");
    assert!((v["m1"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn state_names_the_violated_bound() {
    let out = monolab(&["state", "--ghz", "--g", "0.6,0,0", "--z-re", "1"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("g1 out of [0, 0.5)"), "{err}");
}

#[test]
fn state_as_csv_row() {
    let out = monolab(&[
        "state", "--ghz", "--g", "0.25,0,0", "--z-re", "0.5", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), HEADER);
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "ghz-one-nonzero");
    assert_eq!(row[column(HEADER, "e_a")], "0.25");
    assert_eq!(row[column(HEADER, "t")], "");
}

#[test]
fn sample_is_byte_identical_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let c = dir.path().join("c.csv");
    for (path, seed) in [(&a, "7"), (&b, "7"), (&c, "8")] {
        let out = monolab(&[
            "sample",
            "--family",
            "ghz-generic",
            "--n",
            "2000",
            "--seed",
            seed,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        let v = json(&out);
        assert_eq!(v["n"], 2000);
        assert!(v["summary"]["min_m1"].as_f64().unwrap() >= -1e-9);
    }
    let (a, b, c) = (
        fs::read(&a).unwrap(),
        fs::read(&b).unwrap(),
        fs::read(&c).unwrap(),
    );
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn sample_rows_follow_the_schema() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.csv");
    let out = monolab(&[
        "sample",
        "--family",
        "w",
        "--n",
        "500",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["seed"], 42);
    assert!(v["summary"]["fraction_m2_violated"].as_f64().unwrap() >= 0.9);
    let rows = rows(&path);
    assert_eq!(rows.len(), 500);
    for row in &rows {
        assert_eq!(row.len(), 24);
        assert_eq!(row[0], "w");
        assert!(row[1..6].iter().all(String::is_empty));
        assert!(row[6..10].iter().all(|c| !c.is_empty()));
    }
}

#[test]
fn sample_rejects_unknown_family_and_unwritable_path() {
    assert!(!monolab(&["sample", "--family", "nope"]).status.success());
    let out = monolab(&[
        "sample",
        "--family",
        "w",
        "--n",
        "3",
        "--out",
        "/nonexistent/dir/x.csv",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scan_case1_is_satisfied_everywhere() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("case1.csv");
    let out = monolab(&[
        "scan",
        "--case",
        "case1",
        "--grid",
        "101",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let rows = rows(&path);
    assert_eq!(rows.len(), 101);
    assert!(rows
        .iter()
        .all(|r| r[22] == "satisfied" && r[23] == "satisfied"));
}

#[test]
fn scan_case2_r1_changes_sign_near_028() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r1.csv");
    let out = monolab(&[
        "scan",
        "--case",
        "case2-r1",
        "--grid",
        "201",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let rows = rows(&path);
    assert_eq!(rows.len(), 201);
    let flips: Vec<f64> = rows
        .windows(2)
        .filter(|w| w[0][22] != w[1][22])
        .map(|w| w[1][1].parse().unwrap())
        .collect();
    assert_eq!(flips.len(), 1);
    assert!((0.27..=0.29).contains(&flips[0]), "{flips:?}");
}

#[test]
fn scan_case2_has_full_grid() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("case2.csv");
    let out = monolab(&[
        "scan",
        "--case",
        "case2",
        "--grid",
        "21",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(json(&out)["cells"], 441);
    assert_eq!(rows(&path).len(), 441);
}

#[test]
fn scan_rejects_unknown_preset() {
    let out = monolab(&["scan", "--case", "case9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("case9"));
}

#[test]
fn boundary_reports_root_or_no_sign_change() {
    let out = monolab(&["boundary", "--case", "case2-r1"]);
    assert!(out.status.success());
    let root = json(&out)["root"].as_f64().unwrap();
    assert!((root - 0.28).abs() < 0.005);

    let out = monolab(&["boundary", "--case", "case1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no sign change"));
}

#[test]
fn verify_exit_code_follows_the_checks() {
    let out = monolab(&["verify", "--samples", "100", "--volume-samples", "20000"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["passed"] == true));

    // two draws per volume point cannot resolve the volumes
    let out = monolab(&["verify", "--samples", "10", "--volume-samples", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["passed"], false);
}
