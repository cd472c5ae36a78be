//! End-to-end checks of the binary: schemas, exit codes, and reproducible
//! sampling.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_matchdist"))
}

fn write_model(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

const K4_MODEL: &str = r#"{"host": {"kind": "complete", "n": 2}, "families": [[[0, 1]]]}"#;

#[test]
fn exact_emits_the_documented_masses() {
    let dir = tempfile::tempdir().unwrap();
    let model = write_model(dir.path(), "k4.json", K4_MODEL);
    let out = dir.path().join("k4.csv");
    let res = run(&["exact", "--model", model.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(res.status.success(), "stderr: {}", String::from_utf8_lossy(&res.stderr));
    let csv = fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "model,n,l,empirical,seed,samples,k,mass,reference,tv,tv_lower,tv_upper,coeff_bound,pieces"
    );
    assert!(csv.contains(",0,0.666667,"));
    assert!(csv.contains(",1,0.333333,"));
}

#[test]
fn exact_json_carries_rationals() {
    let dir = tempfile::tempdir().unwrap();
    let model = write_model(dir.path(), "k4.json", K4_MODEL);
    let out = dir.path().join("k4.json.out");
    let res = run(&[
        "exact",
        "--model",
        model.to_str().unwrap(),
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success());
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["pmf"][0]["exact"], "2/3");
    assert_eq!(report["pmf"][1]["exact"], "1/3");
    assert_eq!(report["reference"]["rates"][0], "1/4");
    assert!(report["tv_convention"].as_str().unwrap().contains("no 1/2 factor"));
    // The generating-function coefficients ride along in JSON output.
    let coeffs = report["pgf"]["coefficients"].as_array().unwrap();
    assert_eq!(coeffs[0]["x"], serde_json::json!([0]));
    assert_eq!(coeffs[0]["alpha"], "1/1");
    assert_eq!(coeffs[1]["x"], serde_json::json!([1]));
    assert_eq!(coeffs[1]["alpha"], "1/3");
}

#[test]
fn sample_against_exact_lands_near_the_law() {
    // 10^5 draws at seed 7: the empirical P(1) concentrates around 1/3.
    let dir = tempfile::tempdir().unwrap();
    let model = write_model(dir.path(), "k4.json", K4_MODEL);
    let out = dir.path().join("s.json");
    let res = run(&[
        "sample",
        "--model",
        model.to_str().unwrap(),
        "--samples",
        "100000",
        "--seed",
        "7",
        "--against",
        "exact",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success());
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["empirical"], true);
    assert_eq!(report["seed"], 7);
    let p1 = report["pmf"]
        .as_array()
        .unwrap()
        .iter()
        .find(|row| row["k"] == serde_json::json!([1]))
        .unwrap()["value"]
        .as_f64()
        .unwrap();
    assert!((0.323..=0.343).contains(&p1), "P(1) = {p1}");
}

#[test]
fn decompose_emits_piece_sizes() {
    let dir = tempfile::tempdir().unwrap();
    let model = write_model(
        dir.path(),
        "overlap.json",
        r#"{"host": {"kind": "complete", "n": 3},
            "families": [[[0, 1], [2, 3]], [[2, 3], [4, 5]]]}"#,
    );
    let out = dir.path().join("d.json");
    let res = run(&[
        "exact",
        "--model",
        model.to_str().unwrap(),
        "--decompose",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success());
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let pieces = report["decomposition"].as_array().unwrap();
    assert_eq!(pieces.len(), 3);
    // {1} -> (0,1); {2} -> (4,5); {1,2} -> (2,3).
    assert_eq!(pieces[0]["subset"], serde_json::json!([1]));
    assert_eq!(pieces[0]["edges"], 1);
    assert_eq!(pieces[2]["subset"], serde_json::json!([1, 2]));
    assert_eq!(pieces[2]["edges"], 1);
    assert_eq!(report["reference"]["kind"], "poisson_decomposed");
}

#[test]
fn sweep_rows_and_trend_line() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let res = run(&[
        "sweep",
        "--template",
        "balanced-pm",
        "--r",
        "3",
        "--n-from",
        "1",
        "--n-to",
        "4",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success());
    let csv = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 6); // header + 4 rows + trend
    assert!(lines[0].starts_with("template,r,n,l,p0_exact,p0_poisson"));
    assert!(lines[1].starts_with("balanced-pm,3,1,1,0.500000,0.472367"));
    assert!(lines[5].contains("p0 strictly decreasing 3/3 steps"));
}

#[test]
fn validation_failures_exit_2_with_an_error_record() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");

    // Unparseable model.
    let bad = write_model(dir.path(), "bad.json", "{not json");
    let res = run(&["exact", "--model", bad.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2));
    let record: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&res.stderr).trim()).unwrap();
    assert_eq!(record["error"]["kind"], "ModelParse");

    // Edge outside the host.
    let oob = write_model(
        dir.path(),
        "oob.json",
        r#"{"host": {"kind": "complete", "n": 2}, "families": [[[0, 9]]]}"#,
    );
    let res = run(&["exact", "--model", oob.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2));
    let record: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&res.stderr).trim()).unwrap();
    assert_eq!(record["error"]["kind"], "EdgeOutOfHost");

    // Unknown template.
    let res = run(&[
        "sweep", "--template", "nope", "--n-from", "1", "--n-to", "2", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(2));

    // Forbidden set that kills every perfect matching.
    let dense = write_model(
        dir.path(),
        "dense.json",
        r#"{"host": {"kind": "complete_minus", "n": 2,
            "forbidden": [[0, 1], [0, 2], [1, 2]]}, "families": [[[0, 3]]]}"#,
    );
    let res = run(&["exact", "--model", dense.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2));
    let record: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&res.stderr).trim()).unwrap();
    assert_eq!(record["error"]["kind"], "ForbiddenTooDense");
}

#[test]
fn resource_caps_exit_3_and_keep_partial_sweep_rows() {
    // balanced-pm at r = 6 explodes the profile support at n = 2; the row
    // for n = 1 must survive in the output.
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("partial.csv");
    let res = run(&[
        "sweep",
        "--template",
        "balanced-pm",
        "--r",
        "6",
        "--n-from",
        "1",
        "--n-to",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(3), "stderr: {}", String::from_utf8_lossy(&res.stderr));
    let record: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&res.stderr).trim()).unwrap();
    assert_eq!(record["error"]["kind"], "TooLargeToEnumerate");
    let csv = fs::read_to_string(&out).unwrap();
    assert!(csv.contains("balanced-pm,6,1,"));
    assert!(!csv.contains("balanced-pm,6,2,"));
}

#[test]
fn sampled_multipartite_runs_validate_balance() {
    let dir = tempfile::tempdir().unwrap();
    let model = write_model(
        dir.path(),
        "k3x2.json",
        r#"{"host": {"kind": "multipartite", "n": 1, "r": 3}, "families": [[[0, 2]]]}"#,
    );
    let out = dir.path().join("m.csv");
    let res = run(&[
        "sample",
        "--model",
        model.to_str().unwrap(),
        "--samples",
        "10000",
        "--seed",
        "13",
        "--out",
        out.to_str().unwrap(),
    ]);
    // The sampler asserts balance on every draw; success implies all passed.
    assert!(res.status.success());
    let csv = fs::read_to_string(&out).unwrap();
    assert!(csv.contains(",true,13,10000,"));
}
