use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn curvjet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvjet")).args(args).output().expect("binary runs")
}

fn write_spec(dir: &Path, name: &str, json: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, json).unwrap();
    path.display().to_string()
}

fn preset(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "specs", name].iter().collect();
    p.display().to_string()
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn row(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn eval_fixed_axis_linear_angle() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(
        dir.path(),
        "s.json",
        r#"{"kind":"fixed-axis-poly","axis":[0,0,1],"coeffs":[0,1],"domain":[0,1]}"#,
    );
    let json = stdout_json(&curvjet(&["eval", "--spec", &spec, "--order", "2", "--points", "0.5"]));
    let kappa = &json["samples"][0]["kappa"];
    let expected = [[0.0, 0.0, 1.0], [0.0; 3], [0.0; 3]];
    for (n, e) in expected.iter().enumerate() {
        let got = row(&kappa[n]);
        assert!(got.iter().zip(e).all(|(a, b)| (a - b).abs() <= 1e-15), "row {n}: {got:?}");
    }
    assert_eq!(json["order"], 2);
    assert_eq!(json["samples"][0]["kappa_tilde"].as_array().unwrap().len(), 2);
}

#[test]
fn eval_poly3_matches_tangent_map_value() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(
        dir.path(),
        "s.json",
        r#"{"kind":"poly3","coeffs":[[0,0.3],[0,0,0.2],[0,0,0,0.1]],"domain":[0,2]}"#,
    );
    let json = stdout_json(&curvjet(&["eval", "--spec", &spec, "--order", "0", "--points", "1"]));
    // from a 40-digit central difference of the matrix exponential
    let expected = [0.312_862_946_282_843_66, 0.367_700_308_642_266_49, 0.326_010_543_866_936];
    let kappa = row(&json["samples"][0]["kappa"][0]);
    for (a, b) in kappa.iter().zip(expected) {
        assert!((a - b).abs() < 1e-14, "{kappa:?}");
    }
    assert!(json["samples"][0]["kappa_tilde"].as_array().unwrap().is_empty());
}

#[test]
fn crossing_pi_exits_with_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(
        dir.path(),
        "s.json",
        r#"{"kind":"poly3","coeffs":[[0,3.2],[0.1],[0]],"domain":[0,2]}"#,
    );
    let out = curvjet(&["eval", "--spec", &spec, "--xi", "0:1.5:4"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("GimbalDomain"), "{err}");
    assert!(err.contains("xi = 1"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn io_and_spec_errors_exit_one() {
    let out = curvjet(&["eval", "--spec", "/nonexistent/spec.json", "--points", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let bad = write_spec(dir.path(), "bad.json", r#"{"kind":"poly3","coeffs":[[],[1],[1]],"domain":[0,1]}"#);
    let out = curvjet(&["eval", "--spec", &bad, "--points", "0.5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("InvalidSpec"));
    let out = curvjet(&["eval", "--spec", &preset("poly3.json"), "--points", "5"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn csv_and_json_carry_the_same_values() {
    let spec = preset("fourier3.json");
    let json = stdout_json(&curvjet(&["eval", "--spec", &spec, "--order", "3", "--xi", "0:2:3"]));
    let out = curvjet(&["eval", "--spec", &spec, "--order", "3", "--xi", "0:2:3", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut checked = 0;
    for record in reader.records() {
        let record = record.unwrap();
        let xi: f64 = record[0].parse().unwrap();
        let sample = json["samples"]
            .as_array()
            .unwrap()
            .iter()
            .find(|s| s["xi"].as_f64() == Some(xi))
            .unwrap();
        let order: usize = record[2].parse().unwrap();
        let expected = match &record[1] {
            "Q" => row(&sample["Q"]),
            "kappa_tilde" => row(&sample["kappa_tilde"][order - 1]),
            name => row(&sample[name][order]),
        };
        let values: Vec<f64> = (3..12).filter(|&c| !record[c].is_empty()).map(|c| record[c].parse().unwrap()).collect();
        assert_eq!(values, expected, "{record:?}");
        checked += 1;
    }
    // per point: Q, 4 kappa, 4 kappa_bar, 3 kappa_tilde
    assert_eq!(checked, 3 * 12);
}

#[test]
fn zero_increment_reproduces_eval_rows() {
    let spec = preset("poly3.json");
    let points = "--points=-0.75,0,0.5";
    let eval = curvjet(&["eval", "--spec", &spec, "--order", "4", points, "--format", "csv"]);
    let update = curvjet(&[
        "update", "--spec", &spec, "--increment", &preset("zero.json"), "--order", "4", points, "--format", "csv",
    ]);
    let eval = String::from_utf8(eval.stdout).unwrap();
    let update = String::from_utf8(update.stdout).unwrap();
    let rows: Vec<&str> = update.lines().collect();
    assert_eq!(rows.len(), 1 + 3 * 6);
    for line in rows {
        assert!(eval.lines().any(|l| l == line), "missing {line}");
    }
}

#[test]
fn update_verify_columns_are_small() {
    let out = curvjet(&[
        "update",
        "--spec",
        &preset("fourier3.json"),
        "--increment",
        &preset("increment.json"),
        "--order",
        "4",
        "--xi",
        "0:2:5",
        "--verify",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(&reader.headers().unwrap()[12], "mixed_err");
    let mut rows = 0;
    for record in reader.records() {
        let err: f64 = record.unwrap()[12].parse().unwrap();
        assert!(err < 1e-5, "{err}");
        rows += 1;
    }
    assert_eq!(rows, 5 * 6);
}

#[test]
fn update_json_shape() {
    let json = stdout_json(&curvjet(&[
        "update",
        "--spec",
        &preset("poly3.json"),
        "--increment",
        &preset("increment.json"),
        "--order",
        "2",
        "--points",
        "0.1",
        "--verify",
    ]));
    assert_eq!(json["spec"]["increment"]["kind"], "poly3");
    let sample = &json["samples"][0];
    assert_eq!(sample["Q"].as_array().unwrap().len(), 9);
    assert_eq!(sample["kappa"].as_array().unwrap().len(), 3);
    assert_eq!(sample["mixed_err"]["kappa"].as_array().unwrap().len(), 3);
}

#[test]
fn verify_command_reports_and_flags_domain_rows() {
    let out = curvjet(&["verify", "--spec", &preset("fourier3.json"), "--order", "4", "--xi", "0:2:3"]);
    let reports = stdout_json(&out);
    assert!(reports.as_array().unwrap().iter().all(|r| r["rows"].as_array().unwrap().iter().all(|row| row["pass"] == true)));

    let out = curvjet(&["verify", "--spec", &preset("gimbal.json"), "--order", "2", "--points", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let reports: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(reports[0]["rows"][0]["error"].as_str().unwrap().starts_with("GimbalDomain"));
}

#[test]
fn tables_output() {
    let out = curvjet(&["tables", "6"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\n4\t1\t3\t2\n"));
    assert!(text.contains("\n6\t3\t2\t2\t1\t1\t0\t0\n"));
    assert!(curvjet(&["tables", "12"]).status.success());
    assert!(!curvjet(&["tables", "13"]).status.success());
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = curvjet(&[
        "eval",
        "--spec",
        &preset("fixed_axis.json"),
        "--xi",
        "0:2:3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let json: Value = serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap();
    assert_eq!(json["samples"].as_array().unwrap().len(), 3);
}
