use std::f64::consts::PI;
use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn cascade(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cascade"))
        .args(args)
        .env_remove("CASCADE_THREADS")
        .output()
        .unwrap()
}

fn ok_json(args: &[&str]) -> Value {
    let out = cascade(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    cascade(args).status.code().unwrap()
}

fn csv_rows(out: &Output) -> Vec<Vec<String>> {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn solve_reports_regime() {
    let v = ok_json(&["solve", "--kappa", "3", "--length", "2", "--delta-s", "10", "--eta-s", "1", "--degenerate"]);
    assert_eq!(v["characteristic"]["regime"]["label"], "II");
    assert_eq!(v["matrix"]["z"], 2.0);
    assert_eq!(v["observables"]["n_as"], v["observables"]["n_ai"]);
}

#[test]
fn solve_without_couplings_is_vacuum() {
    let v = ok_json(&["solve"]);
    for n in ["n_as", "n_ai", "n_bs", "n_bi"] {
        assert_eq!(v["observables"][n], 0.0);
    }
    assert_eq!(v["observables"]["minvar_a"]["min_variance"], 1.0);
    assert_eq!(v["matrix"]["U_s"], serde_json::json!([1.0, 0.0]));
}

#[test]
fn oracle_and_analytic_outputs_agree() {
    let point = ["--kappa", "3", "--eta-s", "1", "--eta-i", "2", "--delta-tilde", "1", "--delta-s", "2", "--delta-i", "3", "--z", "0.7"];
    let run = |solver: &str| {
        let mut args = vec!["solve", "--solver", solver];
        args.extend(point);
        ok_json(&args)
    };
    let (a, o) = (run("analytic"), run("oracle"));
    let (a, o) = (a["matrix"].as_object().unwrap(), o["matrix"].as_object().unwrap());
    for (k, x) in a {
        let Some(x) = x.as_array() else { continue };
        let y = o[k].as_array().unwrap();
        let (xr, xi, yr, yi) = (x[0].as_f64().unwrap(), x[1].as_f64().unwrap(), y[0].as_f64().unwrap(), y[1].as_f64().unwrap());
        let diff = (xr - yr).hypot(xi - yi);
        assert!(diff <= 1e-6 * yr.hypot(yi).max(1e-3), "{k}: {diff:e}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["solve", "--length", "-1"]), 2);
    assert_eq!(code(&["solve", "--solver", "exact"]), 2);
    assert_eq!(code(&["solve", "--kappa", "-3"]), 2);
    assert_eq!(code(&["solve", "--degenerate", "--eta-i", "1"]), 2);
    assert_eq!(code(&["solve", "--kappa", "abc"]), 2);
    assert_eq!(code(&["scan", "--axis1", "kappa:0:1"]), 2);
    assert_eq!(code(&["scan"]), 2);
    assert_eq!(code(&["sweep-gain", "--delta-s-l", "1", "--points", "1"]), 2);
    let phase_matched = ["solve", "--kappa", "3", "--eta-s", "1.5", "--degenerate", "--length", "2"];
    assert_eq!(code(&phase_matched), 0);
    let mut strict = phase_matched.to_vec();
    strict.push("--no-fallback");
    let out = cascade(&strict);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nearly multiple"));
}

#[test]
fn classify_reports_roots() {
    let v = ok_json(&["classify", "--kappa", "3", "--eta-s", "4", "--degenerate", "--length", "2"]);
    assert_eq!(v["characteristic"]["regime"]["label"], "III");
    assert_eq!(v["characteristic"]["roots"]["roots"].as_array().unwrap().len(), 4);
}

#[test]
fn scan_output_is_reproducible_across_threads() {
    let args = [
        "scan", "--kappa", "3", "--degenerate", "--length", "2", "--axis1", "delta_s:-20:20:21", "--axis2", "eta_s:0:8:11",
        "--cross-check", "0.1", "--seed", "5", "--strict",
    ];
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_cascade")).args(args).env("CASCADE_THREADS", threads).output().unwrap()
    };
    let (one, many) = (run("1"), run("4"));
    assert!(one.status.success(), "{}", String::from_utf8_lossy(&one.stderr));
    assert_eq!(one.stdout, many.stdout);
    assert_eq!(one.stdout, run("1").stdout);
    let rows = csv_rows(&one);
    assert_eq!(rows.len(), 1 + 21 * 11);
    assert_eq!(rows[0][..3], ["delta_s", "eta_s", "regime"]);
    assert_eq!(rows[0].len(), 11);
}

#[test]
fn scan_json_and_file_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.json");
    let out = cascade(&[
        "scan", "--kappa", "3", "--three-mode", "--axis1", "delta_s:0:10:3", "--quantities", "regime,n_bs", "--format", "json",
        "--output", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    assert_eq!(v["spec"]["constraint"], "three_mode");
    assert_eq!(v["rows"][2]["delta_s"], 10.0);
}

#[test]
fn config_file_fills_gaps_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("point.json");
    fs::write(&path, r#"{"kappa": 3, "eta_s": 1, "delta_s": 0, "length": 2, "degenerate": true}"#).unwrap();
    let config = path.to_str().unwrap();
    let from_file = ok_json(&["classify", "--config", config]);
    assert_eq!(from_file["characteristic"]["regime"]["label"], "IV");
    let overridden = ok_json(&["classify", "--config", config, "--delta-s", "10"]);
    assert_eq!(overridden["characteristic"]["regime"]["label"], "II");
    assert_eq!(overridden["params"]["delta_i"], 10.0);
    fs::write(&path, r#"{"kappa": 3, "gamma": 1}"#).unwrap();
    assert_eq!(code(&["classify", "--config", config]), 2);
}

#[test]
fn compare_columns() {
    let table = |args: &[&str]| -> Vec<Vec<String>> {
        let mut all = vec!["compare", "--degenerate", "--length", "1"];
        all.extend(args);
        csv_rows(&cascade(&all))
    };
    let value = |rows: &[Vec<String>], r: usize, c: usize| rows[r][c].parse::<f64>().unwrap();

    let rows = table(&["--kappa", "2", "--delta-s", "5"]);
    assert_eq!(rows[0], ["quantity", "exact", "averaged", "pdc_only"]);
    for row in &rows[1..4] {
        assert_eq!(row[1], row[2]);
        assert_eq!(row[1], row[3]);
    }

    let even = format!("{}", 16.0 * PI);
    let rows = table(&["--kappa", "4", "--eta-s", "4", "--delta-s", &even]);
    assert_eq!(value(&rows, 2, 2), 0.0);
    assert!(value(&rows, 2, 1) > 0.0);

    let odd = format!("{}", 15.0 * PI);
    let rows = table(&["--kappa", "4", "--eta-s", "4", "--delta-s", &odd]);
    let ratio = value(&rows, 1, 1) / value(&rows, 1, 3);
    assert!(ratio > 0.1 && ratio < 10.0, "{ratio}");
}

#[test]
fn sweep_gain_table() {
    let rows = csv_rows(&cascade(&["sweep-gain", "--delta-s-l", "47.12", "--gamma-max", "6", "--points", "13"]));
    assert_eq!(rows.len(), 14);
    assert_eq!(rows[0].len(), 13);
    assert_eq!(rows[13][0], "6.0");
    let v = ok_json(&["sweep-gain", "--delta-s-l", "0", "--points", "3", "--format", "json"]);
    assert!(v["rows"][1].get("approx_n_a").is_none());
}

#[test]
fn help_states_units() {
    for (command, flags) in [
        ("solve", &["--kappa", "--eta-s", "--eta-i", "--delta-tilde", "--delta-s", "--delta-i", "--length", "--z", "--kappa-phase"][..]),
        ("classify", &["--kappa", "--length", "--eta-s-phase"][..]),
        ("scan", &["--kappa", "--delta-s", "--length", "--axis1"][..]),
        ("compare", &["--eta-i", "--delta-i", "--length"][..]),
        ("sweep-gain", &["--delta-s-l", "--ratio", "--gamma-max"][..]),
    ] {
        let out = cascade(&[command, "--help"]);
        assert!(out.status.success());
        let help = String::from_utf8(out.stdout).unwrap();
        for flag in flags {
            let line = help
                .lines()
                .find(|l| l.trim_start().starts_with(&format!("{flag} ")))
                .unwrap_or_else(|| panic!("{command} --help lacks {flag}"));
            assert!(
                ["[cm^-1]", "[cm]", "[rad]", "dimensionless", "units of the parameter"].iter().any(|u| line.contains(u)),
                "{command}: {line}"
            );
        }
    }
}
