use std::process::{Command, Output};

use dkpo_core::spectrum::{
    energy_grid, Branch, Component, LzConvention, OscillatorConfig, VectorLevels,
};
use dkpo_core::thermo::{potentials, Method, ThermoConfig, ThermoPoint};
use serde_json::Value;

const HEADER: &str = concat!("# dkpo-lab v", env!("CARGO_PKG_VERSION"), " fmt=1");

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dkpo-lab"))
        .args(args)
        .env_remove("DKPO_PRECISION")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn csv_body(text: &str) -> Vec<Vec<String>> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(HEADER));
    lines.map(|l| l.split(',').map(str::to_string).collect()).collect()
}

// Independent re-implementation of significant-digit rounding.
fn round_to(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let e = x.abs().log10().floor() as i32;
    let s = format!("{:.*}", digits.saturating_sub(1), x / 10f64.powi(e));
    format!("{s}e{e}").parse().unwrap()
}

fn round_value(v: &mut Value, digits: usize) {
    match v {
        Value::Number(n) if n.is_f64() => {
            *n = serde_json::Number::from_f64(round_to(n.as_f64().unwrap(), digits)).unwrap();
        }
        Value::Array(a) => a.iter_mut().for_each(|x| round_value(x, digits)),
        Value::Object(m) => m.values_mut().for_each(|x| round_value(x, digits)),
        _ => {}
    }
}

#[test]
fn thermo_json_round_trips() {
    for method in ["closed", "exact", "asymptotic"] {
        let out = run(&["thermo", "--gamma", "0.05", "--delta", "0.3", "--method", method]);
        assert!(out.status.success(), "{}", stderr(&out));
        let parsed: ThermoPoint = serde_json::from_str(&stdout(&out)).unwrap();

        let m: Method = method.parse().unwrap();
        let point = potentials(&ThermoConfig::new(0.05, 0.3).unwrap(), m).unwrap();
        let mut v = serde_json::to_value(&point).unwrap();
        round_value(&mut v, 12);
        let expected: ThermoPoint = serde_json::from_value(v).unwrap();
        assert_eq!(parsed, expected, "{method}");
    }
}

#[test]
fn spectrum_json_matches_grid() {
    let out = run(&[
        "spectrum", "--sector", "vector", "--i", "2", "--delta", "0.5", "--n-max", "6",
        "--l-max", "6", "--format", "json",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let rows: Vec<Value> = serde_json::from_str(&stdout(&out)).unwrap();
    let cfg = OscillatorConfig::new(1.0, 0.5).unwrap();
    let grid = energy_grid(
        &VectorLevels(Component::Two),
        &cfg,
        6,
        (0, 6),
        Branch::Positive,
        LzConvention::AbsL,
    )
    .unwrap();
    assert_eq!(rows.len(), 49);
    for (row, (n, l, e)) in rows.iter().zip(grid.points()) {
        assert_eq!(row["n"], n);
        assert_eq!(row["l"], l);
        assert_eq!(row["i"], 2);
        assert_eq!(row["epsilon"].as_f64().unwrap(), round_to(e, 12));
    }
}

#[test]
fn csv_outputs_carry_version_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.csv");
    let out = run(&[
        "spectrum", "--sector", "scalar", "--delta", "0", "--n-max", "2", "--l-max", "2",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let rows = csv_body(&std::fs::read_to_string(&path).unwrap());
    assert_eq!(rows[0], ["n", "l", "i", "epsilon"]);
    assert_eq!(rows[1], ["0", "0", "0", "1.0"]);
    assert_eq!(rows.len(), 10);
}

#[test]
fn algebra_check_table() {
    let out = run(&["algebra-check", "--sector", "both"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_body(&stdout(&out));
    assert_eq!(rows.len(), 3);
    for r in &rows[1..] {
        assert_eq!(r[2], "27");
        assert_eq!(r[3], "27");
        assert_eq!(r[4], r[5]);
        assert_eq!(r.last().unwrap(), "pass");
    }
}

#[test]
fn precision_from_environment_and_flag() {
    let args = ["thermo", "--gamma", "0.05", "--format", "csv"];
    let env = Command::new(env!("CARGO_BIN_EXE_dkpo-lab"))
        .args(args)
        .env("DKPO_PRECISION", "4")
        .output()
        .unwrap();
    let flag = run(&[&args[..], &["--precision", "4"]].concat());
    assert!(env.status.success());
    assert_eq!(env.stdout, flag.stdout);
    let rows = csv_body(&stdout(&env));
    let z_col = rows[0].iter().position(|c| c == "Z").unwrap();
    let z: f64 = rows[1][z_col].parse().unwrap();
    assert_eq!(z, round_to(z, 4));
    assert_ne!(stdout(&env), stdout(&run(&args)));
}

#[test]
fn asymptotic_internal_energy() {
    let out = run(&["thermo", "--gamma", "0.01", "--delta", "0", "--method", "asymptotic"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["U_over_kT"].as_f64(), Some(8.0));
    assert_eq!(v["method"], "asymptotic");
}

#[test]
fn exit_codes_and_error_prefix() {
    let cases: &[(&[&str], i32, &str)] = &[
        (&["thermo", "--gamma", "0.05", "--delta", "1"], 1, "error[divergent]:"),
        (&["thermo", "--gamma=-1"], 1, "error[domain]:"),
        (&["thermo", "--gamma", "0.05", "--method", "guess"], 2, "error[usage]:"),
        (&["pdf", "--delta", "0.5", "--mode", "cubed"], 2, "error[usage]:"),
        (&["spectrum", "--sector", "both", "--delta", "0.5"], 2, "error[usage]:"),
        (&["frobnicate"], 2, "error[usage]:"),
        (&["thermo", "--gamma", "0.05", "--bogus"], 2, "error[usage]:"),
        (&["fig", "F2", "--delta", "0.4"], 1, "error[domain]:"),
        (&["fig", "F4", "--hbar-omega", "1"], 1, "error[domain]:"),
    ];
    for (args, code, prefix) in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(*code), "{args:?}: {}", stderr(&out));
        assert!(stderr(&out).starts_with(prefix), "{args:?}: {}", stderr(&out));
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn scan_marks_divergent_rows() {
    let out = run(&[
        "thermo-scan", "--gamma", "0.05", "--delta-min", "0.8", "--delta-max", "1.2", "--steps", "5",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let rows = csv_body(&stdout(&out));
    assert_eq!(rows[0], ["delta", "Z", "U_over_kT", "S_over_kB", "C_over_kB", "method", "divergent"]);
    for r in &rows[1..] {
        let d: f64 = r[0].parse().unwrap();
        assert_eq!(r[6] == "true", d >= 1.0, "{r:?}");
        assert_eq!(r[1].is_empty(), d >= 1.0, "{r:?}");
    }
}

#[test]
fn z_compare_within_tolerance() {
    let out = run(&["z-compare", "--gamma-list", "0.05", "--delta-list", "0,0.6"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let rows = csv_body(&stdout(&out));
    let col = rows[0].iter().position(|c| c == "within_tolerance").unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows[1..].iter().all(|r| r[col] == "true"));
}

#[test]
fn figure_two_peak_order() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["fig", "F2", "--out-dir", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out).lines().count(), 3);
    let rows = csv_body(&std::fs::read_to_string(dir.path().join("fig2_n0.csv")).unwrap());
    assert_eq!(rows[0], ["xi", "rho0", "rho1", "rho2"]);
    let data: Vec<Vec<f64>> = rows[1..]
        .iter()
        .map(|r| r.iter().map(|x| x.parse().unwrap()).collect())
        .collect();
    let peak = |c: usize| {
        data.iter()
            .max_by(|a, b| a[c].total_cmp(&b[c]))
            .map(|r| r[0])
            .unwrap()
    };
    assert!(peak(3) > peak(1) && peak(3) > peak(2));
}

#[test]
fn figure_three_slopes() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["fig", "F3", "--out-dir", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let rows = csv_body(&std::fs::read_to_string(dir.path().join("fig3_slopes.csv")).unwrap());
    let fitted: Vec<&str> = rows[1..].iter().map(|r| r[3].as_str()).collect();
    assert_eq!(fitted[1], "inf");
    let s0: f64 = fitted[0].parse().unwrap();
    let s2: f64 = fitted[2].parse().unwrap();
    assert!((s0 + 2.0 / (1.0 - 1.0 / 5f64.sqrt())).abs() < 1e-9);
    assert!((s2 + 1.0).abs() < 1e-9);
    let grid = csv_body(&std::fs::read_to_string(dir.path().join("fig3_i1.csv")).unwrap());
    assert_eq!(grid.len(), 1 + 101 * 101);
}

#[test]
fn figure_four_flags_pole() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["fig", "F4", "--out-dir", dir.path().to_str().unwrap(), "--steps", "16"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let rows = csv_body(&std::fs::read_to_string(dir.path().join("fig4_delta.csv")).unwrap());
    let div = rows[1..].iter().filter(|r| r[6] == "true").count();
    let past_one = rows[1..].iter().filter(|r| r[0].parse::<f64>().unwrap() >= 1.0).count();
    assert!(div > 0);
    assert_eq!(div, past_one);
    let temps = csv_body(&std::fs::read_to_string(dir.path().join("fig4_temperature.csv")).unwrap());
    assert_eq!(temps[0], ["delta", "kT_over_mc2", "U_over_mc2", "S_over_kB", "C_over_kB"]);
}
