use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncplanck"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Vec<Value> {
    let text = stdout(args);
    serde_json::from_str::<Value>(&text).unwrap().as_array().unwrap().clone()
}

fn keys(v: &Value) -> Vec<String> {
    v.as_object().unwrap().keys().cloned().collect()
}

#[test]
fn star_and_commutator_examples() {
    assert_eq!(stdout(&["star", "q1", "p1"]).trim(), "q1*p1 + 0.5*i*hbar");
    assert_eq!(stdout(&["star", "p1", "p1"]).trim(), "p1^2");
    assert_eq!(stdout(&["commutator", "q1", "p1"]).trim(), "i*hbar");
    assert_eq!(stdout(&["commutator", "--poisson", "q1", "p1"]).trim(), "1");
    assert_eq!(stdout(&["--dims", "2", "commutator", "q1", "p2"]).trim(), "0");
    assert_eq!(stdout(&["--N", "infinity", "star", "q1", "p1"]).trim(), "q1*p1");
}

#[test]
fn parameter_bindings_substitute() {
    assert_eq!(stdout(&["--param", "w=3", "star", "w*q1", "p1"]).trim(), "3*q1*p1 + 1.5*i*hbar");
}

#[test]
fn oscillator_ladder() {
    let rows = json(&["oscillator", "--omega", "1", "--levels", "3", "--format", "json"]);
    let energies: Vec<f64> = rows.iter().map(|r| r["energy"].as_f64().unwrap()).collect();
    assert_eq!(energies, vec![0.5, 1.5, 2.5, 3.5]);
    assert_eq!(keys(&rows[0]), vec!["n", "energy"]);
    let free = json(&["--N", "infinity", "oscillator", "--omega", "1", "--format", "json"]);
    assert_eq!(free[0]["energy"].as_f64(), Some(0.0));
}

#[test]
fn usage_and_domain_errors_exit_1() {
    for args in [
        &["star", "q2", "p1"][..],
        &["star", "q1 +", "p1"],
        &["--N", "0", "star", "q1", "p1"],
        &["--N", "-1", "oscillator", "--omega", "1"],
        &["oscillator", "--omega", "-1"],
        &["spectrum", "--temperature", "0", "--omega-min", "1", "--omega-max", "2"],
        &["modes", "--length", "1", "--omega-max", "10", "--convention", "bogus"],
        &["--no-such-flag"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn parse_error_reports_position() {
    let out = run(&["star", "q1 + $", "p1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains('5'));
}

#[test]
fn checks_pass_and_fault_exits_2() {
    let ok = run(&["checks", "--samples", "20"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));
    let bad = run(&["checks", "--samples", "3", "--inject-fault"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn spectrum_schema_and_oracle() {
    let args = [
        "spectrum", "--temperature", "1", "--omega-min", "0.01", "--omega-max", "20", "--points", "200",
        "--spacing", "linear", "--oracle", "--format", "json",
    ];
    let rows = json(&args);
    assert_eq!(rows.len(), 200);
    assert_eq!(
        keys(&rows[0]),
        vec![
            "omega",
            "temperature",
            "thermal_density",
            "zero_point_density",
            "total_density",
            "x",
            "oracle_total_density",
            "oracle_relative_deviation"
        ]
    );
    let f = |r: &Value, k: &str| r[k].as_f64().unwrap();
    for r in &rows {
        assert!(f(r, "oracle_relative_deviation") < 1e-10);
    }
    // thermal maximum lands within one grid step of the Wien peak
    let step = f(&rows[1], "omega") - f(&rows[0], "omega");
    let peak = rows
        .iter()
        .max_by(|a, b| f(a, "thermal_density").total_cmp(&f(b, "thermal_density")))
        .unwrap();
    assert!((f(peak, "omega") - 2.821439372122079).abs() <= step);
}

#[test]
fn spectrum_csv_header() {
    let text = stdout(&["spectrum", "--temperature", "2", "--omega-min", "1", "--omega-max", "3", "--points", "4", "--format", "csv"]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("omega,temperature,thermal_density,zero_point_density,total_density,x"));
    assert_eq!(lines.count(), 4);
}

#[test]
fn free_field_spectrum_has_no_zero_point() {
    let rows = json(&["--N", "infinity", "spectrum", "--temperature", "1", "--omega-min", "1", "--omega-max", "2", "--points", "2", "--format", "json"]);
    for r in rows {
        assert_eq!(r["zero_point_density"].as_f64(), Some(0.0));
    }
}

#[test]
fn modes_schema() {
    let rows = json(&["modes", "--length", "1", "--omega-max", "10", "--format", "json"]);
    assert_eq!(keys(&rows[0]), vec!["n1", "n2", "n3", "omega", "polarizations", "convention"]);
    let periodic = json(&["modes", "--length", "1", "--omega-max", "10", "--convention", "periodic", "--format", "json"]);
    assert_eq!(periodic[0]["convention"], "periodic");
}

#[test]
fn output_is_deterministic() {
    let args = ["--seed", "7", "checks", "--samples", "10", "--format", "csv"];
    assert_eq!(stdout(&args), stdout(&args));
    let spec = ["spectrum", "--temperature", "3", "--omega-min", "0.1", "--omega-max", "30", "--points", "64", "--format", "json"];
    assert_eq!(stdout(&spec), stdout(&spec));
}
