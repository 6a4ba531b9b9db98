use std::process::{Command, Output};

use serde_json::Value;

use screened_casimir::planar::correlation_hat;
use screened_casimir::Medium;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_screened-casimir"))
        .args(args)
        .output()
        .unwrap()
}

fn run_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_screened-casimir"))
        .args(args)
        .env(key, value)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn csv_rows(out: &Output) -> Vec<Vec<String>> {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn column(rows: &[Vec<String>], name: &str) -> Vec<String> {
    let idx = rows[0].iter().position(|h| h == name).unwrap();
    rows[1..].iter().map(|r| r[idx].clone()).collect()
}

#[test]
fn plates_force_conductor_example() {
    let v = json(&run(&["plates-force", "--epsilon", "1", "--kappa-a", "1e4"]));
    let f = v["beta_f_a3"].as_f64().unwrap();
    assert!(((f + 0.047_826_6) / 0.047_826_6).abs() < 1e-3, "{f}");
    assert_eq!(v["epsilon"], 1.0);
    assert_eq!(v["kappa_a"], 1e4);
    assert!(v.as_object().unwrap().values().all(|x| !x.is_object() && !x.is_array()));
}

#[test]
fn missing_gap_is_a_usage_error() {
    let out = run(&["plates-force", "--epsilon", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn invalid_values_exit_two() {
    assert_eq!(run(&["plates-force", "--epsilon", "0.5", "--gap", "1"]).status.code(), Some(2));
    assert_eq!(run(&["plates-force", "--epsilon", "2", "--gap", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["spheres-energy", "--epsilon", "2", "--kappa-eps", "0", "--radius-a", "2", "--radius-b", "1"]).status.code(), Some(2));
}

#[test]
fn particle_static_example() {
    let v = json(&run(&[
        "particle-potential", "--epsilon", "3", "--kappa-eps", "0", "--alpha", "1", "--gap", "1",
    ]));
    let b = v["beta_V"].as_f64().unwrap();
    assert!((b + 0.125).abs() < 1e-12, "{b}");
    assert_eq!(v["alpha"], 1.0);
}

#[test]
fn correlation_matches_library_bit_for_bit() {
    let v = json(&run(&[
        "correlation", "--epsilon", "2", "--kappa-eps", "1", "--gap", "1", "--q", "1", "--z", "2", "--z0", "-1",
    ]));
    let lib = correlation_hat(&Medium::new(2.0, 1.0).unwrap(), 1.0, 2.0, -1.0, 1.0).unwrap();
    let cli = v["h_over_beta_qc2"].as_f64().unwrap();
    assert!(cli < 0.0);
    assert_eq!(cli.to_bits(), lib.to_bits());
}

#[test]
fn vacuum_spheres_have_no_energy() {
    let v = json(&run(&[
        "spheres-energy", "--epsilon", "1", "--kappa-eps", "0", "--radius-a", "1", "--radius-b", "2",
    ]));
    assert_eq!(v["beta_F"], 0.0);
    assert!(v["l_max"].as_u64().is_some());
}

#[test]
fn output_is_bit_identical_across_runs() {
    let args = ["plates-energy", "--epsilon", "4", "--kappa-eps", "0.7", "--gap", "1.3"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let sweep = ["sweep", "--target", "spheres-energy", "--param", "radius_ratio", "--lo", "0.2", "--hi", "0.8", "--count", "7", "--epsilon", "3", "--kappa-eps", "0.5"];
    let one = run_env(&sweep, "CASIMIR_THREADS", "1");
    let many = run_env(&sweep, "CASIMIR_THREADS", "4");
    assert!(one.status.success());
    assert_eq!(one.stdout, many.stdout);
    assert_eq!(one.stdout, run_env(&sweep, "CASIMIR_THREADS", "0").stdout);
}

#[test]
fn csv_single_point_has_full_precision() {
    let rows = csv_rows(&run(&["plates-force", "--epsilon", "2", "--gap", "1", "--output", "csv"]));
    assert_eq!(rows.len(), 2);
    let f = &column(&rows, "beta_f")[0];
    let mantissa = f.trim_start_matches('-').split('e').next().unwrap();
    assert!(mantissa.chars().filter(char::is_ascii_digit).count() >= 15, "{f}");
}

#[test]
fn kappa_sweep_is_monotone() {
    let rows = csv_rows(&run(&[
        "sweep", "--target", "plates-force", "--param", "kappa_eps", "--lo", "0.01", "--hi", "100", "--count", "5", "--spacing", "log",
    ]));
    assert_eq!(rows.len(), 6);
    assert_eq!(column(&rows, "index"), vec!["0", "1", "2", "3", "4"]);
    let f: Vec<f64> = column(&rows, "beta_f").iter().map(|s| s.parse().unwrap()).collect();
    assert!(f.windows(2).all(|w| w[1].abs() > w[0].abs()), "{f:?}");
}

#[test]
fn two_point_sweep_hits_endpoints() {
    let rows = csv_rows(&run(&[
        "sweep", "--target", "plates-energy", "--param", "gap_a", "--lo", "0.5", "--hi", "3", "--count", "2", "--epsilon", "2",
    ]));
    let p: Vec<f64> = column(&rows, "gap_a").iter().map(|s| s.parse().unwrap()).collect();
    assert_eq!(p, vec![0.5, 3.0]);
}

#[test]
fn bad_sweep_ranges_exit_two() {
    for (lo, hi) in [("1", "1"), ("2", "1")] {
        let out = run(&["sweep", "--target", "plates-force", "--param", "kappa_eps", "--lo", lo, "--hi", hi, "--count", "3"]);
        assert_eq!(out.status.code(), Some(2));
    }
    let out = run(&["sweep", "--target", "plates-force", "--param", "kappa_eps", "--lo", "0", "--hi", "1", "--count", "3", "--spacing", "log"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failing_points_are_reported_and_the_sweep_continues() {
    let rows = csv_rows(&run(&[
        "sweep", "--target", "plates-force", "--param", "gap_a", "--lo", "0", "--hi", "2", "--count", "3", "--epsilon", "2",
    ]));
    let status = column(&rows, "status");
    assert_eq!(status.len(), 3);
    assert!(status[0].starts_with("error"));
    assert_eq!(&status[1..], &["ok", "ok"]);
}

#[test]
fn json_sweep_is_an_array_of_flat_records() {
    let v = json(&run(&[
        "sweep", "--target", "particle-potential", "--param", "epsilon", "--lo", "1.5", "--hi", "9", "--count", "4", "--alpha", "2", "--output", "json",
    ]));
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r["alpha"] == 2.0 && r["status"] == "ok"));
}

#[test]
fn validate_quick_passes() {
    let out = run(&["validate", "--quick"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(!String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn perturbed_reflection_fails_the_identity_check() {
    let out = run(&["validate", "--quick", "--json", "--perturb-reflection", "1.01"]);
    assert_eq!(out.status.code(), Some(1));
    let checks: Value = serde_json::from_slice(&out.stdout).unwrap();
    let failed: Vec<&str> = checks
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["check"].as_str().unwrap())
        .collect();
    assert_eq!(failed, vec!["plates: ionic force = full force at eps = 1"]);
}
