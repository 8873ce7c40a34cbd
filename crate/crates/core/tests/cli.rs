use std::path::Path;
use std::process::{Command, Output};

use lyapmin::certify::ExpansionCertificate;
use lyapmin::cli::{self, ExperimentConfig, Report};
use serde_json::Value;

fn lyapmin(dir: &Path, sub: &str, config: &str, extra: &[&str]) -> Output {
    let cfg = dir.join(format!("{sub}.json"));
    std::fs::write(&cfg, config).unwrap();
    let out = dir.join("out");
    Command::new(env!("CARGO_BIN_EXE_lyapmin"))
        .arg(sub)
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .args(extra)
        .output()
        .unwrap()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn extremal_doubling_reports_log2() {
    let dir = tempfile::tempdir().unwrap();
    let o = lyapmin(
        dir.path(),
        "extremal",
        r#"{"map":{"kind":"doubling"},"analysis":{"type":"extremal","base_resolution":64}}"#,
        &[],
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let res = read_json(&dir.path().join("out/results.json"));
    let rung = &res["results"]["ladder"][0];
    assert_eq!(rung["min_estimate"].as_f64(), Some(std::f64::consts::LN_2));
    assert_eq!(rung["max_estimate"].as_f64(), Some(std::f64::consts::LN_2));
    assert_eq!(rung["nature"], "estimate");
    assert_eq!(rung["resolution"]["base_resolution"], 64);
    let csv = std::fs::read_to_string(dir.path().join("out/refinement.csv")).unwrap();
    assert!(csv.starts_with("resolution,min_estimate,max_estimate\n64,"));
    let edges = std::fs::read_to_string(dir.path().join("out/graph_edges.csv")).unwrap();
    assert!(edges.starts_with("src,dst,w_min,w_max,samples\n"));
}

#[test]
fn cat_map_certification_exits_with_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let o = lyapmin(
        dir.path(),
        "certify",
        r#"{"map":{"kind":"cat"},"analysis":{"type":"certify","lambda":0.1,"big_n":10,"grid":{"base_samples":4,"direction_samples":16}}}"#,
        &[],
    );
    assert_eq!(o.status.code(), Some(cli::EXIT_COUNTEREXAMPLE));
    let report = read_json(&dir.path().join("out/report.json"));
    let cx = &report["results"]["certification"];
    assert_eq!(cx["outcome"], "counterexample");
    assert!((cx["observed"].as_f64().unwrap() + 0.962424).abs() < 1e-3);
    assert_eq!(read_json(&dir.path().join("out/counterexample.json"))["n"], 10);
}

#[test]
fn critical_point_exits_three_with_json_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = lyapmin(
        dir.path(),
        "orbit",
        r#"{"map":{"kind":"custom_polynomial","coefficients":[0,0,1]},"analysis":{"type":"orbit","x":[0.0],"n":10}}"#,
        &[],
    );
    assert_eq!(o.status.code(), Some(cli::EXIT_CRITICAL_POINT));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "critical_point_encountered");
    assert_eq!(err["error"]["details"]["step"], 0);
}

#[test]
fn config_errors_exit_four() {
    let dir = tempfile::tempdir().unwrap();
    let doubling_orbit = r#"{"map":{"kind":"doubling"},"analysis":{"type":"orbit","x":[0.1],"n":3}}"#;
    assert_eq!(lyapmin(dir.path(), "certify", doubling_orbit, &[]).status.code(), Some(cli::EXIT_CONFIG));
    assert_eq!(lyapmin(dir.path(), "orbit", doubling_orbit, &["--lambda", "0.2"]).status.code(), Some(cli::EXIT_CONFIG));
    assert_eq!(lyapmin(dir.path(), "orbit", "{not json", &[]).status.code(), Some(cli::EXIT_CONFIG));
    let o = lyapmin(dir.path(), "orbit", r#"{"map":{"kind":"doubling"},"analysis":{"type":"orbit","x":[0.1],"n":0}}"#, &[]);
    assert_eq!(o.status.code(), Some(cli::EXIT_CONFIG));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "config_error");
}

#[test]
fn orbit_csv_and_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let o = lyapmin(
        dir.path(),
        "orbit",
        r#"{"map":{"kind":"cat"},"analysis":{"type":"orbit","x":[0.2,0.7],"v":[0.6,0.8],"n":60}}"#,
        &["--seed", "42"],
    );
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("out/orbit.csv")).unwrap();
    assert!(csv.starts_with("step,x0,x1,v0,v1,phi\n0,"));
    assert_eq!(csv.lines().count(), 61);
    let res = read_json(&dir.path().join("out/results.json"));
    assert_eq!(res["config"]["seed"], 42);
    assert!(res["results"]["telescoping_defect"]["value"].as_f64().unwrap() < 1e-10);
}

#[test]
fn certificate_file_matches_in_memory_record() {
    let dir = tempfile::tempdir().unwrap();
    let config = ExperimentConfig::from_json(
        r#"{"map":{"kind":"doubling"},"analysis":{"type":"certify","lambda":0.6,"big_n":1,"n_max":50,"grid":{"base_samples":128}}}"#,
    )
    .unwrap();
    let out = cli::run(&config).unwrap();
    cli::emit(&out, dir.path()).unwrap();
    let on_disk: ExpansionCertificate<f64> =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("certificate.json")).unwrap()).unwrap();
    assert_eq!(Some(&on_disk), out.report.results.certification().unwrap().certificate());
    assert!((on_disk.margin - (std::f64::consts::LN_2 - 0.6)).abs() < 1e-12);
    let report: Report =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report, out.report);
}

#[test]
fn fibred_and_spectrum_runs() {
    let dir = tempfile::tempdir().unwrap();
    let o = lyapmin(
        dir.path(),
        "fibred",
        r#"{"map":{"kind":"cat"},"analysis":{"type":"fibred","lambda":0.9,"big_n":1,"n_max":100,
            "splitting":{"eigen":{"role":"unstable","min_angle":0.5}},"grid":{"base_samples":8},
            "estimate":{"base_resolution":8}}}"#,
        &[],
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let res = read_json(&dir.path().join("out/results.json"));
    let margin = res["results"]["certification"]["margin"].as_f64().unwrap();
    assert!((margin - (((3.0 + 5f64.sqrt()) / 2.0).ln() - 0.9)).abs() < 1e-6);
    assert!((res["results"]["restricted_estimate"]["min_estimate"].as_f64().unwrap() - 0.962424).abs() < 1e-5);

    let o = lyapmin(
        dir.path(),
        "spectrum",
        r#"{"map":{"kind":"cat"},"analysis":{"type":"spectrum","x":[0.2,0.7],"n":2000}}"#,
        &[],
    );
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("out/spectrum.csv")).unwrap();
    assert!(csv.starts_with("index,exponent\n0,-0.96"));
}
