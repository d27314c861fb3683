use std::path::Path;
use std::process::{Command, Output};

use psh_forge::levi::build_candidate;
use psh_forge::polyalg::{BivariatePoly, FloatPoly};
use psh_forge::subspace::JordanSpec;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_psh-forge"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const QUARTER: &str = r#"{"n":2,"blocks":[{"type":"real","a":"1/4"},{"type":"real","a":"1/4"}]}"#;

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn dist_on_a_line() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "a1.json", r#"{"n":1,"blocks":[{"type":"real","a":"1"}]}"#);
    let out = run(&["dist", "--spec", &spec, "--point", "3,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["d_m"], "2");
    assert_eq!(v["d_m_f64"].as_f64(), Some(2.0));
    assert_eq!(v["d_n"], "1");
    let out = run(&["dist", "--spec", &spec, "--point", "3,1,2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn certify_quarter_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "q.json", QUARTER);
    let args = ["certify", "--spec", &spec, "--poly", "p21", "--samples", "100000", "--seed", "7"];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["verdict"], "sampled-positive");
    assert_eq!(v["reports"].as_array().unwrap().len(), 2);
    assert!(v.get("note").unwrap().is_null());

    let hood = dir.path().join("hood.csv");
    let out = run(&["certify", "--spec", &spec, "--samples", "2000", "--seed", "3", "--neighborhood", hood.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(&hood).unwrap();
    assert!(csv.starts_with("x1,x2,y1,y2,det_h1,det_h2\n"));
    assert_eq!(csv.lines().count(), 202);
}

#[test]
fn certify_failures_and_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let big = write(dir.path(), "big.json", r#"{"n":2,"blocks":[{"type":"real","a":"4"},{"type":"real","a":"4"}]}"#);
    let out = run(&["certify", "--spec", &big, "--samples", "5000", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sampled minimum"));

    let bad = write(dir.path(), "bad.json", r#"{"n":3,"blocks":[{"type":"real","a":"1"}]}"#);
    assert_eq!(run(&["certify", "--spec", &bad, "--seed", "1"]).status.code(), Some(2));
    assert_eq!(run(&["certify", "--spec", "/nonexistent.json", "--seed", "1"]).status.code(), Some(2));
    let spec = write(dir.path(), "q.json", QUARTER);
    assert_eq!(run(&["certify", "--spec", &spec]).status.code(), Some(2));
    assert_eq!(run(&["certify", "--spec", &spec, "--seed", "1", "--poly", "p99"]).status.code(), Some(2));
    let out = bin().args(["dist", "--spec", &spec, "--point", "0,0,0,0"]).env("PSH_FORGE_THREADS", "none").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn inline_polynomial_is_marked() {
    let poly = r#"[{"exps":[2,1],"re":"1"},{"exps":[1,2],"re":"2"}]"#;
    let out = run(&["certify", "--spec", QUARTER, "--poly", poly, "--samples", "2000", "--seed", "2"]);
    assert!(matches!(out.status.code(), Some(0 | 1)));
    assert_eq!(json(&out)["note"], "uncertified by paper");
}

#[test]
fn verify_pass_filter_and_fault() {
    let out = run(&["verify", "--quick"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["pass"], true);
    let out = run(&["verify", "--quick", "--only", "lemma2"]);
    let v = json(&out);
    assert_eq!(v["groups"].as_array().unwrap().len(), 1);
    assert_eq!(v["groups"][0]["name"], "lemma2");
    let out = run(&["verify", "--quick", "--only", "lemma3", "--inject-fault"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("monomial x1^2"));
    assert_eq!(run(&["verify", "--only", "bogus"]).status.code(), Some(2));
}

#[test]
fn slice_corners_match_direct_evaluation() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "q.json", QUARTER);
    let out = run(&["slice", "--spec", &spec, "--plane", "x1:y1", "--grid", "64"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<f64>> =
        text.lines().map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 64);
    assert!(rows.iter().all(|r| r.len() == 64));
    let c = build_candidate(&JordanSpec::from_json(QUARTER).unwrap(), &BivariatePoly::p21()).unwrap();
    let rho = FloatPoly::from_poly(&c.rho);
    for (i, j) in [(0, 0), (0, 63), (63, 0), (63, 63)] {
        let coord = |k: usize| -2.0 + 4.0 * k as f64 / 63.0;
        let direct = rho.eval(&[coord(i), 0.0, coord(j), 0.0]);
        assert!((rows[i][j] - direct).abs() <= 1e-12 * direct.abs().max(1.0));
    }
    let out = run(&["slice", "--spec", &spec, "--plane", "x1:x1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["slice", "--spec", &spec, "--plane", "x1:y3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["slice", "--spec", &spec, "--field", "rho0", "--grid", "8"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn flow_single_and_retraction() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write(dir.path(), "z.json", r#"{"n":2,"blocks":[{"type":"real","a":"0"},{"type":"real","a":"0"}]}"#);
    let trace = dir.path().join("trace.csv");
    let out = run(&["flow", "--spec", &zero, "--seed", "1", "--point", "0.1,0.1,0.1,0.1", "--trace", trace.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["termination"], "converged");
    assert!(v["final_distance"].as_f64().unwrap() < 1e-6);
    let csv = std::fs::read_to_string(&trace).unwrap();
    assert!(csv.starts_with("step,x1,x2,y1,y2,value,gradnorm\n"));
    let out = run(&["flow", "--spec", &zero, "--seed", "1", "--point", "1,1,1,1"]);
    assert_eq!(out.status.code(), Some(2));
    let spec = write(dir.path(), "q.json", QUARTER);
    let out = run(&["flow", "--spec", &spec, "--seed", "4", "--starts", "10"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["converged"], 10);
}

#[test]
fn threshold_small_run() {
    let out = run(&["threshold", "--family", "diag-uniform", "--n", "1", "--samples", "300", "--seed", "1", "--tol", "0.05"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["monotone"], true);
    assert!(v["threshold"].as_f64().unwrap() >= 0.25);
}
