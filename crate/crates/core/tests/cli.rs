use std::path::PathBuf;

use lieflow::cli::run;
use serde_json::Value;

fn field(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "examples", "fields", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("lieflow").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn riccati_flow_matches_closed_form() {
    let f = field("riccati.json");
    let (code, out, _) = invoke(&["flow", "--field", &f, "--x0", "0.5", "--t", "0.4"]);
    assert_eq!(code, 0);
    let v = json(&out);
    let y = v["y"][0]["re"].as_f64().unwrap();
    assert!((y - 0.625).abs() < 1e-9, "{y}");
    assert_eq!(v["y"][0]["im"].as_f64().unwrap(), 0.0);
    assert!((v["radius"].as_f64().unwrap() - 1.0 / 2.25).abs() < 1e-11);
    assert!(v["tail"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn zero_time_returns_start_point() {
    let f = field("rotation.json");
    let (code, out, _) = invoke(&["flow", "--field", &f, "--x0", "1,0.25-0.5i", "--t", "0"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["y"][0]["re"].as_f64().unwrap(), 1.0);
    assert_eq!(v["y"][1]["re"].as_f64().unwrap(), 0.25);
    assert_eq!(v["y"][1]["im"].as_f64().unwrap(), -0.5);
}

#[test]
fn outside_radius_is_a_domain_error() {
    let f = field("riccati.json");
    let (code, out, err) = invoke(&["flow", "--field", &f, "--x0", "0.5", "--t", "1.0"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("0.444"), "{err}");
}

#[test]
fn near_boundary_warns() {
    let f = field("riccati.json");
    let (code, _, err) = invoke(&["flow", "--field", &f, "--x0", "0.5", "--t", "0.43", "--tol", "1e-6"]);
    assert_eq!(code, 0);
    assert!(err.contains("warning"), "{err}");
}

#[test]
fn output_is_deterministic() {
    let f = field("rotation.json");
    let args = ["flow", "--field", &f, "--x0", "1,0", "--t", "0.3+0.1i"];
    let (_, a, _) = invoke(&args);
    let (_, b, _) = invoke(&args);
    assert_eq!(a, b);
    let (_, c, _) = invoke(&["check", "duality", "--trials", "20", "--pairing-cases", "5", "--seed", "7"]);
    let (_, d, _) = invoke(&["check", "duality", "--trials", "20", "--pairing-cases", "5", "--seed", "7"]);
    assert_eq!(c, d);
}

#[test]
fn radius_and_pathsum() {
    let f = field("riccati.json");
    let (code, out, _) = invoke(&["radius", "--field", &f, "--x0", "0.5"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["m"].as_f64().unwrap(), 2.25);

    let l = field("linear.json");
    let (code, out, _) = invoke(&["pathsum", "--fields", &f, &l, "--alpha", "1", "--beta", "2"]);
    assert_eq!(code, 0, "{out}");
    let v = json(&out);
    assert_eq!(v["direct"], v["pathsum"]);
    assert!(v["direct"]["re"].as_f64().unwrap().abs() <= v["bound"].as_f64().unwrap());
}

#[test]
fn checks_pass_and_bad_input_exits_two() {
    let (code, out, _) = invoke(&["check", "relations", "--p", "1", "--maxdeg", "3"]);
    assert_eq!(code, 0, "{out}");
    let (code, _, _) = invoke(&["flow", "--field", &field("riccati.json"), "--x0", "0.5", "--t", "zz"]);
    assert_eq!(code, 2);
    let (code, _, _) = invoke(&["flow", "--field", &field("rotation.json"), "--x0", "0.5", "--t", "0.1"]);
    assert_eq!(code, 1);
}
