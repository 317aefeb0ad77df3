//! End-to-end tests of the compiled binary: output schema, documented
//! exit codes, format switching, configuration layering, determinism.

use serde_json::Value;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_gauss-spectral"));
    // Isolate from any config file the environment might point at.
    c.env_remove("GAUSS_SPECTRAL_CONFIG");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "expected success, stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

#[test]
fn t_interval_second_eigenvalue_is_five() {
    // Endpoints chosen so the interval slides onto the symmetric one of
    // half measure once shifted; printed to 4 decimals, so the value
    // lands within ~3e-4 of 5.
    let doc = json_of(&run(&[
        "eig1d", "--a", "0.7420", "--b", "2.3344", "--bc", "neumann", "--count", "2",
    ]));
    let v = doc["results"][1]["value"].as_f64().unwrap();
    assert!((v - 5.0).abs() < 5e-3, "got {v}");
    assert_eq!(doc["results"][1]["nodes"].as_u64().unwrap(), 1);
}

#[test]
fn whole_line_spectrum_is_the_nonnegative_integers() {
    let doc = json_of(&run(&["eig1d", "--a", "-8", "--b", "8", "--count", "3"]));
    for (i, row) in doc["results"].as_array().unwrap().iter().enumerate() {
        let v = row["value"].as_f64().unwrap();
        assert!((v - i as f64).abs() < 1e-6, "index {i}: {v}");
    }
}

#[test]
fn bounds_prints_the_printed_k_constant() {
    let doc = json_of(&run(&["bounds", "--N", "2", "--R", "1"]));
    let k = doc["results"][0]["k"].as_f64().unwrap();
    assert!((k - 4.362).abs() < 5e-4, "got {k}");
    assert_eq!(doc["results"][0]["regime"], "J1");
    assert!(doc["results"][0]["h"].is_null());
}

#[test]
fn document_schema_has_the_four_top_level_fields() {
    let doc = json_of(&run(&["ball", "--N", "3", "--R", "1.5"]));
    assert_eq!(doc["command"], "ball");
    for key in ["tol", "trunc_weight", "samples", "format", "parallelism", "seed"] {
        assert!(doc["config"].get(key).is_some(), "config.{key} missing");
    }
    assert!(doc["results"].is_array());
    let checks = doc["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for c in checks {
        for key in ["name", "pass", "lhs", "rhs", "slack"] {
            assert!(c.get(key).is_some(), "check key {key} missing");
        }
        assert_eq!(c["pass"], true);
    }
}

#[test]
fn csv_output_has_a_header_and_one_line_per_result() {
    let out = run(&["eig1d", "--a", "-8", "--b", "8", "--count", "3", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], "bracket,index,node_locations,nodes,value");
    assert!(lines[1].starts_with("1e-9,0,"));
}

#[test]
fn output_is_deterministic_for_a_fixed_config() {
    let a = run(&["slide", "--measure", "0.35", "--points", "5", "--seed", "7"]);
    let b = run(&["slide", "--measure", "0.35", "--points", "5", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn parallel_sweep_matches_the_serial_one() {
    let serial = run(&["slide", "--measure", "0.4", "--points", "6"]);
    let parallel = run(&["slide", "--measure", "0.4", "--points", "6", "--parallelism", "3"]);
    assert!(serial.status.success());
    // The config block records the differing parallelism; the computed
    // rows must agree exactly.
    let s: Value = serde_json::from_slice(&serial.stdout).unwrap();
    let p: Value = serde_json::from_slice(&parallel.stdout).unwrap();
    assert_eq!(s["results"], p["results"]);
}

#[test]
fn slide_row_intervals_carry_the_requested_measure() {
    // Plumbing check: ensure the rows pair each left endpoint with the
    // measure-preserving right endpoint (the measure function itself is
    // unit-tested in the library).
    let doc = json_of(&run(&["slide", "--measure", "0.3", "--points", "5"]));
    let phi = gauss_spectral::special::phi;
    for row in doc["results"].as_array().unwrap() {
        let (a, b) = (row["a"].as_f64().unwrap(), row["b"].as_f64().unwrap());
        assert!((phi(a) - phi(b) - 0.3).abs() < 1e-9, "({a}, {b})");
    }
}

#[test]
fn shape_derivative_interval_route_validates_the_formula() {
    let doc = json_of(&run(&["shape-deriv", "--a", "-0.6", "--b", "0.9"]));
    let formula = doc["results"][0]["formula"].as_f64().unwrap();
    let fd = doc["results"][0]["finite_difference"].as_f64().unwrap();
    assert!((formula - fd).abs() < 1e-4 * fd.abs());
    assert_eq!(doc["checks"][0]["pass"], true);
}

#[test]
fn mixed_shape_derivative_routes_are_rejected() {
    let out = run(&["shape-deriv", "--a", "0.0", "--N", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reversed_interval_is_a_usage_error() {
    let out = run(&["eig1d", "--a", "2", "--b", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("a < b"));
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_of_range_tolerance_is_a_usage_error() {
    let out = run(&["--tol", "1", "eig1d", "--a", "0", "--b", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("tol"));
}

#[test]
fn config_file_applies_and_flags_override_it() {
    let dir = std::env::temp_dir().join(format!("gs-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("config.json");
    std::fs::write(&path, r#"{"format":"csv","seed":11}"#).unwrap();

    let csv = bin()
        .env("GAUSS_SPECTRAL_CONFIG", &path)
        .args(["bounds", "--N", "2", "--R", "2"])
        .output()
        .unwrap();
    assert!(csv.status.success());
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("N,R,"), "config file format ignored: {text}");

    let json = bin()
        .env("GAUSS_SPECTRAL_CONFIG", &path)
        .args(["bounds", "--N", "2", "--R", "2", "--format", "json"])
        .output()
        .unwrap();
    let doc: Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(doc["config"]["format"], "json", "flag must beat config file");
    assert_eq!(doc["config"]["seed"], 11, "non-overridden field keeps file value");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn missing_explicit_config_file_is_a_usage_error() {
    let out = bin()
        .env("GAUSS_SPECTRAL_CONFIG", "/definitely/not/here.json")
        .args(["bounds", "--N", "2", "--R", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_flag_writes_the_document_to_a_file() {
    let dir = std::env::temp_dir().join(format!("gs-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("doc.json");
    let out = run(&["bounds", "--N", "3", "--R", "1.2", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty(), "document must go to the file, not stdout");
    let doc: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(doc["command"], "bounds");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn lemma_chain_holds_in_every_regime_sampled() {
    for r in ["0.7", "1.6", "3.0"] {
        let doc = json_of(&run(&["lemma", "--N", "2", "--R", r]));
        assert_eq!(doc["results"][0]["chain_ok"], true, "R = {r}");
        for c in doc["checks"].as_array().unwrap() {
            assert_eq!(c["pass"], true, "R = {r}: {}", c["name"]);
        }
    }
}

#[test]
fn radial_dirichlet_values_exceed_neumann_values() {
    let neu = json_of(&run(&["radial", "--N", "3", "--R", "2", "--count", "2"]));
    let dir = json_of(&run(&[
        "radial", "--N", "3", "--R", "2", "--bc", "dirichlet", "--count", "2",
    ]));
    for i in 0..2 {
        let vn = neu["results"][i]["value"].as_f64().unwrap();
        let vd = dir["results"][i]["value"].as_f64().unwrap();
        assert!(vd > vn, "index {i}: dirichlet {vd} vs neumann {vn}");
    }
}
