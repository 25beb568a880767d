use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seqembed"))
        .args(args)
        .output()
        .expect("binary runs")
}

/// Runs with `--out` into `dir` and returns the exit code and parsed report.
fn report(dir: &Path, name: &str, args: &[&str]) -> (i32, Value) {
    let out = dir.join(format!("{name}.json"));
    let mut full: Vec<&str> = args.to_vec();
    let out_str = out.to_str().unwrap().to_string();
    full.extend(["--out", &out_str]);
    let o = run(&full);
    let text = fs::read_to_string(&out).unwrap_or_else(|_| {
        panic!("no report for {args:?}: {}", String::from_utf8_lossy(&o.stderr))
    });
    (o.status.code().unwrap(), serde_json::from_str(&text).unwrap())
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

#[test]
fn norm_of_inline_sequence() {
    let dir = TempDir::new().unwrap();
    let (code, r) = report(dir.path(), "norm", &["norm", "--space", "lorentz:1,2", "--seq", "[0,3,1,3]"]);
    assert_eq!(code, 0);
    // rearrangement (3,3,1): 9·1 + 9·2 + 1·3
    let expected = (9.0f64 + 18.0 + 3.0).sqrt();
    assert!((f(&r["result"]["value"]) - expected).abs() <= 1e-12 * expected);
    assert_eq!(r["manifest"]["command"], "norm");
    assert_eq!(r["manifest"]["parameters"]["space"], "lorentz:1,2");
}

#[test]
fn sequence_from_file() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("a.json");
    fs::write(&path, "[3, -4]").unwrap();
    let arg = format!("@{}", path.display());
    let (code, r) = report(dir.path(), "norm", &["norm", "--space", "lorentz:2,2", "--seq", &arg]);
    assert_eq!(code, 0);
    assert_eq!(f(&r["result"]["value"]), 5.0);
}

#[test]
fn rearrange_and_distribution() {
    let dir = TempDir::new().unwrap();
    let (code, r) = report(dir.path(), "r", &["rearrange", "--seq", "[0.5,-2,1,0]", "--omega", "0.75"]);
    assert_eq!(code, 0);
    let values: Vec<f64> = r["result"]["rearrangement"].as_array().unwrap().iter().map(f).collect();
    assert_eq!(values, vec![2.0, 1.0, 0.5, 0.0]);
    assert_eq!(r["result"]["distribution"], 2);
}

#[test]
fn classify_maximal_pair() {
    let dir = TempDir::new().unwrap();
    let (code, r) = report(
        dir.path(),
        "c",
        &["classify", "--source", "lorentz:1,1", "--target", "lorentz:2,2"],
    );
    assert_eq!(code, 0);
    let v = &r["result"];
    assert_eq!(f(&v["exact_norm"]["lo"]), 1.0);
    assert_eq!(f(&v["exact_norm"]["hi"]), 1.0);
    assert_eq!(v["maximally_noncompact"], true);
    assert!(v.get("theorem_tag").is_some());
}

#[test]
fn series_norm_brackets_basel() {
    let dir = TempDir::new().unwrap();
    let (code, r) = report(dir.path(), "s", &["series-norm", "--p1", "1", "--p2", "2", "--q2", "2"]);
    assert_eq!(code, 0);
    let target = (std::f64::consts::PI.powi(2) / 6.0).sqrt();
    assert!(f(&r["result"]["lo"]) <= target && target <= f(&r["result"]["hi"]));
}

#[test]
fn constant_cover_is_verified() {
    let dir = TempDir::new().unwrap();
    let (code, r) = report(
        dir.path(),
        "cover",
        &["cover", "--space", "lorentz:1,2", "--rho", "0.75", "--L", "64", "--samples", "10000", "--seed", "7"],
    );
    assert_eq!(code, 0);
    let c = &r["result"];
    assert_eq!(c["m"], 17);
    // the fixed probes (0, ±e¹, …) are counted too
    assert!(c["samples_checked"].as_u64().unwrap() >= 10000);
    assert!(f(&c["max_observed_distance"]) <= f(&c["radius"]));
    assert_eq!(r["manifest"]["seed"], 7);
}

#[test]
fn refuted_cover_reports_the_point() {
    let dir = TempDir::new().unwrap();
    let (code, r) = report(
        dir.path(),
        "five",
        &["cover", "--space", "lorentz:2,2", "--target", "wlp:2", "--construction", "five-ball", "--samples", "10000"],
    );
    assert_eq!(code, 4);
    let refutation = &r["result"]["refutation"];
    assert!(f(&refutation["min_distance"]) > f(&refutation["radius"]));
}

#[test]
fn witnesses() {
    let dir = TempDir::new().unwrap();
    let (code, r) = report(
        dir.path(),
        "flip",
        &["refute-signflip", "--centers", "[[0.5,0.2],[0.1,-0.3]]", "--rho", "0.99"],
    );
    assert_eq!(code, 0);
    assert!((f(&r["result"]["min_distance_to_centers"]) - 1.3).abs() < 1e-15);

    let (code, r) = report(
        dir.path(),
        "spread",
        &["refute-spread", "--source", "lorentz:1,1", "--target", "lorentz:2,2", "--centers", "[[0.9]]", "--rho", "0.8"],
    );
    assert_eq!(code, 0);
    assert_eq!(r["result"]["indices"], serde_json::json!([2]));
    assert!(f(&r["result"]["min_distance_to_centers"]) > 0.8);
}

#[test]
fn converge_writes_csv_next_to_report() {
    let dir = TempDir::new().unwrap();
    let (code, r) = report(
        dir.path(),
        "conv",
        &["converge", "--source", "lorentz:1,2", "--target", "lorentz:1,inf", "--L", "10,100", "--restarts", "1", "--max-iters", "50"],
    );
    assert_eq!(code, 0);
    assert_eq!(r["result"].as_array().unwrap().len(), 2);
    let csv = fs::read_to_string(dir.path().join("conv.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("L,best_value,oracle_lo,oracle_hi,gap,family_tag"));
    assert_eq!(lines.count(), 2);
}

#[test]
fn audit_has_no_violations() {
    let dir = TempDir::new().unwrap();
    let (code, r) = report(dir.path(), "audit", &["audit", "--cases", "300"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["total_violations"], 0);
    assert!(r["result"]["suites"].as_array().unwrap().len() >= 10);
}

#[test]
fn seed_determines_the_payload() {
    let dir = TempDir::new().unwrap();
    let args = ["estimate-norm", "--source", "lorentz:1,2", "--target", "lorentz:2,4", "--L", "200", "--max-iters", "100", "--seed", "11"];
    let (_, a) = report(dir.path(), "a", &args);
    let (_, b) = report(dir.path(), "b", &args);
    assert_eq!(a["result"].to_string(), b["result"].to_string());
    assert_eq!(a["manifest"]["parameters"], b["manifest"]["parameters"]);

    let alpha = ["alpha", "--source", "lorentz:1,2", "--target", "linf", "--samples", "500", "--seed", "3"];
    let (_, a) = report(dir.path(), "c", &alpha);
    let (_, b) = report(dir.path(), "d", &alpha);
    assert_eq!(a["result"].to_string(), b["result"].to_string());
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["norm", "--space", "lorentz:0,1", "--seq", "[1]"]).status.code(), Some(2));
    assert_eq!(run(&["norm", "--space", "lorentz:1,1", "--seq", "[1, \"a\"]"]).status.code(), Some(2));
    // p₁ > p₂ makes the exponent fall to 0
    assert_eq!(run(&["series-norm", "--p1", "2", "--p2", "1", "--q2", "2"]).status.code(), Some(3));
    assert_eq!(
        run(&["alpha", "--source", "lorentz:2,2", "--target", "lorentz:1,1"]).status.code(),
        Some(3)
    );
    let full = "[[1,1,1,1]]";
    assert_eq!(
        run(&["refute-spread", "--source", "lorentz:1,1", "--target", "lorentz:2,2", "--centers", full, "--rho", "0.5", "--L", "4"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn nan_centers_are_rejected() {
    // JSON has no NaN literal, so non-finite input never parses
    assert_eq!(run(&["refute-signflip", "--centers", "[[NaN]]", "--rho", "0.5"]).status.code(), Some(2));
}
