use std::path::PathBuf;
use std::process::Command;

use neighborly_cli::formats::{parse_ext, parse_json};
use neighborly_cli::report::RunReport;
use neighborly_core::hadamard::{import_hadamard, sylvester};
use neighborly_core::build;

fn neighborly(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_neighborly"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/data")
        .join(name)
        .display()
        .to_string()
}

fn strip_duration(text: &str) -> RunReport {
    let mut r: RunReport = serde_json::from_str(text).unwrap();
    r.duration_seconds = 0.0;
    r
}

#[test]
fn generate_ext_and_json() {
    let (code, ext, _) = neighborly(&["generate", "--d", "4", "--format", "ext"]);
    assert_eq!(code, 0);
    let points = parse_ext(&ext).unwrap();
    assert_eq!(points.shape(), (16, 4));
    assert_eq!(points, build(&sylvester(2).unwrap()).unwrap().all_vertices());

    let (code, json, _) = neighborly(&["generate", "--d", "16", "--format", "json"]);
    assert_eq!(code, 0);
    let file = parse_json(&json).unwrap();
    assert_eq!((file.points.len(), file.k), (64, 2));
}

#[test]
fn input_errors_exit_2() {
    let (code, _, err) = neighborly(&["generate", "--d", "6"]);
    assert_eq!(code, 2);
    assert!(err.contains("no Hadamard source for order 6"));
    assert_eq!(neighborly(&["generate", "--d", "2"]).0, 2);
    assert_eq!(neighborly(&["generate"]).0, 2);
    assert_eq!(neighborly(&["frobnicate"]).0, 2);
    assert_eq!(neighborly(&["hadamard", "--import", &fixture("not_hadamard4.txt")]).0, 2);
    assert_eq!(neighborly(&["hadamard", "--import", &fixture("malformed.txt")]).0, 2);
    assert_eq!(neighborly(&["certify", "--d", "16", "--alpha", "1"]).0, 2);
    assert_eq!(neighborly(&["verify", "--d", "4", "--k", "9"]).0, 2);
    assert_eq!(neighborly(&["--jobs", "0", "verify", "--d", "4"]).0, 2);
}

#[test]
fn hadamard_export_import_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h16.txt");
    let p = path.to_str().unwrap();
    let (code, out, _) = neighborly(&["hadamard", "--order", "16", "--out", p, "--profile"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"regular\": false"));
    assert_eq!(import_hadamard(&path).unwrap(), sylvester(4).unwrap());
    let (code, out, _) = neighborly(&["hadamard", "--import", p]);
    assert_eq!(code, 0);
    assert!(out.contains("\"valid\": true"));
    let from_file = neighborly(&["generate", "--hadamard", p]).1;
    let from_d = neighborly(&["generate", "--d", "16"]).1;
    assert_eq!(from_file, from_d);

    let (code, out, _) = neighborly(&["hadamard", "--import", &fixture("regular16.txt"), "--profile"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"regular\": true"));
}

#[test]
fn generate_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.ext");
    let (code, out, _) = neighborly(&["generate", "--d", "8", "--out", path.to_str().unwrap()]);
    assert_eq!((code, out.as_str()), (0, ""));
    let points = parse_ext(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(points, build(&sylvester(3).unwrap()).unwrap().all_vertices());
}

#[test]
fn certify_reports_and_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let certs = dir.path().join("certs.json");
    let (code, out, _) = neighborly(&[
        "certify",
        "--d",
        "16",
        "--emit-certificates",
        certs.to_str().unwrap(),
        "--emit-limit",
        "3",
    ]);
    assert_eq!(code, 0);
    let r = strip_duration(&out);
    assert!(r.passed);
    assert_eq!(r.counts.checked, 1984);
    assert_eq!((r.alpha.as_str(), r.beta.as_str()), ("1/4", "1/4"));
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&certs).unwrap()).unwrap();
    assert_eq!(doc["certificates"].as_array().unwrap().len(), 9);

    let (code, out, _) = neighborly(&["certify", "--d", "16", "--sample", "50", "--seed", "3"]);
    assert_eq!(code, 0);
    let r = strip_duration(&out);
    assert_eq!(r.mode, "sampled");
    assert_eq!(r.seed, Some(3));
    assert_eq!(r.counts.checked, 150);
}

#[test]
fn verify_checks_and_determinism() {
    for check in ["faces", "dominant", "containment"] {
        let (code, out, _) = neighborly(&["verify", "--d", "8", "--check", check]);
        assert_eq!(code, 0, "{check}");
        assert!(strip_duration(&out).passed, "{check}");
    }
    let args = ["verify", "--d", "16", "--mode", "sample", "--samples", "40", "--seed", "5"];
    let a = strip_duration(&neighborly(&args).1);
    let mut with_jobs = vec!["--jobs", "2"];
    with_jobs.extend(args);
    let mut b = strip_duration(&neighborly(&with_jobs).1);
    assert_eq!(a.counts.checked, 40);
    b.argv = a.argv.clone();
    assert_eq!(a, b);
}

#[test]
fn beyond_guarantee_is_reporting_only() {
    let (code, out, _) = neighborly(&["verify", "--d", "4", "--k", "3", "--check", "containment"]);
    assert_eq!(code, 0);
    let r = strip_duration(&out);
    assert_eq!(r.details["guaranteed"], serde_json::json!(false));
}
