//! End-to-end runs of the `cmapx` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    p.to_string_lossy().into_owned()
}

fn cmapx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cmapx"))
        .args(args)
        .env_remove("CMAPX_FIELD")
        .env_remove("CMAPX_ORDER")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let out = cmapx(&all);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn scratch(name: &str, body: &str) -> String {
    let p = std::env::temp_dir().join(format!("cmapx-{}-{name}", std::process::id()));
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn residue_field_of_veronese_has_growing_betti_numbers() {
    let a2 = fixture("a2.ring");
    let r = json(&["resolve", &a2, "--module", "k", "--steps", "3"]);
    assert_eq!(
        r["results"]["resolution"]["betti"]["totals"],
        serde_json::json!([1, 3, 4, 4])
    );
    assert_eq!(r["results"]["complete"], false);
    assert_eq!(r["field"], "GF(32003)");
}

#[test]
fn ext1_of_the_approximation_of_k() {
    let a2 = fixture("a2.ring");
    let r = json(&["ext", &a2, "--i", "1", "--from", "M", "--to", "M"]);
    assert_eq!(r["results"]["dim"], 4);
    assert_eq!(r["results"]["finite_length"], true);
}

#[test]
fn knorrer_of_the_node() {
    let r = json(&["knorrer", &fixture("node.ring"), "--mf", "X"]);
    assert_eq!(r["results"]["knorrer_size"], 2);
    assert_eq!(r["results"]["checked"], true);
}

#[test]
fn obstructed_family_agrees_with_brute_force() {
    let node = fixture("node.ring");
    let r = json(&[
        "lift",
        &node,
        "--ring",
        "Q",
        "--extension",
        "q",
        "--module",
        "point",
        "--brute-force",
    ]);
    assert_eq!(r["results"]["lifted"], false);
    assert_eq!(r["results"]["obstruction"]["zero"], false);
    assert_eq!(r["results"]["brute_force"]["exists"], false);
}

#[test]
fn limit_errors_exit_with_two() {
    let node = fixture("node.ring");
    let out = cmapx(&[
        "lift",
        &node,
        "--ring",
        "Q",
        "--extension",
        "q",
        "--module",
        "point",
        "--brute-force",
        "--cap",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("limit"));
}

#[test]
fn json_reports_are_byte_identical_across_runs_and_modes() {
    let a3 = fixture("a3.ring");
    let args = ["--format", "json", "betti", &a3, "--module", "M"];
    let a = cmapx(&args);
    let b = cmapx(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let mut seq = vec!["--sequential"];
    seq.extend_from_slice(&args);
    let c = cmapx(&seq);
    let strip = |o: &Output| {
        let mut v: Value = serde_json::from_slice(&o.stdout).unwrap();
        v.as_object_mut().unwrap().remove("command");
        v
    };
    assert_eq!(strip(&a), strip(&c));
}

#[test]
fn timing_is_opt_in() {
    let a2 = fixture("a2.ring");
    let plain = json(&["dim", &a2, "--module", "k"]);
    assert!(plain.get("timing_ms").is_none());
    let timed = json(&["--timing", "dim", &a2, "--module", "k"]);
    assert!(timed["timing_ms"].is_u64());
}

#[test]
fn unknown_variable_is_reported_with_its_position() {
    let path = scratch(
        "unknown.ring",
        "[ring.A]\nvars = [\"x\", \"y\"]\nrelations = [\"x^2 + z\"]\n",
    );
    let out = cmapx(&["dim", &path, "--module", "A"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains(&format!("{path}:3:")), "{err}");
    assert!(err.contains('z'), "{err}");
}

#[test]
fn malformed_factorization_is_rejected() {
    let path = scratch(
        "badmf.ring",
        "[ring.Q]\nvars = [\"x\"]\n\n[mf.X]\nring = \"Q\"\nf = \"x^2\"\nphi = [[\"x\"]]\npsi = [[\"2*x\"]]\n",
    );
    let out = cmapx(&["knorrer", &path, "--mf", "X"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("entry (0, 0)"));
}

#[test]
fn field_comes_from_the_environment_when_the_document_is_silent() {
    let path = scratch(
        "envfield.ring",
        "[ring.A]\nvars = [\"x\", \"y\"]\nrelations = [\"x*y\"]\n",
    );
    let out = Command::new(env!("CARGO_BIN_EXE_cmapx"))
        .args(["--format", "json", "dim", &path, "--ring", "A"])
        .env("CMAPX_FIELD", "gf(101)")
        .env_remove("CMAPX_ORDER")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["field"], "GF(101)");
    let flag = json(&["--field", "qq", "dim", &path, "--ring", "A"]);
    assert_eq!(flag["field"], "QQ");
}

#[test]
fn report_can_be_written_to_a_file() {
    let a2 = fixture("a2.ring");
    let dest = std::env::temp_dir().join(format!("cmapx-{}-out.json", std::process::id()));
    let d = dest.to_string_lossy().into_owned();
    let out = cmapx(&["--format", "json", "--out", &d, "depth", &a2, "--module", "M"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&dest).unwrap()).unwrap();
    assert_eq!(v["results"]["depth"], 2);
}

#[test]
fn verify_knorrer_passes() {
    let out = cmapx(&["verify", "knorrer"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(!text.contains("[FAIL]"));
    assert!(text.contains("identities hold"));
}

#[test]
fn verify_rejects_a_field_override() {
    let out = cmapx(&["--field", "qq", "verify", "knorrer"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(cmapx(&["resolve"]).status.code(), Some(1));
    assert_eq!(
        cmapx(&["dim", "/nonexistent/file.ring", "--ring", "A"]).status.code(),
        Some(1)
    );
}
