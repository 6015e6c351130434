//! End-to-end checks of the command-line binary: exit codes, JSON output,
//! certificate emission and replay, and input diagnostics.

use std::path::Path;
use std::process::{Command, Output};

use binomiality::report::{detection_from_json, pipeline_from_json, pipeline_to_json};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_binomiality"))
}

fn write(dir: &Path, name: &str, content: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, content).unwrap();
    p.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn detect_yes_exits_zero_and_prints_basis() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "in.sys", "vars: x y z w\nx - y\nz - w\nx*z - y*w\n");
    let o = bin().args(["detect", &f]).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("x - y"));
    assert!(out.contains("z - w"));
}

#[test]
fn detect_no_exits_one_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "in.sys", "vars: x y z\nx + y + z\n");
    let o = bin().args(["detect", &f]).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("witness"));
}

#[test]
fn detect_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "in.sys", "vars: x y z\nx^2 - y*z\nx*y + z^2\n");
    let o = bin().args(["detect", &f, "--format", "json"]).output().unwrap();
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let (r, sys) = detection_from_json(&v).unwrap();
    assert_eq!(binomiality::report::detection_to_json(&r, &sys), v);
}

#[test]
fn recipe_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "in.sys", "vars: x y\nx - y\nx*y + x^2 + y\n");
    let o = bin().args(["recipe", &f, "--format", "json"]).output().unwrap();
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let r = pipeline_from_json(&v).unwrap();
    assert_eq!(pipeline_to_json(&r), v);
}

#[test]
fn recipe_emits_certificates_that_certify_accepts() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "in.sys", "vars: a b x y\n2*a*b + 1\n2*x + 1\n2*y + 1\n");
    let cert = dir.path().join("cert.json");
    let o = bin()
        .args(["recipe", &f, "--emit-certificates", cert.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let o = bin().args(["certify", cert.to_str().unwrap()]).output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn certify_rejects_mutated_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "in.sys", "vars: x y\n2*x - y\nx*y + y^2\n");
    let cert = dir.path().join("cert.json");
    bin()
        .args(["recipe", &f, "--emit-certificates", cert.to_str().unwrap()])
        .output()
        .unwrap();
    let text = std::fs::read_to_string(&cert).unwrap();
    // Corrupt the first coefficient that mentions the number 2.
    let mutated = text.replacen("2", "3", 1);
    assert_ne!(text, mutated, "expected a coefficient to mutate");
    std::fs::write(&cert, mutated).unwrap();
    let o = bin().args(["certify", cert.to_str().unwrap()]).output().unwrap();
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn crn_output_feeds_back_into_recipe() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "net.crn", "A + B -> C ; k1\nC -> A + B ; k2\n");
    let sysfile = dir.path().join("net.sys");
    let o = bin()
        .args(["crn", &f, "--output", sysfile.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let o = bin().args(["recipe", sysfile.to_str().unwrap()]).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn oracle_gb_guard_blocks_large_instances() {
    let dir = tempfile::tempdir().unwrap();
    // Seven variables exceed the default guard.
    let f = write(
        dir.path(),
        "big.sys",
        "vars: x1 x2 x3 x4 x5 x6 x7\nx1*x2 - x3*x4\nx5*x6 - x7^2\n",
    );
    let o = bin().args(["oracle-gb", &f]).output().unwrap();
    assert_eq!(o.status.code(), Some(3));
    let o = bin()
        .args(["oracle-gb", &f, "--i-know-this-is-slow"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn usage_and_parse_errors_exit_above_two() {
    let o = bin().arg("frobnicate").output().unwrap();
    assert!(o.status.code().unwrap() > 2);
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.sys", "vars: x\nx + ) y\n");
    let o = bin().args(["detect", &f]).output().unwrap();
    assert!(o.status.code().unwrap() > 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
    let o = bin().args(["detect", "/definitely/not/here.sys"]).output().unwrap();
    assert!(o.status.code().unwrap() > 2);
}

#[test]
fn order_env_var_sets_default_order() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "in.sys", "vars: x y\nx - y\n");
    let o = bin()
        .args(["detect", &f, "--format", "json"])
        .env("BINOMIALITY_ORDER", "lex")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["system"]["order"], "lex");
    // The --order flag beats the environment.
    let o = bin()
        .args(["detect", &f, "--format", "json", "--order", "grlex"])
        .env("BINOMIALITY_ORDER", "lex")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["system"]["order"], "grlex");
}
