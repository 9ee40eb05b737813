use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn potts(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_potts")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}\nstderr: {}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn certify_p4_hamming_is_zero() {
    let out = potts(&["certify", "--instance", arg(&fixture("P4.potts")), "--map", arg(&fixture("P4.map")), "--objective", "hamming"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["bound"].as_f64().unwrap().abs() < 1e-9);
    assert_eq!(v["method"], "certified");
    assert_eq!(v["solver_path"], "exact");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["instance_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn naive_p4_hamming_is_one() {
    let out = potts(&["naive-bound", "--instance", arg(&fixture("P4.potts")), "--map", arg(&fixture("P4.map")), "--objective", "hamming"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["bound"], 1.0);
}

#[test]
fn exact_method_and_gap_objective() {
    let p4 = fixture("P4.potts");
    let map = fixture("P4.map");
    let out = potts(&["certify", "--instance", arg(&p4), "--map", arg(&map), "--method", "exact"]);
    assert_eq!(json(&out)["bound"], 0.0);
    let out = potts(&["naive-bound", "--instance", arg(&p4), "--map", arg(&map), "--objective", "gap"]);
    assert!((json(&out)["bound"].as_f64().unwrap() - 1.2).abs() < 1e-12);
}

#[test]
fn verify_theorem_small_batch() {
    let out = potts(&["verify-theorem", "--trials", "10", "--seed", "7", "--shape", "2x3", "--k", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["failures"], 0);
    assert_eq!(v["instances"], 10);
    assert_eq!(v["solver_path"], "exact");
}

#[test]
fn gen_then_solve_then_info() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("g.potts");
    let lab = dir.path().join("g.lab");
    let out = potts(&["gen", "--h", "2", "--w", "3", "--k", "3", "--seed", "5", "--out", arg(&inst)]);
    assert_eq!(out.status.code(), Some(0));
    let first = std::fs::read(&inst).unwrap();
    potts(&["gen", "--h", "2", "--w", "3", "--k", "3", "--seed", "5", "--out", arg(&inst)]);
    assert_eq!(std::fs::read(&inst).unwrap(), first);

    let out = potts(&["solve-expansion", "--instance", arg(&inst), "--init", "random:3", "--out", arg(&lab)]);
    assert_eq!(out.status.code(), Some(0));
    let exp = json(&out);
    assert!(exp["converged"].as_bool().unwrap());

    let out = potts(&["solve-map", "--instance", arg(&inst)]);
    let map = json(&out);
    assert!(map["energy"].as_f64().unwrap() <= exp["energy"].as_f64().unwrap());

    let out = potts(&["certify", "--instance", arg(&inst), "--map", arg(&lab)]);
    assert_eq!(out.status.code(), Some(0));

    let info = json(&potts(&["info", "--instance", arg(&inst)]));
    assert_eq!((info["n"].as_u64(), info["m"].as_u64(), info["k"].as_u64()), (Some(6), Some(7), Some(3)));
    assert_eq!(info["instance_hash"], map["instance_hash"]);
}

#[test]
fn round_check_batch_and_single() {
    let out = potts(&["round-check", "--trials", "5", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["passed"], 5);
    let out = potts(&["round-check", "--instance", arg(&fixture("T1.potts")), "--labeling", arg(&fixture("T1.map"))]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["cases"], 1);
}

#[test]
fn exit_codes() {
    assert_eq!(potts(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(potts(&["info"]).status.code(), Some(1));
    assert_eq!(potts(&["info", "--instance", "/nonexistent/x.potts"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.potts");
    std::fs::write(&bad, "POTTS 2 1 2\n0 1\n").unwrap();
    let out = potts(&["info", "--instance", arg(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));

    let big = dir.path().join("big.potts");
    potts(&["gen", "--h", "4", "--w", "4", "--k", "3", "--out", arg(&big)]);
    assert_eq!(potts(&["solve-map", "--instance", arg(&big), "--budget", "1000"]).status.code(), Some(3));

    // A labeling for a different label count is a data error.
    let out = potts(&["certify", "--instance", arg(&fixture("T1.potts")), "--map", arg(&fixture("P4.map"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn help_exits_zero() {
    let out = potts(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("verify-theorem"));
}
