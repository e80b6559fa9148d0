//! Report layout of every subcommand, checked through the binary.

use std::process::Command;

use serde_json::Value;

fn fzeta(args: &[&str]) -> (i32, String, String) {
    fzeta_env(args, &[])
}

fn fzeta_env(args: &[&str], env: &[(&str, &str)]) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fzeta"));
    cmd.args(args).env_remove("FZETA_CACHE_DIR");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn report(args: &[&str]) -> Value {
    let (code, out, err) = fzeta(args);
    assert!(code == 0 || code == 3, "{args:?}: exit {code}: {err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    for key in ["schemaVersion", "command", "config", "result", "timing"] {
        assert!(v.get(key).is_some(), "{args:?} lacks {key}");
    }
    assert_eq!(v["schemaVersion"], 1);
    assert_eq!(v["command"], args[0]);
    v
}

#[test]
fn special_report() {
    let v = report(&["special", "--p", "3", "--j", "4"]);
    let r = &v["result"];
    assert_eq!(r["field"]["r"], 3);
    assert_eq!(r["coefficients"][0], "1");
    assert_eq!(r["observedDegree"].as_u64().unwrap() + 1, r["coefficients"].as_array().unwrap().len() as u64);
    assert_eq!(r["certifiedPolynomial"], false);
}

#[test]
fn newton_report() {
    let v = report(&["newton", "--p", "2", "--y-digits", "1,0,1,1,0,1,0,1", "--dmax", "6", "--refine"]);
    let r = &v["result"];
    assert_eq!(r["place"], "infinity");
    assert_eq!(r["exact"], false);
    for key in ["points", "vertices", "provisional", "unresolvedTail", "segments", "verdict", "roots"] {
        assert!(r.get(key).is_some(), "newton lacks {key}");
    }
    for s in r["segments"].as_array().unwrap() {
        assert!(s["slope"].is_string());
    }
    let v = report(&["newton", "--p", "3", "--prime", "T+1", "--y", "-5", "--dmax", "5"]);
    assert_eq!(v["result"]["place"], "T + 1");
    assert_eq!(v["result"]["exact"], true);
}

#[test]
fn frobenius_report() {
    let v = report(&["frobenius", "--p", "3", "--f", "T^2+1", "--module", "rank2", "--g1", "T"]);
    let r = &v["result"];
    assert_eq!(r["rank"], 2);
    assert_eq!(r["verified"], true);
    assert_eq!(r["localRh"], true);
    assert!(r["a"].is_string());
    let (code, _, err) = fzeta(&["frobenius", "--p", "2", "--f", "T", "--module", "rank2", "--g1", "1", "--g2", "T"]);
    assert_eq!(code, 3, "{err}");
}

#[test]
fn lseries_report() {
    let v = report(&["lseries", "--p", "2", "--module", "rank2", "--degree", "3", "--y", "-2"]);
    let r = &v["result"];
    assert_eq!(r["coefficients"][0]["n"], "1");
    assert_eq!(r["coefficients"][0]["c"], "1");
    assert!(r["family"]["polygon"]["segments"].is_array());
    let (code, out, _) = fzeta(&["--format", "csv", "lseries", "--p", "3", "--degree", "1"]);
    assert_eq!(code, 0);
    assert_eq!(out, "n,c\n1,1\nT,T\nT + 1,T + 1\nT + 2,T + 2\n");
}

#[test]
fn sqrtcar_report() {
    let v = report(&["sqrtcar", "--j", "1", "--dmax", "5", "--psi-degree", "2"]);
    let r = &v["result"];
    assert_eq!(r["psiIsCarlitzSquare"], true);
    assert_eq!(r["psiFactorization"]["rows"][0]["holds"], true);
    assert_eq!(r["parity"]["vadic"]["exceptions"], serde_json::json!(["0"]));
    assert_eq!(r["passed"], false);
}

#[test]
fn text_format() {
    let (code, out, _) = fzeta(&["--format", "text", "special", "--p", "2", "--j", "3"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("z(x, -3) over F_2:"), "{out}");
}

#[test]
fn cache_directory_from_env() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().to_str().unwrap();
    let args = ["special", "--p", "3", "--j", "20"];
    let (_, first, _) = fzeta_env(&args, &[("FZETA_CACHE_DIR", path)]);
    let (_, second, _) = fzeta_env(&args, &[("FZETA_CACHE_DIR", path)]);
    let a: Value = serde_json::from_str(&first).unwrap();
    let b: Value = serde_json::from_str(&second).unwrap();
    assert_eq!(a["result"], b["result"]);
    assert_eq!(a["timing"]["cache"]["stats"]["hits"], 0);
    assert!(b["timing"]["cache"]["stats"]["hits"].as_u64().unwrap() > 0);
    let (plain_code, plain, _) = fzeta(&args);
    assert_eq!(plain_code, 0);
    assert_eq!(serde_json::from_str::<Value>(&plain).unwrap()["result"], a["result"]);
}

#[test]
fn exit_codes() {
    assert_eq!(fzeta(&["special", "--p", "6", "--j", "1"]).0, 2);
    assert_eq!(fzeta(&["newton", "--p", "2", "--y", "-1", "--prime", "T^2+1"]).0, 2);
    assert_eq!(fzeta(&["newton", "--p", "2", "--y", "-1", "--dmax", "40"]).0, 4);
    assert_eq!(fzeta(&["verify", "--only", "11"]).0, 2);
}
