//! Runs the command-line driver in-process twice against a disk cache and
//! prints the cache statistics of the second run.

use fzeta::cli::{run, strip_timing};
use serde_json::Value;

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let args = ["fzeta", "--cache-dir", dir.path().to_str().unwrap(), "special", "--p", "5", "--j", "124"];
    let mut first = Vec::new();
    let mut second = Vec::new();
    run(args, &mut first, &mut std::io::sink());
    run(args, &mut second, &mut std::io::sink());
    let a = String::from_utf8(first).unwrap();
    let b = String::from_utf8(second).unwrap();
    let v: Value = serde_json::from_str(&b).unwrap();
    println!("{}", v["result"]["coefficients"]);
    println!("cache: {}", v["timing"]["cache"]["stats"]);
    println!("identical apart from timing: {}", strip_timing(&a) == strip_timing(&b));
}
