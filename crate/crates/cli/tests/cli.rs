use std::collections::HashSet;
use std::io::Write;
use std::process::Command;

use ontic_cli::{run, Outcome};
use serde_json::Value;

fn ontic(args: &[&str]) -> Outcome {
    run(std::iter::once("ontic").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> (u8, Value) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = ontic(&full);
    (out.code, serde_json::from_str(&out.stdout).expect(&out.stdout))
}

fn temp_file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

/// Every whitespace/paren/comma separated token of `text` that parses as a
/// float.
fn text_numbers(text: &str) -> Vec<f64> {
    text.split(|c: char| c.is_whitespace() || "(),=".contains(c))
        .filter_map(|t| t.parse().ok())
        .collect()
}

/// Floats stored under `"value"` keys, which is where reports keep numbers.
fn json_values(v: &Value, out: &mut Vec<f64>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match (k.as_str(), x) {
                    ("value", Value::Number(n)) => out.push(n.as_f64().unwrap()),
                    _ => json_values(x, out),
                }
            }
        }
        Value::Array(xs) => xs.iter().for_each(|x| json_values(x, out)),
        _ => {}
    }
}

#[test]
fn exit_codes() {
    assert_eq!(ontic(&["adequacy", "--model", "spekkens"]).code, 0);
    let unknown = ontic(&["adequacy", "--model", "nosuch"]);
    assert_eq!(unknown.code, 2);
    assert!(unknown.stderr.contains("unknown model"), "{}", unknown.stderr);
    assert_eq!(ontic(&["frobnicate"]).code, 2);
    assert_eq!(ontic(&["pipeline"]).code, 2, "needs --model or --abstract");
    assert_eq!(ontic(&["pipeline", "--abstract"]).code, 0);
    assert_eq!(ontic(&["pipeline", "--model", "psi-ontic-4"]).code, 1);
    assert_eq!(ontic(&["witness", "--model", "spekkens", "--tol", "1e-6"]).code, 2);
    assert_eq!(ontic(&["--help"]).code, 0);
}

#[test]
fn definition_errors_carry_line_numbers() {
    let f = temp_file("name = \"broken\"\nspace = \"rays\"\nresponse = \"born\"\n\n[[ray]]\nname = \"up\"\nvector = [\"1\", \"one\"]\n");
    let out = ontic(&["adequacy", "--model", f.path().to_str().unwrap()]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 7"), "{}", out.stderr);
}

#[test]
fn definition_file_models_run() {
    let f = temp_file(
        "name = \"trio\"\nspace = \"rays\"\nresponse = \"born\"\n\n[[ray]]\nname = \"up\"\nvector = [\"1\", \"0\"]\n\n[[ray]]\nname = \"down\"\nvector = [\"0\", \"1\"]\n\n[[ray]]\nname = \"trine\"\nvector = [\"1/2\", \"1/2*sqrt3\"]\n",
    );
    let path = f.path().to_str().unwrap();
    let (code, v) = json(&["adequacy", "--model", path, "--tests", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["model"], "trio");
    assert_eq!(v["backend"], "exact");
    assert_eq!(v["checks"], 3 * 7);
    assert_eq!(v["max_deviation"]["exact"], "0");
}

#[test]
fn triple_test_variants() {
    let (code, v) = json(&["triple-test"]);
    assert_eq!(code, 0);
    assert_eq!(v["decision"], "INFEASIBLE");
    assert_eq!(v["conclusion"], "p000 + p111 = -1/8 : INFEASIBLE");
    assert_eq!(v["certificate"]["derived_rhs"], "-1/8");

    let (code, v) = json(&["triple-test", "--rays", "orthogonal-pair"]);
    assert_eq!(code, 0);
    assert_eq!(v["decision"], "FEASIBLE");
    assert_eq!(v["witness"][1]["probability"], "1/2");

    let rays = temp_file(
        "[[ray]]\nname = \"px\"\nvector = [\"1\", \"1\"]\n\n[[ray]]\nname = \"py\"\nvector = [\"1\", \"i\"]\n\n[[ray]]\nname = \"pz\"\nvector = [\"1\", \"0\"]\n",
    );
    let (code, v) = json(&["triple-test", "--rays", rays.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["pairs"][0]["overlap"], "1/2");
    assert_eq!(v["cross_check"], true);
    assert_eq!(v["decision"], "FEASIBLE");

    let bad = temp_file("[[ray]]\nname = \"z\"\nvector = [\"0\", \"0\"]\n");
    assert_eq!(ontic(&["triple-test", "--rays", bad.path().to_str().unwrap()]).code, 2);
}

#[test]
fn text_and_json_carry_the_same_numbers() {
    for args in [
        vec!["witness", "--model", "ks", "--quadrature", "16x32", "--tests", "12"],
        vec!["adequacy", "--model", "ks", "--quadrature", "16x32", "--tests", "12"],
        vec!["pipeline", "--model", "ks", "--quadrature", "12x24"],
    ] {
        let text = ontic(&args);
        let (code, v) = json(&args);
        assert_eq!(text.code, code);
        let mut values = Vec::new();
        json_values(&v, &mut values);
        assert!(!values.is_empty());
        let shown: HashSet<u64> = text_numbers(&text.stdout).iter().map(|x| x.to_bits()).collect();
        for x in values {
            assert!(shown.contains(&x.to_bits()), "{args:?}: {x} missing from\n{}", text.stdout);
        }
    }
}

#[test]
fn fixed_seed_is_byte_identical() {
    let args = ["adequacy", "--model", "psi-ontic-4", "--tests", "15", "--seed", "7", "--format", "json"];
    assert_eq!(ontic(&args).stdout, ontic(&args).stdout);
    let other = ["adequacy", "--model", "ks", "--quadrature", "8x16", "--tests", "15", "--seed", "8", "--format", "json"];
    let seven = ["adequacy", "--model", "ks", "--quadrature", "8x16", "--tests", "15", "--seed", "7", "--format", "json"];
    assert_ne!(ontic(&other).stdout, ontic(&seven).stdout);
}

#[test]
fn binary_reads_quadrature_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_ontic"))
        .args(["pipeline", "--model", "ks", "--format", "json"])
        .env("ONTIC_QUADRATURE", "10x20")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["model"], "ks");
    let bad = Command::new(env!("CARGO_BIN_EXE_ontic"))
        .args(["adequacy", "--model", "ks"])
        .env("ONTIC_QUADRATURE", "ten")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn witness_without_a_pair() {
    let f = temp_file("name = \"lonely\"\nspace = \"rays\"\nresponse = \"born\"\n\n[[ray]]\nname = \"up\"\nvector = [\"1\", \"0\"]\n");
    let out = ontic(&["witness", "--model", f.path().to_str().unwrap()]);
    assert!(out.stdout.contains("none found in search budget"), "{}", out.stdout);
    assert_eq!(out.code, 1);
}
