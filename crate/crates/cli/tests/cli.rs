use std::process::{Command, Output};

use opdc_core::families::{bi_coeffs, BIParameters};
use opdc_core::Rational;
use serde_json::Value;

fn opdc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opdc"))
        .args(args)
        .env_remove("OPDC_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

const BI: [&str; 8] = ["--rho1", "1", "--rho2", "2", "--r1", "1/4", "--r2", "1/3"];

#[test]
fn families_example() {
    let mut args = vec!["families", "bi"];
    args.extend(BI);
    args.extend(["-n", "3", "--output", "json"]);
    let out = opdc(&args);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["A0"], "35/82");
    assert_eq!(v["C1"], "-117/82");
    assert_eq!(v["family"], "bannai-ito");
    assert_eq!(v["params"]["r1"], "1/4");
}

#[test]
fn coefficient_tables_round_trip() {
    let mut args = vec!["families", "bi"];
    args.extend(BI);
    args.extend(["-n", "12"]);
    let v = json(&opdc(&args));
    let p = BIParameters::new(q("1"), q("2"), q("1/4"), q("1/3"));
    let c = bi_coeffs(&p, 12).unwrap();
    for k in 0..12 {
        assert_eq!(q(v[format!("A{k}")].as_str().unwrap()), c.a[k]);
        assert_eq!(q(v[format!("C{k}")].as_str().unwrap()), c.c[k]);
        assert_eq!(q(v[format!("b{k}")].as_str().unwrap()), c.rec.b[k]);
        assert_eq!(q(v[format!("u{k}")].as_str().unwrap()), c.rec.u[k]);
    }
}

#[test]
fn identities_example() {
    let out = opdc(&["verify", "identities", "--a", "0,0,0,0", "--lambda", "1/2", "-n", "64"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    let anti = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["identity"] == "anticommutator")
        .unwrap();
    assert!(anti["max_residual"].as_f64().unwrap() < 1e-14);
    assert_eq!(anti["interior"], 60);
}

#[test]
fn bi_chain_example() {
    let out = opdc(&["verify", "bi-chain", "--seed", "7", "--trials", "100", "-n", "50"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(json(&out)["pass"], true);
}

#[test]
fn other_suites_pass() {
    for suite in [["rw-bridge", "30"], ["darboux", "20"], ["quad-algebra", "24"]] {
        let out = opdc(&["verify", suite[0], "--trials", "10", "-n", suite[1]]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    }
}

#[test]
fn output_is_deterministic() {
    let runs = [
        vec!["verify", "darboux", "--seed", "3", "--trials", "5", "-n", "12"],
        vec!["chain", "--lambda", "1/2", "--x", "0.3", "--lambda-t", "1.2", "--seed", "9", "--output", "csv"],
        vec!["pencil", "--a", "1/2,-1/3,1/5", "--lambda", "3/2", "-n", "10", "--output", "csv"],
    ];
    for args in runs {
        let a = opdc(&args);
        let b = opdc(&args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn seed_env_overrides_flag() {
    let run = |env: Option<&str>, seed: &str| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_opdc"));
        c.args(["verify", "darboux", "--trials", "1", "-n", "4", "--seed", seed]);
        match env {
            Some(v) => c.env("OPDC_SEED", v),
            None => c.env_remove("OPDC_SEED"),
        };
        json(&c.output().unwrap())["seed"].as_u64().unwrap()
    };
    assert_eq!(run(None, "3"), 3);
    assert_eq!(run(Some("11"), "3"), 11);
}

#[test]
fn pencil_csv_is_sorted_spectrum() {
    let out = opdc(&["pencil", "--a", "1/2,-1/3", "--lambda", "1/2", "-n", "8", "--output", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let ev: Vec<f64> = text.lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(ev.len(), 8);
    assert!(ev.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn poles_and_usage_errors_exit_2() {
    let out = opdc(&["families", "bi", "--rho1", "0", "--rho2", "0", "--r1", "1/2", "--r2", "1/2", "-n", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(out.stdout.is_empty());

    let out = opdc(&["families", "bi", "--rho1", "1", "-n", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = opdc(&["szego", "--a", "1/0", "-n", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn christoffel_roundtrip_flag() {
    let out = opdc(&["transform", "christoffel", "--b", "1,2,3", "--u", "0,1,2", "--theta", "5"]);
    let v = json(&out);
    assert_eq!(v["roundtrip"], true);
    assert_eq!(v["christoffel"]["A"][0], "4");
}
