//! End-to-end runs of the `ellpos` binary.

use std::process::{Command, Output};

use serde_json::Value;

fn ellpos(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ellpos"))
        .args(args)
        .env_remove("ELLPOS_MAX_INTERVAL")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = ellpos(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn csv_rows(args: &[&str]) -> Vec<Vec<String>> {
    let out = ellpos(args);
    assert_eq!(out.status.code(), Some(0));
    csv::Reader::from_reader(out.stdout.as_slice())
        .records()
        .map(|r| r.unwrap().iter().map(str::to_owned).collect())
        .collect()
}

#[test]
fn sub_prints_bare_count() {
    let out = ellpos(&["sub", "--ell", "3", "--a", "[1]", "--c", "[1,1]"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "4\n");
}

#[test]
fn single_counts() {
    let run = |args: &[&str]| stdout(&ellpos(args)).trim().to_owned();
    assert_eq!(run(&["inj", "--ell", "3", "--a", "[2,1]", "--b", "[2,2]"]), "432");
    assert_eq!(run(&["aut", "--ell", "3", "--a", "[2,2]"]), "3888");
    assert_eq!(run(&["surj", "--ell", "3", "--b", "[2]", "--a", "[1]"]), "2");
    assert_eq!(run(&["sub", "--ell", "3", "--a", "[1,1]", "--b", "[1,1,1,1]"]), "130");
    // |Aut((Z/5)^8)| needs far more than 64 bits
    let big = run(&["aut", "--ell", "5", "--a", "[1,1,1,1,1,1,1,1]"]);
    assert!(big.len() > 30 && big.bytes().all(|b| b.is_ascii_digit()), "{big}");
}

#[test]
fn s_both_methods() {
    let v = json(&["s", "--ell", "3", "--a", "[1]", "--c", "[2,1]", "--method", "both"]);
    assert_eq!(v["value"], "3");
    assert_eq!(v["methods_agree"], true);
    assert_eq!(v["chains"], 3);
}

#[test]
fn s_single_methods() {
    let v = json(&["s", "--ell", "3", "--a", "[]", "--c", "[1,1,1]", "--method", "chain"]);
    assert_eq!(v["value"], "-27");
    let v = json(&["s", "--ell", "3", "--a", "[1,1]", "--c", "[3,1]"]);
    assert_eq!(v["value"], "0");
    assert_eq!(v["method"], "conv");
}

#[test]
fn verify_small_sweep() {
    let v = json(&["verify", "--ell", "3", "--max-order-exp", "4"]);
    assert_eq!(v["counterexamples"], Value::Array(vec![]));
    assert_eq!(v["pairs_checked"], 144);
    let v = json(&["verify", "--ell", "5", "--max-order-exp", "3", "--oracle"]);
    assert_eq!(v["oracle"]["hall"]["violations"], Value::Array(vec![]));
    assert_eq!(v["oracle"]["amalgam"]["failures"], Value::Array(vec![]));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["sub", "--ell", "2", "--a", "[1]", "--c", "[1]"][..],
        &["sub", "--ell", "9", "--a", "[1]", "--c", "[1]"],
        &["sub", "--ell", "3", "--a", "2,1", "--c", "[1]"],
        &["sub", "--ell", "3", "--a", "[x]", "--c", "[1]"],
        &["chains", "--ell", "3", "--a", "[2]", "--c", "[1,1]"],
        &["interval", "--ell", "3", "--a", "[3]", "--c", "[2,1]"],
        &["cl-nu", "--ell", "3", "--a", "[1]", "--terms", "0"],
        &["s", "--ell", "3", "--a", "[1]"],
    ] {
        assert_eq!(ellpos(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn guards_exit_3() {
    let out = Command::new(env!("CARGO_BIN_EXE_ellpos"))
        .args(["s", "--ell", "3", "--a", "[]", "--c", "[2,1]", "--method", "chain"])
        .env("ELLPOS_MAX_INTERVAL", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("chain blowup"));

    let out = ellpos(&["mu", "--ell", "3", "--g", "[1,1,1,1,1,1]"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("oracle cap"));
    assert_eq!(ellpos(&["mu", "--ell", "3", "--g", "[2,1]", "--max-group-order", "20000"]).status.code(), Some(3));
}

#[test]
fn mu_document() {
    let v = json(&["mu", "--ell", "3", "--g", "[1,1,1]", "--covers"]);
    assert_eq!(v["subgroup_count"], 28);
    assert_eq!(v["mu_trivial"], "-27");
    assert_eq!(v["subgroups"][27]["mu"], "1");
    assert!(!v["covers"].as_array().unwrap().is_empty());
}

#[test]
fn amalgam_document() {
    let v = json(&["amalgam", "--ell", "3", "--a", "[1]", "--c", "[2,1]"]);
    assert_eq!(v["s_value"], "3");
    assert_eq!(v["lattice_sum"], "3");
    assert_eq!(v["holds"], true);
}

#[test]
fn cohen_lenstra_documents() {
    let v = json(&["cl-nu", "--ell", "3", "--a", "[1,1]"]);
    assert!(v["value"].as_str().unwrap().starts_with("0.011669"));
    assert_eq!(v["N"], 64);
    let v = json(&["cl-moment", "--ell", "3", "--a", "[]", "--max-order-exp", "1"]);
    assert_eq!(v["moment"], v["total_mass"]);
    let mass: f64 = v["total_mass"].as_str().unwrap().parse().unwrap();
    assert!((mass - 0.84019).abs() < 5e-6, "{mass}");
    assert_eq!(v["M"], 1);
}

#[test]
fn json_and_csv_agree() {
    let base = ["interval", "--ell", "3", "--a", "[1]", "--c", "[3,1,1]"];
    let v = json(&base);
    let from_json: Vec<String> =
        v["members"].as_array().unwrap().iter().map(|m| m["class"].as_str().unwrap().to_owned()).collect();
    let rows = csv_rows(&[&base[..], &["--format", "csv"]].concat());
    let from_csv: Vec<String> = rows.into_iter().map(|r| r[0].clone()).collect();
    assert_eq!(from_json, from_csv);
    assert_eq!(v["len"], from_json.len());

    let base = ["chains", "--ell", "3", "--a", "[]", "--c", "[2,1]"];
    let v = json(&base);
    let rows = csv_rows(&[&base[..], &["--format", "csv"]].concat());
    assert_eq!(rows.len(), v["count"].as_u64().unwrap() as usize);
    for (row, chain) in rows.iter().zip(v["chains"].as_array().unwrap()) {
        assert_eq!(row[0], chain["links"].as_str().unwrap());
        assert_eq!(row[1], chain["weight"].as_str().unwrap());
    }

    let base = ["sub", "--ell", "5", "--a", "[1]", "--c", "[2,1]"];
    let v = json(&[&base[..], &["--format", "json"]].concat());
    let rows = csv_rows(&[&base[..], &["--format", "csv"]].concat());
    assert_eq!(rows[0].last().unwrap(), v["value"].as_str().unwrap());
}

#[test]
fn weights_round_trip() {
    let v = json(&["cl-moment", "--ell", "3", "--a", "[1]", "--max-order-exp", "3", "--weights"]);
    let weights = v["weights"].as_array().unwrap();
    assert_eq!(weights.len(), 7);
    assert_eq!(weights[0]["class"], "[]");
    let rows =
        csv_rows(&["cl-moment", "--ell", "3", "--a", "[1]", "--max-order-exp", "3", "--weights", "--format", "csv"]);
    for (row, w) in rows.iter().zip(weights) {
        assert_eq!(row, &[w["class"].as_str().unwrap(), w["weight"].as_str().unwrap()]);
    }
}
