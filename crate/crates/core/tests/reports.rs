//! JSON shapes of the emitted documents. Big integers are decimal strings.

use ellpos_core::cohen_lenstra::{MeasureDump, TruncatedMeasure};
use ellpos_core::oracle::{amalgam_sweep, enumerate_subgroups, hall_trivialyes_check, ConcreteGroup, OracleCaps};
use ellpos_core::{s_chain, verify_theorems, ChainGuard, Ell, GroupClass, MobiusTable, VerifyOptions};
use serde_json::{json, Value};

fn three() -> Ell {
    Ell::new(3).unwrap()
}

fn g(text: &str) -> GroupClass {
    GroupClass::parse(three(), text).unwrap()
}

#[test]
fn s_entry_shape() {
    let entry = s_chain(&g("[1]"), &g("[2,1]"), &ChainGuard::default()).unwrap();
    let v = serde_json::to_value(&entry).unwrap();
    assert_eq!(v, json!({"a": "[1]", "c": "[2,1]", "value": "3", "method": "chain_sum", "chain_count": 3}));

    let conv = MobiusTable::new(three()).s_conv(&g("[]"), &g("[1,1,1]")).unwrap();
    let v = serde_json::to_value(&conv).unwrap();
    assert_eq!(v["value"], json!("-27"));
    assert_eq!(v["method"], json!("convolution"));
    assert!(v.get("chain_count").is_none());
}

#[test]
fn theorem_report_shape() {
    let report = verify_theorems(three(), 3, VerifyOptions::default()).unwrap();
    let v: Value = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
    assert_eq!(v["ell"], json!(3));
    assert_eq!(v["bound"], json!(3));
    assert_eq!(v["pairs_checked"], json!(49));
    assert_eq!(v["counterexamples"], json!([]));
}

#[test]
fn oracle_report_shapes() {
    let hall = serde_json::to_value(hall_trivialyes_check(three(), 2, &OracleCaps::default()).unwrap()).unwrap();
    assert_eq!(hall["mu_trivial"][0], json!({"group": "[]", "mu": "1"}));
    assert_eq!(hall["violations"], json!([]));

    let amalgam = serde_json::to_value(amalgam_sweep(three(), 2, &OracleCaps::default()).unwrap()).unwrap();
    assert_eq!(amalgam["pairs_checked"], json!(16));
    assert_eq!(amalgam["failures"], json!([]));

    let lattice = enumerate_subgroups(&ConcreteGroup::new(&g("[1,1]"), &OracleCaps::default()).unwrap()).unwrap();
    let dump = serde_json::to_value(lattice.dump()).unwrap();
    assert_eq!(dump["shape"], json!("[1,1]"));
    assert_eq!(dump["subgroups"].as_array().unwrap().len(), 6);
    assert_eq!(dump["subgroups"][0], json!({"id": 0, "order": 1, "iso_type": "[]"}));
    assert_eq!(dump["covers"].as_array().unwrap().len(), 8);
}

#[test]
fn measure_dump_round_trips() {
    let measure = TruncatedMeasure::cohen_lenstra(three(), 3, 40, 96).unwrap();
    let dump = measure.dump();
    let text = serde_json::to_string(&dump).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["M"], json!(3));
    assert_eq!(v["N"], json!(40));
    assert_eq!(v["precision"], json!(96));
    assert_eq!(v["weights"][1][0], json!("[1]"));
    assert_eq!(serde_json::from_str::<MeasureDump>(&text).unwrap(), dump);
}

#[test]
fn measures_are_deterministic() {
    let a = TruncatedMeasure::cohen_lenstra(three(), 6, 64, 128).unwrap();
    let b = TruncatedMeasure::cohen_lenstra(three(), 6, 64, 128).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.dump(), b.dump());
}
