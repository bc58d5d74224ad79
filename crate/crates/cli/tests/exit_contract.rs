//! The `s --method both` contract, exercised with a deliberately broken
//! evaluator.

use clap::Parser;
use ellpos_cli::{exit, run, Cli, CoreEvaluator, SEvaluator};
use ellpos_core::{BigInt, GroupClass, SEntry};

/// Off by one in the chain sum whenever the true value is nonzero.
struct CorruptChain;

impl SEvaluator for CorruptChain {
    fn chain(&self, a: &GroupClass, c: &GroupClass) -> ellpos_core::Result<SEntry> {
        let mut entry = CoreEvaluator.chain(a, c)?;
        if entry.value != BigInt::from(0) {
            entry.value += 1;
        }
        Ok(entry)
    }

    fn conv(&self, a: &GroupClass, c: &GroupClass) -> ellpos_core::Result<SEntry> {
        CoreEvaluator.conv(a, c)
    }
}

fn invoke(evaluator: &dyn SEvaluator, args: &[&str]) -> (u8, String, String) {
    let cli = Cli::try_parse_from([&["ellpos"][..], args].concat()).unwrap();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let status = run(&cli, evaluator, &mut out, &mut err);
    (status, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

const BOTH: [&str; 9] = ["s", "--ell", "3", "--a", "[1]", "--c", "[2,1]", "--method", "both"];

#[test]
fn corrupted_method_fails_loudly() {
    let (status, out, err) = invoke(&CorruptChain, &BOTH);
    assert_ne!(status, exit::OK);
    assert_eq!(status, exit::FAILURE);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["methods_agree"], false);
    assert_eq!(v["chain_value"], "4");
    assert!(err.contains("INTERNAL ERROR"), "{err}");
}

#[test]
fn single_methods_do_not_cross_check() {
    let args = ["s", "--ell", "3", "--a", "[1]", "--c", "[2,1]", "--method", "chain", "--format", "text"];
    let (status, out, _) = invoke(&CorruptChain, &args);
    assert_eq!(status, exit::OK);
    assert_eq!(out, "4\n");
}

#[test]
fn correct_build_agrees() {
    let (status, _, err) = invoke(&CoreEvaluator, &BOTH);
    assert_eq!(status, exit::OK);
    assert!(err.is_empty());
}

#[test]
fn zero_values_survive_corruption() {
    // The corruption only touches nonzero values, so vanishing pairs still agree.
    let args = ["s", "--ell", "3", "--a", "[1,1]", "--c", "[3,1]", "--method", "both"];
    assert_eq!(invoke(&CorruptChain, &args).0, exit::OK);
}
