//! Fixtures shared by the benchmarks.

use ellpos_core::{classes_up_to, Ell, GroupClass};

pub fn ell(p: u64) -> Ell {
    Ell::new(p).expect("benchmarks use odd primes")
}

pub fn class(p: u64, text: &str) -> GroupClass {
    GroupClass::parse(ell(p), text).expect("fixture partitions are well formed")
}

/// Every comparable pair `(A, C)` with `|C| ≤ ℓ^max_order_exponent`.
pub fn comparable_pairs(p: u64, max_order_exponent: u32) -> Vec<(GroupClass, GroupClass)> {
    let classes = classes_up_to(ell(p), max_order_exponent);
    classes
        .iter()
        .flat_map(|c| classes.iter().filter(|a| a.embeds(c).unwrap()).map(move |a| (a.clone(), c.clone())))
        .collect()
}
