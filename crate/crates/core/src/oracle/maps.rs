use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use super::group::{ConcreteGroup, ElementSet, OracleCaps};
use super::lattice::enumerate_subgroups;
use crate::error::{Error, Result};
use crate::poset::GroupClass;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MapKind {
    /// Injective homomorphisms `A → G`.
    Injective,
    /// Surjective homomorphisms `G → A`.
    Surjective,
    /// Alternating bilinear forms on `A` (requires `G` to have shape `A`).
    AlternatingForms,
}

/// Largest number of candidate form tables the oracle will walk.
const FORM_TABLE_LIMIT: u128 = 50_000_000;

/// `sub(A, G)` read off the subgroup lattice of `G`.
pub fn oracle_sub(a: &GroupClass, group: &ConcreteGroup) -> Result<BigUint> {
    a.same_ell(group.shape())?;
    Ok(BigUint::from(enumerate_subgroups(group)?.count_isomorphic(a)))
}

/// Counts maps of the requested kind by walking generator images.
///
/// A homomorphism out of `⊕ Z/ℓ^{aᵢ}` is a choice of images `gᵢ` with
/// `ℓ^{aᵢ} gᵢ = 0`. The walk chooses images one generator at a time; the
/// number of valid completions depends only on the subgroup generated so
/// far, so counts are memoised on `(generator index, generated subgroup)`.
pub fn oracle_maps(a: &GroupClass, group: &ConcreteGroup, kind: MapKind, caps: &OracleCaps) -> Result<BigUint> {
    a.same_ell(group.shape())?;
    match kind {
        MapKind::Injective => Ok(count_injective(a.parts(), group)),
        MapKind::Surjective => {
            let target = ConcreteGroup::new(a, caps)?;
            Ok(count_surjective(group.shape().parts(), &target))
        }
        MapKind::AlternatingForms => {
            if group.shape() != a {
                return Err(Error::Precondition(format!(
                    "alternating forms are counted on A itself, got A = {a}, G = {}",
                    group.shape()
                )));
            }
            count_alternating_forms(a)
        }
    }
}

fn count_injective(source: &[u32], target: &ConcreteGroup) -> BigUint {
    let ell = u64::from(target.ell().get());
    // An image of order exactly ℓ^a meets H trivially iff its order-ℓ
    // multiple lies outside H.
    let socle: Vec<usize> = (0..target.order())
        .map(|x| match target.order_log(x) {
            0 => 0,
            k => target.scale(ell.pow(k - 1), x),
        })
        .collect();

    fn walk(
        k: usize,
        h: &ElementSet,
        source: &[u32],
        target: &ConcreteGroup,
        socle: &[usize],
        memo: &mut HashMap<(usize, ElementSet), BigUint>,
    ) -> BigUint {
        if k == source.len() {
            return BigUint::one();
        }
        if let Some(v) = memo.get(&(k, h.clone())) {
            return v.clone();
        }
        let mut total = BigUint::zero();
        for x in 0..target.order() {
            if target.order_log(x) != source[k] || h.contains(socle[x]) {
                continue;
            }
            let next = target.join(h, x);
            total += walk(k + 1, &next, source, target, socle, memo);
        }
        memo.insert((k, h.clone()), total.clone());
        total
    }

    walk(0, &target.trivial(), source, target, &socle, &mut HashMap::new())
}

fn count_surjective(source: &[u32], target: &ConcreteGroup) -> BigUint {
    let whole = target.all();

    fn walk(
        k: usize,
        h: &ElementSet,
        source: &[u32],
        target: &ConcreteGroup,
        whole: &ElementSet,
        memo: &mut HashMap<(usize, ElementSet), BigUint>,
    ) -> BigUint {
        if k == source.len() {
            return if h == whole { BigUint::one() } else { BigUint::zero() };
        }
        if let Some(v) = memo.get(&(k, h.clone())) {
            return v.clone();
        }
        let mut total = BigUint::zero();
        for x in 0..target.order() {
            if target.order_log(x) > source[k] {
                continue;
            }
            let next = target.join(h, x);
            total += walk(k + 1, &next, source, target, whole, memo);
        }
        memo.insert((k, h.clone()), total.clone());
        total
    }

    walk(0, &target.trivial(), source, target, &whole, &mut HashMap::new())
}

/// Walks every table of values `v(eᵢ, eⱼ) ∈ Z/exp(A)` for `i < j` (the
/// diagonal is zero and the lower triangle is `-v`) and keeps those that
/// are well defined, i.e. `ℓ^{aᵢ}·v = ℓ^{aⱼ}·v = 0`.
fn count_alternating_forms(a: &GroupClass) -> Result<BigUint> {
    let ell = u64::from(a.ell().get());
    let modulus = ell.pow(a.exponent_log());
    let pairs: Vec<(u32, u32)> = (0..a.rank())
        .flat_map(|i| ((i + 1)..a.rank()).map(move |j| (i, j)))
        .map(|(i, j)| (a.parts()[i], a.parts()[j]))
        .collect();
    let tables = u128::from(modulus).checked_pow(pairs.len() as u32).unwrap_or(u128::MAX);
    if tables > FORM_TABLE_LIMIT {
        return Err(Error::OrderCap { order: tables, cap: FORM_TABLE_LIMIT as usize });
    }
    let well_defined =
        |v: u64, (ai, aj): (u32, u32)| (ell.pow(ai) * v) % modulus == 0 && (ell.pow(aj) * v) % modulus == 0;

    let mut values = vec![0u64; pairs.len()];
    let mut count = 0u64;
    loop {
        if values.iter().zip(&pairs).all(|(&v, &p)| well_defined(v, p)) {
            count += 1;
        }
        // odometer step
        let mut i = 0;
        loop {
            if i == values.len() {
                return Ok(BigUint::from(count));
            }
            values[i] += 1;
            if values[i] < modulus {
                break;
            }
            values[i] = 0;
            i += 1;
        }
    }
}
