//! The Möbius-type function `S` on the poset of finite abelian ℓ-groups.
//!
//! `S(A, C)` is defined as a signed sum over `A`-chains ending at `C` of
//! products of subgroup counts. [`s_chain`] evaluates that sum literally.
//! [`MobiusTable::s_conv`] uses the first-step decomposition of a chain,
//!
//! ```text
//! S(A, C) = -Σ_{A < B ≤ C} sub(A, B) · S(B, C),   S(C, C) = 1,
//! ```
//!
//! i.e. `S` is the inverse of the `sub` matrix in the incidence algebra. The
//! two routes share nothing but `sub_count` and are cross-checked in tests.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::counting::{chain_weight, sub_count};
use crate::error::{Error, Result};
use crate::poset::{classes_up_to, enumerate_chains, enumerate_interval, Ell, GroupClass};

/// Environment variable overriding [`ChainGuard::DEFAULT_MAX_OPEN_INTERVAL`].
pub const MAX_INTERVAL_ENV: &str = "ELLPOS_MAX_INTERVAL";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ChainSum,
    Convolution,
}

/// One evaluated value `S(a, c)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SEntry {
    pub a: GroupClass,
    pub c: GroupClass,
    #[serde(serialize_with = "crate::report::as_decimal")]
    pub value: BigInt,
    pub method: Method,
    /// Number of chains visited; only the chain-sum evaluator fills this.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chain_count: Option<u64>,
}

/// Refuses chain enumeration over intervals with too many intermediate
/// members; chain counts grow super-exponentially with the interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainGuard {
    pub max_open_interval: usize,
}

impl ChainGuard {
    pub const DEFAULT_MAX_OPEN_INTERVAL: usize = 10_000;

    pub fn new(max_open_interval: usize) -> Self {
        ChainGuard { max_open_interval }
    }

    /// Reads [`MAX_INTERVAL_ENV`], falling back to the default when unset
    /// or unparsable.
    pub fn from_env() -> Self {
        std::env::var(MAX_INTERVAL_ENV).ok().and_then(|v| v.trim().parse().ok()).map(Self::new).unwrap_or_default()
    }
}

impl Default for ChainGuard {
    fn default() -> Self {
        Self::new(Self::DEFAULT_MAX_OPEN_INTERVAL)
    }
}

/// `S(A, C)` as the literal sum of chain weights over every `A`-chain with
/// maximum `C`.
pub fn s_chain(a: &GroupClass, c: &GroupClass, guard: &ChainGuard) -> Result<SEntry> {
    a.same_ell(c)?;
    let entry = |value: BigInt, chains: u64| SEntry {
        a: a.clone(),
        c: c.clone(),
        value,
        method: Method::ChainSum,
        chain_count: Some(chains),
    };
    if a == c {
        return Ok(entry(BigInt::one(), 0));
    }
    let interval = enumerate_interval(a, c)?;
    if interval.open_len() > guard.max_open_interval {
        return Err(Error::ChainBlowup { members: interval.open_len(), limit: guard.max_open_interval });
    }
    let mut total = BigInt::zero();
    let mut visited = 0u64;
    for chain in enumerate_chains(a, c)? {
        total += chain_weight(&chain)?;
        visited += 1;
    }
    Ok(entry(total, visited))
}

/// Memoised convolution evaluator for one prime.
///
/// The cache admits concurrent readers; inserts are serialised. Values are
/// pure functions of the key, so results do not depend on evaluation order
/// or thread count.
#[derive(Debug)]
pub struct MobiusTable {
    ell: Ell,
    cache: RwLock<HashMap<(GroupClass, GroupClass), BigInt>>,
}

impl MobiusTable {
    pub fn new(ell: Ell) -> Self {
        MobiusTable { ell, cache: RwLock::new(HashMap::new()) }
    }

    pub fn ell(&self) -> Ell {
        self.ell
    }

    pub fn cached_len(&self) -> usize {
        self.cache.read().expect("cache lock").len()
    }

    pub fn clear(&self) {
        self.cache.write().expect("cache lock").clear();
    }

    pub fn s_conv(&self, a: &GroupClass, c: &GroupClass) -> Result<SEntry> {
        Ok(SEntry {
            a: a.clone(),
            c: c.clone(),
            value: self.value(a, c)?,
            method: Method::Convolution,
            chain_count: None,
        })
    }

    /// `S(a, c)` via the convolution recursion.
    pub fn value(&self, a: &GroupClass, c: &GroupClass) -> Result<BigInt> {
        if a.ell() != self.ell {
            return Err(Error::PrimeMismatch { left: self.ell.get(), right: a.ell().get() });
        }
        a.same_ell(c)?;
        if a == c {
            return Ok(BigInt::one());
        }
        if !a.embeds_unchecked(c) {
            return Ok(BigInt::zero());
        }
        if let Some(v) = self.cache.read().expect("cache lock").get(&(a.clone(), c.clone())) {
            return Ok(v.clone());
        }

        // Fill S(B, C) for every B in [A, C], from the top down; each step
        // only needs values strictly above B.
        let members = enumerate_interval(a, c)?.into_members();
        let top = members.len() - 1;
        let mut column: Vec<BigInt> = vec![BigInt::zero(); members.len()];
        column[top] = BigInt::one();
        let mut fresh = Vec::new();
        for j in (0..top).rev() {
            let key = (members[j].clone(), c.clone());
            if let Some(v) = self.cache.read().expect("cache lock").get(&key) {
                column[j] = v.clone();
                continue;
            }
            let mut acc = BigInt::zero();
            for k in (j + 1)..=top {
                if column[k].is_zero() || !members[j].embeds_unchecked(&members[k]) {
                    continue;
                }
                acc += BigInt::from(sub_count(&members[j], &members[k])?) * &column[k];
            }
            column[j] = -acc;
            fresh.push((key, column[j].clone()));
        }
        let mut cache = self.cache.write().expect("cache lock");
        cache.extend(fresh);
        Ok(column.swap_remove(0))
    }
}

/// For `rank A < rank C`, the unique `(B, k)` with `A ≤ B < C`,
/// `rank B = rank A` and `B ⊕ (Z/ℓ)^k = C`, if one exists.
///
/// `B` must consist of the first `rank A` parts of `C`, and every remaining
/// part of `C` must equal 1.
pub fn theorem_temp_factor(a: &GroupClass, c: &GroupClass) -> Result<Option<(GroupClass, usize)>> {
    a.same_ell(c)?;
    if a.rank() >= c.rank() {
        return Err(Error::Precondition(format!("rank {a} = {} is not below rank {c} = {}", a.rank(), c.rank())));
    }
    let (head, tail) = c.parts().split_at(a.rank());
    if tail.iter().any(|&p| p != 1) {
        return Ok(None);
    }
    let b = GroupClass::new(c.ell(), head.iter().copied());
    if !a.embeds_unchecked(&b) {
        return Ok(None);
    }
    Ok(Some((b, tail.len())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremCheck {
    /// `S(A, C) = S(A, B) · S(B, C)` when the factor `B` exists.
    RankIncreaseFactorization,
    /// `S(A, C) = 0` when rank grows and no factor `B` exists.
    RankIncreaseVanishing,
    /// Equal rank without an elementary-cokernel embedding forces zero.
    EqualRankVanishing,
    /// Nonzero `S` requires an elementary-cokernel embedding.
    CokernelPredicate,
    /// The chain sum and the convolution disagree.
    MethodMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub a: GroupClass,
    pub c: GroupClass,
    pub check: TheoremCheck,
    pub expected: String,
    pub actual: String,
}

/// Result of [`verify_theorems`]. Counterexamples are data, not errors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub ell: Ell,
    /// Largest `log_ℓ |C|` swept.
    pub bound: u32,
    pub pairs_checked: usize,
    pub rank_increase_pairs: usize,
    pub factorized_pairs: usize,
    pub equal_rank_pairs: usize,
    pub nonzero_pairs: usize,
    pub method_comparisons: usize,
    /// Pairs where the chain guard refused the literal chain sum.
    pub method_skipped: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    /// Also evaluate every pair by the chain sum and compare.
    pub compare_methods: bool,
    pub guard: ChainGuard,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { compare_methods: true, guard: ChainGuard::default() }
    }
}

#[derive(Default)]
struct PairTally {
    rank_increase: bool,
    factorized: bool,
    equal_rank: bool,
    nonzero: bool,
    compared: bool,
    skipped: bool,
    failures: Vec<Counterexample>,
}

/// Sweeps every pair `(A, C)` with `|A|, |C| ≤ ℓ^max_order_exponent`,
/// ordered by `C` then `A`, against the factorisation and vanishing
/// theorems for `S`.
pub fn verify_theorems(ell: Ell, max_order_exponent: u32, options: VerifyOptions) -> Result<TheoremReport> {
    let classes = classes_up_to(ell, max_order_exponent);
    let table = MobiusTable::new(ell);
    let per_top: Vec<Vec<PairTally>> = classes
        .par_iter()
        .map(|c| classes.iter().map(|a| check_pair(&table, a, c, &options)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;

    let mut report = TheoremReport {
        ell,
        bound: max_order_exponent,
        pairs_checked: 0,
        rank_increase_pairs: 0,
        factorized_pairs: 0,
        equal_rank_pairs: 0,
        nonzero_pairs: 0,
        method_comparisons: 0,
        method_skipped: 0,
        counterexamples: Vec::new(),
    };
    for tally in per_top.into_iter().flatten() {
        report.pairs_checked += 1;
        report.rank_increase_pairs += usize::from(tally.rank_increase);
        report.factorized_pairs += usize::from(tally.factorized);
        report.equal_rank_pairs += usize::from(tally.equal_rank);
        report.nonzero_pairs += usize::from(tally.nonzero);
        report.method_comparisons += usize::from(tally.compared);
        report.method_skipped += usize::from(tally.skipped);
        report.counterexamples.extend(tally.failures);
    }
    Ok(report)
}

fn check_pair(table: &MobiusTable, a: &GroupClass, c: &GroupClass, options: &VerifyOptions) -> Result<PairTally> {
    let s = table.value(a, c)?;
    let mut tally = PairTally { nonzero: !s.is_zero(), ..Default::default() };
    let fail = |check, expected: String, actual: &BigInt| tally_failure(a, c, check, expected, actual);
    let mut failures = Vec::new();

    if options.compare_methods {
        match s_chain(a, c, &options.guard) {
            Ok(entry) => {
                tally.compared = true;
                if entry.value != s {
                    failures.push(fail(TheoremCheck::MethodMismatch, entry.value.to_string(), &s));
                }
            }
            Err(e) if e.is_resource_guard() => tally.skipped = true,
            Err(e) => return Err(e),
        }
    }

    let ece = a.elementary_cokernel_embeddable(c)?;
    if a.rank() < c.rank() {
        tally.rank_increase = true;
        match theorem_temp_factor(a, c)? {
            Some((b, _)) => {
                tally.factorized = true;
                let expected = table.value(a, &b)? * table.value(&b, c)?;
                if expected != s {
                    failures.push(fail(TheoremCheck::RankIncreaseFactorization, expected.to_string(), &s));
                }
            }
            None if !s.is_zero() => failures.push(fail(TheoremCheck::RankIncreaseVanishing, "0".into(), &s)),
            None => {}
        }
    } else if a.rank() == c.rank() {
        tally.equal_rank = true;
        if !ece && !s.is_zero() {
            failures.push(fail(TheoremCheck::EqualRankVanishing, "0".into(), &s));
        }
    }
    if !s.is_zero() && !ece {
        failures.push(fail(TheoremCheck::CokernelPredicate, "0".into(), &s));
    }
    tally.failures = failures;
    Ok(tally)
}

fn tally_failure(
    a: &GroupClass,
    c: &GroupClass,
    check: TheoremCheck,
    expected: String,
    actual: &BigInt,
) -> Counterexample {
    Counterexample { a: a.clone(), c: c.clone(), check, expected, actual: actual.to_string() }
}
