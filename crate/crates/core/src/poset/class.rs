use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// An odd prime `ℓ ≥ 3`, the ambient prime of every group class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Ell(u32);

impl Ell {
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || p % 2 == 0 || p > u64::from(u32::MAX) || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(Ell(p as u32))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// `ℓ^e` as an exact integer.
    pub fn pow(self, e: u32) -> BigUint {
        BigUint::from(self.0).pow(e)
    }
}

impl fmt::Display for Ell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Isomorphism class of a finite abelian ℓ-group `⊕ Z/ℓ^{aᵢ}`.
///
/// Stored canonically as the non-increasing sequence of positive exponents;
/// the trivial group has no parts. Two values are equal exactly when the
/// groups are isomorphic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupClass {
    ell: Ell,
    parts: Vec<u32>,
}

impl GroupClass {
    /// Builds the class of `⊕ Z/ℓ^{p}` over `parts` in any order; zero parts
    /// are dropped since `Z/ℓ⁰` is trivial.
    pub fn new(ell: Ell, parts: impl IntoIterator<Item = u32>) -> Self {
        let mut parts: Vec<u32> = parts.into_iter().filter(|&p| p > 0).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        GroupClass { ell, parts }
    }

    pub fn trivial(ell: Ell) -> Self {
        GroupClass { ell, parts: Vec::new() }
    }

    pub fn cyclic(ell: Ell, exponent: u32) -> Self {
        Self::new(ell, [exponent])
    }

    /// `(Z/ℓ)^n`.
    pub fn elementary(ell: Ell, n: usize) -> Self {
        GroupClass { ell, parts: vec![1; n] }
    }

    /// Parses the bracketed syntax `[2,1]` (`[]` for the trivial group).
    pub fn parse(ell: Ell, text: &str) -> Result<Self> {
        Ok(Self::new(ell, parse_parts(text)?))
    }

    pub fn ell(&self) -> Ell {
        self.ell
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Exponent of the `i`-th cyclic factor (0-based), zero past the rank.
    pub fn part(&self, i: usize) -> u32 {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn rank(&self) -> usize {
        self.parts.len()
    }

    /// `log_ℓ |A|`.
    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn order(&self) -> BigUint {
        self.ell.pow(self.size())
    }

    /// `log_ℓ exp(A)`; zero for the trivial group.
    pub fn exponent_log(&self) -> u32 {
        self.part(0)
    }

    pub fn is_trivial(&self) -> bool {
        self.parts.is_empty()
    }

    /// All parts equal 1. The trivial group counts (rank 0).
    pub fn is_elementary(&self) -> bool {
        self.parts.iter().all(|&p| p == 1)
    }

    pub(crate) fn same_ell(&self, other: &GroupClass) -> Result<()> {
        if self.ell == other.ell {
            Ok(())
        } else {
            Err(Error::PrimeMismatch { left: self.ell.0, right: other.ell.0 })
        }
    }

    /// True iff `self` injects into `other`, i.e. `aᵢ ≤ bᵢ` for every `i`.
    pub fn embeds(&self, other: &GroupClass) -> Result<bool> {
        self.same_ell(other)?;
        Ok(self.embeds_unchecked(other))
    }

    pub(crate) fn embeds_unchecked(&self, other: &GroupClass) -> bool {
        self.rank() <= other.rank() && self.parts.iter().zip(&other.parts).all(|(a, b)| a <= b)
    }

    /// `dim ℓ^{i-1}A / ℓ^i A`, the number of parts `≥ i`.
    pub fn rank_prefix(&self, i: u32) -> usize {
        debug_assert!(i >= 1, "rank_prefix is indexed from 1");
        self.parts.iter().take_while(|&&p| p >= i).count()
    }

    /// `A ⊕ (Z/ℓ)^count`.
    pub fn add_elementary(&self, count: usize) -> GroupClass {
        let mut parts = self.parts.clone();
        parts.extend(std::iter::repeat(1).take(count));
        GroupClass { ell: self.ell, parts }
    }

    /// `A ⊕ Z/ℓ^exponent`, inserted at its canonical position.
    pub fn with_part(&self, exponent: u32) -> GroupClass {
        Self::new(self.ell, self.parts.iter().copied().chain([exponent]))
    }

    /// `B / ℓ^e B`: every part is capped at `e`.
    pub fn mod_power_quotient(&self, e: u32) -> GroupClass {
        Self::new(self.ell, self.parts.iter().map(|&p| p.min(e)))
    }

    /// `ℓ^e B`: every part shrinks by `e`.
    pub fn multiple_subgroup(&self, e: u32) -> GroupClass {
        Self::new(self.ell, self.parts.iter().map(|&p| p.saturating_sub(e)))
    }

    /// Whether some injection `A ↪ C` has elementary abelian (possibly
    /// trivial) cokernel.
    ///
    /// Such images are exactly the subgroups between `ℓC` and `C`, whose
    /// types are the partitions with `max(cᵢ-1, 0) ≤ aᵢ ≤ cᵢ` componentwise.
    pub fn elementary_cokernel_embeddable(&self, target: &GroupClass) -> Result<bool> {
        self.same_ell(target)?;
        let width = self.rank().max(target.rank());
        Ok((0..width).all(|i| {
            let (a, c) = (self.part(i), target.part(i));
            c.saturating_sub(1) <= a && a <= c
        }))
    }
}

/// Deterministic enumeration order: by group order, then by parts with the
/// larger leading exponent first (`[2]` before `[1,1]`).
impl Ord for GroupClass {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ell.cmp(&other.ell).then(self.size().cmp(&other.size())).then_with(|| other.parts.cmp(&self.parts))
    }
}

impl PartialOrd for GroupClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GroupClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("]")
    }
}

impl Serialize for GroupClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Parses `[a,b,...]` into raw exponents (not yet canonicalised).
pub fn parse_parts(text: &str) -> Result<Vec<u32>> {
    let err = |reason: &str| Error::Partition { input: text.to_owned(), reason: reason.to_owned() };
    let inner = text
        .trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| err("expected square brackets, e.g. [2,1]"))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|tok| tok.trim().parse::<u32>().map_err(|_| err("parts must be non-negative integers")))
        .collect()
}

/// Every class over `ell` with `|A| ≤ ℓ^max_size`, in enumeration order.
pub fn classes_up_to(ell: Ell, max_size: u32) -> Vec<GroupClass> {
    fn extend(ell: Ell, prefix: &mut Vec<u32>, remaining: u32, cap: u32, out: &mut Vec<GroupClass>) {
        out.push(GroupClass { ell, parts: prefix.clone() });
        for p in 1..=cap.min(remaining) {
            prefix.push(p);
            extend(ell, prefix, remaining - p, p, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(ell, &mut Vec::new(), max_size, max_size, &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ell3() -> Ell {
        Ell::new(3).unwrap()
    }

    fn g(text: &str) -> GroupClass {
        GroupClass::parse(ell3(), text).unwrap()
    }

    #[test]
    fn rejects_bad_primes() {
        for p in [0, 1, 2, 4, 9, 15] {
            assert_eq!(Ell::new(p), Err(Error::InvalidPrime(p)));
        }
        assert!(Ell::new(5).is_ok());
        assert!(Ell::new(101).is_ok());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(g("[]").to_string(), "[]");
        assert_eq!(g("[1,2]").to_string(), "[2,1]");
        assert_eq!(g(" [ 3 , 0, 1 ] ").to_string(), "[3,1]");
        assert!(GroupClass::parse(ell3(), "2,1").is_err());
        assert!(GroupClass::parse(ell3(), "[a]").is_err());
        assert!(GroupClass::parse(ell3(), "[-1]").is_err());
    }

    #[test]
    fn embeds_examples() {
        assert!(g("[]").embeds(&g("[1]")).unwrap());
        assert!(!g("[1,1]").embeds(&g("[2]")).unwrap());
        assert!(g("[1]").embeds(&g("[2,1]")).unwrap());
        let five = GroupClass::trivial(Ell::new(5).unwrap());
        assert!(matches!(five.embeds(&g("[1]")), Err(Error::PrimeMismatch { .. })));
    }

    #[test]
    fn rank_prefix_of_441() {
        let a = g("[4,4,1]");
        assert_eq!(a.rank_prefix(5), 0);
        assert_eq!(a.rank_prefix(4), 2);
        assert_eq!(a.rank_prefix(3), 2);
        assert_eq!(a.rank_prefix(2), 2);
        assert_eq!(a.rank_prefix(1), 3);
    }

    #[test]
    fn add_elementary_examples() {
        assert_eq!(g("[2]").add_elementary(1), g("[2,1]"));
        assert_eq!(g("[]").add_elementary(3), g("[1,1,1]"));
        assert_eq!(g("[1]").add_elementary(0), g("[1]"));
    }

    #[test]
    fn mod_power_quotient_examples() {
        assert_eq!(g("[3,1]").mod_power_quotient(1), g("[1,1]"));
        assert_eq!(g("[3,1]").mod_power_quotient(2), g("[2,1]"));
        assert_eq!(g("[2]").mod_power_quotient(5), g("[2]"));
        assert_eq!(g("[2]").mod_power_quotient(0), g("[]"));
    }

    #[test]
    fn elementary_cokernel_examples() {
        assert!(g("[1]").elementary_cokernel_embeddable(&g("[2]")).unwrap());
        assert!(!g("[1]").elementary_cokernel_embeddable(&g("[3]")).unwrap());
        assert!(g("[2,1]").elementary_cokernel_embeddable(&g("[2,1]")).unwrap());
        assert!(g("[]").elementary_cokernel_embeddable(&g("[1,1]")).unwrap());
        assert!(!g("[]").elementary_cokernel_embeddable(&g("[2]")).unwrap());
    }

    #[test]
    fn enumeration_order_and_counts() {
        let names: Vec<String> = classes_up_to(ell3(), 3).iter().map(|c| c.to_string()).collect();
        assert_eq!(names, ["[]", "[1]", "[2]", "[1,1]", "[3]", "[2,1]", "[1,1,1]"]);
        assert_eq!(classes_up_to(ell3(), 0), vec![g("[]")]);
        // 1 + 1 + 2 + 3 + 5 + 7
        assert_eq!(classes_up_to(ell3(), 5).len(), 19);
    }
}
