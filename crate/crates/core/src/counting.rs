//! Exact counts of forms, injections, automorphisms, subgroups and
//! surjections between finite abelian ℓ-groups.
//!
//! Every product of the shape `∏ (ℓ^{xᵢ} - ℓ^{yᵢ})` is evaluated as
//! `ℓ^{Σ yᵢ} · ∏ (ℓ^{xᵢ-yᵢ} - 1)`, so the ℓ-power is tracked as an exponent
//! and only the prime-to-ℓ factors are multiplied out.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poset::{Chain, Ell, GroupClass};

/// `ℓ^{shift} · unit`, with `unit` prime to ℓ unless zero.
struct Factored {
    shift: u64,
    unit: BigUint,
}

impl Factored {
    fn one() -> Self {
        Factored { shift: 0, unit: BigUint::one() }
    }

    /// Multiplies by `ℓ^high - ℓ^low`, where `high ≥ low`.
    fn mul_difference(&mut self, ell: Ell, high: u32, low: u32) {
        debug_assert!(high >= low);
        self.shift += u64::from(low);
        self.unit *= ell.pow(high - low) - 1u32;
    }

    fn mul_power(&mut self, exponent: u64) {
        self.shift += exponent;
    }

    fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    fn value(&self, ell: Ell) -> BigUint {
        if self.is_zero() {
            return BigUint::zero();
        }
        let shift = u32::try_from(self.shift).expect("ℓ-adic valuation fits in u32");
        ell.pow(shift) * &self.unit
    }
}

fn lambda_exponent(a: &GroupClass) -> u64 {
    // For descending parts, min(aᵢ, aⱼ) = aⱼ whenever i < j.
    a.parts().iter().enumerate().map(|(j, &p)| j as u64 * u64::from(p)).sum()
}

/// `∏ᵢ (ℓ^{Σ_{j≥i} min(aᵢ, bⱼ)} - ℓ^{Σ_{j≥i} min(aᵢ-1, bⱼ)})`, the
/// form-independent factor of the injection count.
fn injection_product(a: &GroupClass, b: &GroupClass) -> Factored {
    let mut acc = Factored::one();
    for (i, &ai) in a.parts().iter().enumerate() {
        let tail = b.parts().get(i..).unwrap_or(&[]);
        let high: u32 = tail.iter().map(|&bj| ai.min(bj)).sum();
        let low: u32 = tail.iter().map(|&bj| (ai - 1).min(bj)).sum();
        acc.mul_difference(a.ell(), high, low);
        if acc.is_zero() {
            break;
        }
    }
    acc
}

/// `|Λ(A)|`, the number of alternating bilinear forms on `A` viewed as a
/// `Z/exp(A)`-module: `ℓ^{Σ_{i<j} min(aᵢ, aⱼ)}`.
pub fn lambda_count(a: &GroupClass) -> BigUint {
    let exp = u32::try_from(lambda_exponent(a)).expect("exponent fits in u32");
    a.ell().pow(exp)
}

/// `|Inj(A, B)|`, the number of injective homomorphisms `A ↪ B`.
pub fn inj_count(a: &GroupClass, b: &GroupClass) -> Result<BigUint> {
    a.same_ell(b)?;
    let mut acc = injection_product(a, b);
    acc.mul_power(lambda_exponent(a));
    Ok(acc.value(a.ell()))
}

/// `|Aut(A)| = |Inj(A, A)|`.
pub fn aut_count(a: &GroupClass) -> BigUint {
    inj_count(a, a).expect("same prime")
}

/// `sub(A, B)`, the number of subgroups of `B` isomorphic to `A`.
///
/// Evaluated as the quotient of the injection product for `(A, B)` by the
/// one for `(A, A)`; the alternating-form factor cancels. A non-exact
/// division is reported as an internal error.
pub fn sub_count(a: &GroupClass, b: &GroupClass) -> Result<BigUint> {
    a.same_ell(b)?;
    let num = injection_product(a, b);
    if num.is_zero() {
        return Ok(BigUint::zero());
    }
    let den = injection_product(a, a);
    let shift = num
        .shift
        .checked_sub(den.shift)
        .ok_or_else(|| Error::Internal(format!("sub({a}, {b}): negative ℓ-adic valuation")))?;
    let (unit, rem) = num.unit.div_rem(&den.unit);
    if !rem.is_zero() {
        return Err(Error::Internal(format!("sub({a}, {b}): |Aut(A)| does not divide |Inj(A, B)|")));
    }
    Ok(Factored { shift, unit }.value(a.ell()))
}

/// `|Surj(B, A)|`, computed through the duality `|Surj(B, A)| = |Inj(A, B)|`.
pub fn surj_count(b: &GroupClass, a: &GroupClass) -> Result<BigUint> {
    inj_count(a, b)
}

/// `(-1)^i · sub(A, A₁) · ∏ sub(Aⱼ, Aⱼ₊₁)` for the chain `A < A₁ < … < Aᵢ`.
pub fn chain_weight(chain: &Chain) -> Result<BigInt> {
    let mut product = BigUint::one();
    for (lo, hi) in chain.steps() {
        product *= sub_count(lo, hi)?;
        if product.is_zero() {
            return Err(Error::InvalidChain(format!("{lo} does not embed in {hi}")));
        }
    }
    let value = BigInt::from(product);
    Ok(if chain.links().len() % 2 == 1 { -value } else { value })
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::poset::classes_up_to;

    fn g(text: &str) -> GroupClass {
        GroupClass::parse(Ell::new(3).unwrap(), text).unwrap()
    }

    fn n(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_count(&g("[]")), n(1));
        assert_eq!(lambda_count(&g("[1,1]")), n(3));
        assert_eq!(lambda_count(&g("[2,1]")), n(3));
        assert_eq!(lambda_count(&g("[2,2,1]")), n(3u64.pow(2 + 1 + 1)));
    }

    #[test]
    fn inj_examples() {
        assert_eq!(inj_count(&g("[1]"), &g("[1]")).unwrap(), n(2));
        assert_eq!(inj_count(&g("[1]"), &g("[1,1]")).unwrap(), n(8));
        assert_eq!(inj_count(&g("[1,1]"), &g("[2]")).unwrap(), n(0));
        assert_eq!(inj_count(&g("[2,1]"), &g("[2,2]")).unwrap(), n(432));
    }

    #[test]
    fn aut_examples() {
        assert_eq!(aut_count(&g("[]")), n(1));
        assert_eq!(aut_count(&g("[1,1]")), n(48));
        assert_eq!(aut_count(&g("[2]")), n(6));
        assert_eq!(aut_count(&g("[2,1]")), n(108));
        // |GL₂(Z/9)|
        assert_eq!(aut_count(&g("[2,2]")), n(3888));
    }

    #[test]
    fn sub_examples() {
        assert_eq!(sub_count(&g("[1]"), &g("[1,1]")).unwrap(), n(4));
        assert_eq!(sub_count(&g("[2]"), &g("[2,1]")).unwrap(), n(3));
        assert_eq!(sub_count(&g("[1,1]"), &g("[2,1]")).unwrap(), n(1));
        assert_eq!(sub_count(&g("[3]"), &g("[2,1]")).unwrap(), n(0));
        // Gaussian binomial [4 choose 2]_3
        assert_eq!(sub_count(&g("[1,1]"), &g("[1,1,1,1]")).unwrap(), n(130));
    }

    #[test]
    fn surj_examples() {
        assert_eq!(surj_count(&g("[1,1]"), &g("[1]")).unwrap(), n(8));
        assert_eq!(surj_count(&g("[1]"), &g("[1,1]")).unwrap(), n(0));
        assert_eq!(surj_count(&g("[2]"), &g("[1]")).unwrap(), n(2));
    }

    #[test]
    fn chain_weight_examples() {
        let c = Chain::new(g("[1]"), vec![g("[2,1]")]).unwrap();
        assert_eq!(chain_weight(&c).unwrap(), BigInt::from(-4));
        let c = Chain::new(g("[1]"), vec![g("[1,1]"), g("[2,1]")]).unwrap();
        assert_eq!(chain_weight(&c).unwrap(), BigInt::from(4));
        let c = Chain::new(g("[]"), vec![g("[1]")]).unwrap();
        assert_eq!(chain_weight(&c).unwrap(), BigInt::from(-1));
    }

    #[test]
    fn mismatched_primes() {
        let five = GroupClass::trivial(Ell::new(5).unwrap());
        assert!(matches!(inj_count(&five, &g("[1]")), Err(Error::PrimeMismatch { .. })));
        assert!(matches!(sub_count(&g("[1]"), &five), Err(Error::PrimeMismatch { .. })));
        assert!(surj_count(&five, &g("[]")).is_err());
    }

    #[test]
    fn inj_is_aut_times_sub_and_detects_order() {
        for ell in [3, 5] {
            let ell = Ell::new(ell).unwrap();
            let all = classes_up_to(ell, 6);
            for a in &all {
                for b in &all {
                    let inj = inj_count(a, b).unwrap();
                    assert_eq!(inj, aut_count(a) * sub_count(a, b).unwrap(), "{a} -> {b}");
                    assert_eq!(!inj.is_zero(), a.embeds(b).unwrap(), "{a} -> {b}");
                }
            }
        }
    }

    fn class_strategy(max_part: u32, max_rank: usize) -> impl Strategy<Value = GroupClass> {
        (prop::sample::select(vec![3u64, 5, 7]), prop::collection::vec(0..=max_part, 0..=max_rank))
            .prop_map(|(p, parts)| GroupClass::new(Ell::new(p).unwrap(), parts))
    }

    proptest! {
        #[test]
        fn factorisation_holds_on_larger_groups(a in class_strategy(5, 5), extra in prop::collection::vec(0u32..4, 0..4)) {
            // b = a with parts bumped and extended, so a ≤ b
            let mut parts: Vec<u32> = a.parts().iter().zip(extra.iter().chain(std::iter::repeat(&0)))
                .map(|(p, e)| p + e).collect();
            parts.extend(extra.iter().copied());
            let b = GroupClass::new(a.ell(), parts);
            let inj = inj_count(&a, &b).unwrap();
            prop_assert_eq!(inj.clone(), aut_count(&a) * sub_count(&a, &b).unwrap());
            prop_assert_eq!(!inj.is_zero(), a.embeds(&b).unwrap());
        }

        #[test]
        fn sub_count_boundary_values(a in class_strategy(4, 4), b in class_strategy(4, 4)) {
            let b = GroupClass::new(a.ell(), b.parts().iter().copied());
            prop_assert_eq!(sub_count(&a, &a).unwrap(), BigUint::one());
            prop_assert_eq!(sub_count(&GroupClass::trivial(a.ell()), &b).unwrap(), BigUint::one());
        }
    }
}
