use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::group::{ConcreteGroup, OracleCaps};
use super::lattice::{enumerate_subgroups, SubgroupLattice};
use crate::error::Result;
use crate::mobius::MobiusTable;
use crate::poset::{classes_up_to, Ell, GroupClass};

/// Both sides of `S(A, C) = Σ_{B ≤ C, B ≅ A} μ_C(B, C)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AmalgamCheck {
    pub a: GroupClass,
    pub c: GroupClass,
    #[serde(serialize_with = "crate::report::as_decimal")]
    pub s_value: BigInt,
    #[serde(serialize_with = "crate::report::as_decimal")]
    pub lattice_sum: BigInt,
    pub holds: bool,
}

/// Compares `S(A, C)` with the sum of `μ_C(B, C)` over subgroups `B ≅ A`
/// of a concrete group of shape `C`.
pub fn amalgam_check(a: &GroupClass, c: &GroupClass, caps: &OracleCaps, table: &MobiusTable) -> Result<AmalgamCheck> {
    a.same_ell(c)?;
    let lattice = enumerate_subgroups(&ConcreteGroup::new(c, caps)?)?;
    amalgam_on_lattice(a, &lattice, table)
}

fn amalgam_on_lattice(a: &GroupClass, lattice: &SubgroupLattice, table: &MobiusTable) -> Result<AmalgamCheck> {
    let c = lattice.group().shape();
    let column = lattice.mu_column(lattice.top());
    let lattice_sum: BigInt = lattice.isomorphic_to(a).map(|b| &column[b]).sum();
    let s_value = table.value(a, c)?;
    Ok(AmalgamCheck { a: a.clone(), c: c.clone(), holds: s_value == lattice_sum, s_value, lattice_sum })
}

#[derive(Debug, Clone, Serialize)]
pub struct AmalgamReport {
    pub ell: Ell,
    pub bound: u32,
    pub pairs_checked: usize,
    pub failures: Vec<AmalgamCheck>,
}

/// Runs [`amalgam_check`] on every pair with `|A|, |C| ≤ ℓ^max_order_exponent`,
/// building each lattice once.
pub fn amalgam_sweep(ell: Ell, max_order_exponent: u32, caps: &OracleCaps) -> Result<AmalgamReport> {
    let classes = classes_up_to(ell, max_order_exponent);
    let table = MobiusTable::new(ell);
    let per_top: Vec<Vec<AmalgamCheck>> = classes
        .par_iter()
        .map(|c| {
            let lattice = enumerate_subgroups(&ConcreteGroup::new(c, caps)?)?;
            classes.iter().map(|a| amalgam_on_lattice(a, &lattice, &table)).collect()
        })
        .collect::<Result<_>>()?;
    let pairs_checked = per_top.iter().map(Vec::len).sum();
    let failures = per_top.into_iter().flatten().filter(|c| !c.holds).collect();
    Ok(AmalgamReport { ell, bound: max_order_exponent, pairs_checked, failures })
}

/// `(-1)^n ℓ^{n(n-1)/2}`, the value of `μ(1, G)` for `G = (Z/ℓ)^n`.
pub fn hall_value(ell: Ell, n: usize) -> BigInt {
    let magnitude = BigInt::from(ell.pow((n * n.saturating_sub(1) / 2) as u32));
    if n % 2 == 1 {
        -magnitude
    } else {
        magnitude
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleCheck {
    /// `μ(1, G)` differs from the elementary/non-elementary dichotomy.
    Hall,
    /// A unique subgroup `B ≅ A` with no elementary-cokernel embedding has
    /// `μ(B, G) ≠ 0`.
    UniqueSubgroupVanishing,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleViolation {
    pub check: OracleCheck,
    pub group: GroupClass,
    pub subgroup_type: GroupClass,
    #[serde(serialize_with = "crate::report::as_decimal")]
    pub expected: BigInt,
    #[serde(serialize_with = "crate::report::as_decimal")]
    pub actual: BigInt,
}

#[derive(Debug, Clone, Serialize)]
pub struct MuTrivialEntry {
    pub group: GroupClass,
    #[serde(serialize_with = "crate::report::as_decimal")]
    pub mu: BigInt,
}

#[derive(Debug, Clone, Serialize)]
pub struct HallReport {
    pub ell: Ell,
    pub bound: u32,
    pub groups_checked: usize,
    /// `μ(1, G)` for every group swept.
    pub mu_trivial: Vec<MuTrivialEntry>,
    /// Subgroup types with a unique, non-band subgroup that were checked.
    pub unique_subgroup_checks: usize,
    pub violations: Vec<OracleViolation>,
}

impl HallReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Sweeps every group `G` with `|G| ≤ ℓ^max_order_exponent` and checks
/// `μ(1, G) = (-1)^n ℓ^{n(n-1)/2}` for `G ≅ (Z/ℓ)^n`, `μ(1, G) = 0`
/// otherwise; and `μ(B, G) = 0` whenever `B` is the only subgroup of its
/// type and no injection of that type into `G` has elementary cokernel.
pub fn hall_trivialyes_check(ell: Ell, max_order_exponent: u32, caps: &OracleCaps) -> Result<HallReport> {
    let shapes = classes_up_to(ell, max_order_exponent);
    let per_group: Vec<(MuTrivialEntry, usize, Vec<OracleViolation>)> = shapes
        .par_iter()
        .map(|shape| {
            let lattice = enumerate_subgroups(&ConcreteGroup::new(shape, caps)?)?;
            let column = lattice.mu_column(lattice.top());
            let mu_trivial = column[lattice.bottom()].clone();
            let mut violations = Vec::new();

            let expected = if shape.is_elementary() { hall_value(ell, shape.rank()) } else { BigInt::zero() };
            if mu_trivial != expected {
                violations.push(OracleViolation {
                    check: OracleCheck::Hall,
                    group: shape.clone(),
                    subgroup_type: GroupClass::trivial(ell),
                    expected,
                    actual: mu_trivial.clone(),
                });
            }

            let mut checks = 0;
            for a in classes_up_to(ell, shape.size()) {
                let mut members = lattice.isomorphic_to(&a);
                let (Some(b), None) = (members.next(), members.next()) else { continue };
                if a.elementary_cokernel_embeddable(shape)? {
                    continue;
                }
                checks += 1;
                if !column[b].is_zero() {
                    violations.push(OracleViolation {
                        check: OracleCheck::UniqueSubgroupVanishing,
                        group: shape.clone(),
                        subgroup_type: a.clone(),
                        expected: BigInt::zero(),
                        actual: column[b].clone(),
                    });
                }
            }
            Ok((MuTrivialEntry { group: shape.clone(), mu: mu_trivial }, checks, violations))
        })
        .collect::<Result<_>>()?;

    let mut report = HallReport {
        ell,
        bound: max_order_exponent,
        groups_checked: per_group.len(),
        mu_trivial: Vec::new(),
        unique_subgroup_checks: 0,
        violations: Vec::new(),
    };
    for (entry, checks, violations) in per_group {
        report.mu_trivial.push(entry);
        report.unique_subgroup_checks += checks;
        report.violations.extend(violations);
    }
    Ok(report)
}
