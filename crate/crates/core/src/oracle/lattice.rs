use std::cell::RefCell;
use std::collections::{HashMap, HashSet};
use std::rc::Rc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::group::{ConcreteGroup, ElementSet};
use crate::error::{Error, Result};
use crate::poset::GroupClass;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    elements: ElementSet,
    iso_type: GroupClass,
}

impl Subgroup {
    pub fn elements(&self) -> &ElementSet {
        &self.elements
    }

    pub fn iso_type(&self) -> &GroupClass {
        &self.iso_type
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// Every subgroup of a concrete group, with containment and a memoised
/// Möbius function.
///
/// Subgroups are indexed in increasing order, so proper containment always
/// points to a larger index.
#[derive(Debug)]
pub struct SubgroupLattice {
    group: ConcreteGroup,
    subgroups: Vec<Subgroup>,
    index: HashMap<ElementSet, usize>,
    /// `up[i]` has bit `j` set iff subgroup `i ⊆ j`.
    up: Vec<Vec<u64>>,
    mu_columns: RefCell<HashMap<usize, Rc<Vec<BigInt>>>>,
}

/// Enumerates all subgroups as joins of cyclic subgroups, iterated to a
/// fixpoint.
pub fn enumerate_subgroups(group: &ConcreteGroup) -> Result<SubgroupLattice> {
    let mut seen: HashSet<ElementSet> = HashSet::new();
    let mut cyclic_generators = Vec::new();
    for x in 0..group.order() {
        if seen.insert(group.cyclic(x)) {
            cyclic_generators.push(x);
        }
    }
    let mut work: Vec<ElementSet> = seen.iter().cloned().collect();
    while let Some(h) = work.pop() {
        for &x in &cyclic_generators {
            if h.contains(x) {
                continue;
            }
            let joined = group.join(&h, x);
            if !seen.contains(&joined) {
                seen.insert(joined.clone());
                work.push(joined);
            }
        }
    }

    let mut subgroups = seen
        .into_iter()
        .map(|elements| {
            let iso_type = group.iso_type(&elements)?;
            Ok(Subgroup { elements, iso_type })
        })
        .collect::<Result<Vec<_>>>()?;
    subgroups.sort_by(|a, b| {
        a.order().cmp(&b.order()).then_with(|| a.iso_type.cmp(&b.iso_type)).then_with(|| a.elements.cmp(&b.elements))
    });

    let n = subgroups.len();
    let words = n.div_ceil(64);
    let mut up = vec![vec![0u64; words]; n];
    for i in 0..n {
        for j in i..n {
            if subgroups[i].elements.is_subset(&subgroups[j].elements) {
                up[i][j / 64] |= 1 << (j % 64);
            }
        }
    }
    let index = subgroups.iter().enumerate().map(|(i, s)| (s.elements.clone(), i)).collect();
    Ok(SubgroupLattice { group: group.clone(), subgroups, index, up, mu_columns: RefCell::new(HashMap::new()) })
}

impl SubgroupLattice {
    pub fn group(&self) -> &ConcreteGroup {
        &self.group
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.subgroups.len() - 1
    }

    pub fn position(&self, subgroup: &Subgroup) -> Result<usize> {
        self.index.get(&subgroup.elements).copied().ok_or(Error::NotInLattice)
    }

    /// `i ⊆ j`.
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.up[i][j / 64] >> (j % 64) & 1 == 1
    }

    fn above(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.up[i].iter().enumerate().flat_map(|(w, &bits)| {
            let mut bits = bits;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + b)
            })
        })
    }

    /// Indices of subgroups isomorphic to `class`.
    pub fn isomorphic_to<'a>(&'a self, class: &'a GroupClass) -> impl Iterator<Item = usize> + 'a {
        self.subgroups.iter().enumerate().filter(move |(_, s)| &s.iso_type == class).map(|(i, _)| i)
    }

    /// Number of subgroups isomorphic to `class`.
    pub fn count_isomorphic(&self, class: &GroupClass) -> usize {
        self.isomorphic_to(class).count()
    }

    /// `μ(b, c)` on the subgroup lattice, by index.
    pub fn mu(&self, b: usize, c: usize) -> Result<BigInt> {
        if b >= self.len() || c >= self.len() {
            return Err(Error::NotInLattice);
        }
        Ok(self.mu_column(c)[b].clone())
    }

    pub fn mu_subgroups(&self, b: &Subgroup, c: &Subgroup) -> Result<BigInt> {
        self.mu(self.position(b)?, self.position(c)?)
    }

    /// `μ(·, c)` for every subgroup, from `μ(c, c) = 1` and
    /// `μ(x, c) = -Σ_{x < y ≤ c} μ(y, c)`.
    pub fn mu_column(&self, c: usize) -> Rc<Vec<BigInt>> {
        if let Some(col) = self.mu_columns.borrow().get(&c) {
            return Rc::clone(col);
        }
        let mut col = vec![BigInt::zero(); self.len()];
        col[c] = BigInt::one();
        for x in (0..c).rev() {
            if !self.contains(x, c) {
                continue;
            }
            let mut acc = BigInt::zero();
            for y in self.above(x).filter(|&y| y != x && y <= c) {
                if self.contains(y, c) {
                    acc += &col[y];
                }
            }
            col[x] = -acc;
        }
        let col = Rc::new(col);
        self.mu_columns.borrow_mut().insert(c, Rc::clone(&col));
        col
    }

    /// Checks the defining sums `Σ_{x ≤ y ≤ z} μ(x, y) = 0` for every
    /// `x < z`, summing along rows rather than the columns used to compute
    /// μ. Cubic in the lattice size.
    pub fn mu_axioms_hold(&self) -> bool {
        for x in 0..self.len() {
            for z in self.above(x) {
                let mut acc = BigInt::zero();
                for y in self.above(x).filter(|&y| self.contains(y, z)) {
                    acc += self.mu(x, y).expect("in range");
                }
                let want = if x == z { BigInt::one() } else { BigInt::zero() };
                if acc != want {
                    return false;
                }
            }
        }
        true
    }

    /// Covering pairs `(i, j)`: `i ⊂ j` with index ℓ, which in an ℓ-group
    /// is exactly a covering relation.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let ell = self.group.ell().get() as usize;
        (0..self.len())
            .flat_map(|i| {
                self.above(i)
                    .filter(move |&j| self.subgroups[j].order() == ell * self.subgroups[i].order())
                    .map(move |j| (i, j))
            })
            .collect()
    }

    pub fn dump(&self) -> LatticeDump {
        LatticeDump {
            ell: self.group.ell().get(),
            shape: self.group.shape().clone(),
            subgroups: self
                .subgroups
                .iter()
                .enumerate()
                .map(|(id, s)| SubgroupRecord { id, order: s.order(), iso_type: s.iso_type.clone() })
                .collect(),
            covers: self.covers(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SubgroupRecord {
    pub id: usize,
    pub order: usize,
    pub iso_type: GroupClass,
}

/// JSON view of a lattice for debugging.
#[derive(Debug, Clone, Serialize)]
pub struct LatticeDump {
    pub ell: u32,
    pub shape: GroupClass,
    pub subgroups: Vec<SubgroupRecord>,
    pub covers: Vec<(usize, usize)>,
}
