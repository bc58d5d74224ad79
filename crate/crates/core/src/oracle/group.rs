use std::fmt;

use crate::error::{Error, Result};
use crate::poset::{Ell, GroupClass};

/// Size limits for the brute-force oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleCaps {
    max_order: usize,
}

impl OracleCaps {
    /// `3⁵`.
    pub const DEFAULT_MAX_ORDER: usize = 243;
    pub const HARD_MAX_ORDER: usize = 10_000;

    pub fn new(max_order: usize) -> Result<Self> {
        if max_order > Self::HARD_MAX_ORDER {
            return Err(Error::OrderCap { order: max_order as u128, cap: Self::HARD_MAX_ORDER });
        }
        Ok(OracleCaps { max_order })
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub(crate) fn admit(&self, shape: &GroupClass) -> Result<usize> {
        let order = u128::from(shape.ell().get()).checked_pow(shape.size()).unwrap_or(u128::MAX);
        if order > self.max_order as u128 {
            return Err(Error::OrderCap { order, cap: self.max_order });
        }
        Ok(order as usize)
    }
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps { max_order: Self::DEFAULT_MAX_ORDER }
    }
}

/// A set of element indices of a [`ConcreteGroup`], stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet {
    words: Vec<u64>,
}

impl ElementSet {
    pub fn empty(universe: usize) -> Self {
        ElementSet { words: vec![0; universe.div_ceil(64)] }
    }

    pub fn insert(&mut self, x: usize) {
        self.words[x / 64] |= 1 << (x % 64);
    }

    pub fn contains(&self, x: usize) -> bool {
        self.words[x / 64] >> (x % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Elements in increasing index order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + bit)
            })
        })
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// An explicit group `⊕ Z/ℓ^{cᵢ}` whose elements are residue vectors,
/// addressed by their mixed-radix index (first coordinate least significant).
#[derive(Debug, Clone)]
pub struct ConcreteGroup {
    shape: GroupClass,
    moduli: Vec<u32>,
    order: usize,
    digits: Vec<u32>,
    order_log: Vec<u32>,
}

impl ConcreteGroup {
    pub fn new(shape: &GroupClass, caps: &OracleCaps) -> Result<Self> {
        let order = caps.admit(shape)?;
        let ell = shape.ell().get();
        let moduli: Vec<u32> = shape.parts().iter().map(|&c| ell.pow(c)).collect();
        let rank = moduli.len();
        let mut digits = Vec::with_capacity(order * rank);
        let mut order_log = Vec::with_capacity(order);
        for x in 0..order {
            let mut rest = x;
            let mut log = 0;
            for (i, &m) in moduli.iter().enumerate() {
                let d = (rest % m as usize) as u32;
                rest /= m as usize;
                digits.push(d);
                if d != 0 {
                    log = log.max(shape.parts()[i] - valuation(d, ell));
                }
            }
            order_log.push(log);
        }
        Ok(ConcreteGroup { shape: shape.clone(), moduli, order, digits, order_log })
    }

    pub fn shape(&self) -> &GroupClass {
        &self.shape
    }

    pub fn ell(&self) -> Ell {
        self.shape.ell()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn zero(&self) -> usize {
        0
    }

    /// The residue vector of element `x`.
    pub fn coords(&self, x: usize) -> &[u32] {
        &self.digits[x * self.rank()..(x + 1) * self.rank()]
    }

    fn encode(&self, coords: impl Iterator<Item = u32>) -> usize {
        let mut index = 0usize;
        let mut stride = 1usize;
        for (d, &m) in coords.zip(&self.moduli) {
            index += d as usize * stride;
            stride *= m as usize;
        }
        index
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        let (cx, cy) = (self.coords(x), self.coords(y));
        self.encode(cx.iter().zip(cy).zip(&self.moduli).map(|((a, b), m)| (a + b) % m))
    }

    pub fn neg(&self, x: usize) -> usize {
        self.encode(self.coords(x).iter().zip(&self.moduli).map(|(a, m)| (m - a) % m))
    }

    /// `k · x`.
    pub fn scale(&self, k: u64, x: usize) -> usize {
        self.encode(
            self.coords(x)
                .iter()
                .zip(&self.moduli)
                .map(|(&a, &m)| ((u64::from(a) * (k % u64::from(m))) % u64::from(m)) as u32),
        )
    }

    /// `log_ℓ` of the order of `x`.
    pub fn order_log(&self, x: usize) -> u32 {
        self.order_log[x]
    }

    /// The canonical generator of the `i`-th cyclic factor.
    pub fn generator(&self, i: usize) -> usize {
        self.encode((0..self.rank()).map(|j| u32::from(i == j)))
    }

    pub fn all(&self) -> ElementSet {
        let mut set = ElementSet::empty(self.order);
        (0..self.order).for_each(|x| set.insert(x));
        set
    }

    pub fn trivial(&self) -> ElementSet {
        let mut set = ElementSet::empty(self.order);
        set.insert(0);
        set
    }

    /// `⟨x⟩`.
    pub fn cyclic(&self, x: usize) -> ElementSet {
        self.join(&self.trivial(), x)
    }

    /// `H + ⟨x⟩` for a subgroup `H`.
    pub fn join(&self, h: &ElementSet, x: usize) -> ElementSet {
        let mut out = h.clone();
        let mut step = x;
        while !h.contains(step) {
            for y in h.iter() {
                out.insert(self.add(y, step));
            }
            step = self.add(step, x);
        }
        out
    }

    /// Verifies that `set` contains 0 and is closed under addition and
    /// negation.
    pub fn is_subgroup(&self, set: &ElementSet) -> bool {
        set.contains(0)
            && set.iter().all(|x| set.contains(self.neg(x)) && set.iter().all(|y| set.contains(self.add(x, y))))
    }

    /// Isomorphism type of a subgroup, read off from how many of its
    /// elements each power of ℓ kills.
    pub fn iso_type(&self, set: &ElementSet) -> Result<GroupClass> {
        let ell = self.ell().get() as usize;
        let top = self.shape.exponent_log();
        let mut killed = vec![0usize; top as usize + 1];
        for x in set.iter() {
            killed[self.order_log[x] as usize] += 1;
        }
        for i in 1..killed.len() {
            killed[i] += killed[i - 1];
        }
        // rank_{ℓ^i} = log_ℓ(killed[i] / killed[i-1])
        let mut prefix_ranks = Vec::with_capacity(top as usize);
        for i in 1..killed.len() {
            let (mut ratio, rem) = (killed[i] / killed[i - 1], killed[i] % killed[i - 1]);
            let mut r = 0usize;
            while ratio > 1 && ratio % ell == 0 {
                ratio /= ell;
                r += 1;
            }
            if rem != 0 || ratio != 1 {
                return Err(Error::Internal("element set is not a subgroup".into()));
            }
            prefix_ranks.push(r);
        }
        let rank = prefix_ranks.first().copied().unwrap_or(0);
        let parts = (1..=rank).map(|j| prefix_ranks.iter().filter(|&&r| r >= j).count() as u32);
        Ok(GroupClass::new(self.ell(), parts))
    }
}

fn valuation(mut d: u32, ell: u32) -> u32 {
    let mut v = 0;
    while d % ell == 0 {
        d /= ell;
        v += 1;
    }
    v
}
