use crate::error::{Error, Result};

use super::GroupClass;

/// The closed interval `[lo, hi]` of the embedding order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: GroupClass,
    hi: GroupClass,
    members: Vec<GroupClass>,
}

impl Interval {
    pub fn lo(&self) -> &GroupClass {
        &self.lo
    }

    pub fn hi(&self) -> &GroupClass {
        &self.hi
    }

    /// Members in enumeration order; `lo` first and `hi` last when non-empty.
    pub fn members(&self) -> &[GroupClass] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, b: &GroupClass) -> bool {
        self.members.binary_search(b).is_ok()
    }

    /// Members strictly between `lo` and `hi`.
    pub fn open_len(&self) -> usize {
        self.members.len().saturating_sub(2)
    }

    pub fn into_members(self) -> Vec<GroupClass> {
        self.members
    }
}

/// All classes `B` with `lo ≤ B ≤ hi`, sorted by order then parts.
pub fn enumerate_interval(lo: &GroupClass, hi: &GroupClass) -> Result<Interval> {
    lo.same_ell(hi)?;
    let mut members = Vec::new();
    if lo.embeds_unchecked(hi) {
        let mut prefix = Vec::with_capacity(hi.rank());
        fill(lo, hi, &mut prefix, &mut members);
        members.sort();
    }
    Ok(Interval { lo: lo.clone(), hi: hi.clone(), members })
}

fn fill(lo: &GroupClass, hi: &GroupClass, prefix: &mut Vec<u32>, out: &mut Vec<GroupClass>) {
    let i = prefix.len();
    if i == hi.rank() {
        out.push(GroupClass::new(lo.ell(), prefix.iter().copied()));
        return;
    }
    let cap = prefix.last().copied().unwrap_or(u32::MAX).min(hi.part(i));
    for b in lo.part(i)..=cap {
        prefix.push(b);
        fill(lo, hi, prefix, out);
        prefix.pop();
    }
}

/// An `A`-chain: a strictly increasing sequence of classes above `base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    base: GroupClass,
    links: Vec<GroupClass>,
}

impl Chain {
    pub fn new(base: GroupClass, links: Vec<GroupClass>) -> Result<Self> {
        if links.is_empty() {
            return Err(Error::InvalidChain("a chain needs at least one link".into()));
        }
        let mut prev = &base;
        for next in &links {
            prev.same_ell(next)?;
            if prev == next || !prev.embeds_unchecked(next) {
                return Err(Error::InvalidChain(format!("{prev} is not strictly below {next}")));
            }
            prev = next;
        }
        Ok(Chain { base, links })
    }

    pub fn base(&self) -> &GroupClass {
        &self.base
    }

    pub fn links(&self) -> &[GroupClass] {
        &self.links
    }

    pub fn top(&self) -> &GroupClass {
        self.links.last().expect("chains are non-empty")
    }

    /// Consecutive pairs starting from the base: `(A, A₁), (A₁, A₂), …`.
    pub fn steps(&self) -> impl Iterator<Item = (&GroupClass, &GroupClass)> {
        std::iter::once(&self.base).chain(&self.links).zip(&self.links)
    }
}

/// Streams every `A`-chain with maximum `C` exactly once.
///
/// The walk is a depth-first search over the interval's strict-order graph;
/// only the current path is held in memory.
pub fn enumerate_chains(base: &GroupClass, top: &GroupClass) -> Result<ChainIter> {
    let interval = enumerate_interval(base, top)?;
    Ok(ChainIter::new(interval))
}

#[derive(Debug, Clone)]
pub struct ChainIter {
    members: Vec<GroupClass>,
    above: Vec<Vec<usize>>,
    stack: Vec<(usize, usize)>,
}

impl ChainIter {
    pub(crate) fn new(interval: Interval) -> Self {
        let members = interval.into_members();
        let n = members.len();
        let above: Vec<Vec<usize>> = (0..n)
            .map(|i| {
                ((i + 1)..n)
                    .filter(|&j| members[i].size() < members[j].size() && members[i].embeds_unchecked(&members[j]))
                    .collect()
            })
            .collect();
        // A single-member interval (A = C) has no chains.
        let stack = if n >= 2 { vec![(0, 0)] } else { Vec::new() };
        ChainIter { members, above, stack }
    }
}

impl Iterator for ChainIter {
    type Item = Chain;

    fn next(&mut self) -> Option<Chain> {
        let top = self.members.len().checked_sub(1)?;
        loop {
            let (node, pos) = self.stack.last_mut()?;
            let Some(&next) = self.above[*node].get(*pos) else {
                self.stack.pop();
                continue;
            };
            *pos += 1;
            if next == top {
                let links = self.stack[1..]
                    .iter()
                    .map(|&(i, _)| self.members[i].clone())
                    .chain(std::iter::once(self.members[top].clone()))
                    .collect();
                return Some(Chain { base: self.members[0].clone(), links });
            }
            self.stack.push((next, 0));
        }
    }
}
