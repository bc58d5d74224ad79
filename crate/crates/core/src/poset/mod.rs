//! The poset of isomorphism classes of finite abelian ℓ-groups, ordered by
//! embedding.
//!
//! A class is a partition of exponents; `A ≤ B` iff `A` injects into `B`,
//! which for partitions is componentwise comparison after zero padding.

mod class;
mod interval;

pub use class::{classes_up_to, parse_parts, Ell, GroupClass};
pub use interval::{enumerate_chains, enumerate_interval, Chain, ChainIter, Interval};
