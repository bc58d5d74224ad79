//! Exact arithmetic for the Möbius-type function `S` on the poset of
//! isomorphism classes of finite abelian ℓ-groups (ℓ an odd prime).
//!
//! * [`poset`] — group classes as partitions, the embedding order,
//!   intervals and chains.
//! * [`counting`] — closed-form counts of forms, injections, automorphisms,
//!   subgroups and surjections.
//! * [`mobius`] — `S` by literal chain sums and by convolution, plus the
//!   factorisation/vanishing sweep.
//! * [`oracle`] — brute force on explicit groups: subgroup lattices, the
//!   classical Möbius function, exhaustive map counts.
//! * [`cohen_lenstra`] — the Cohen–Lenstra measure and moments.

pub mod cohen_lenstra;
pub mod counting;
pub mod error;
pub mod mobius;
pub mod oracle;
pub mod poset;
pub mod report;

pub use counting::{aut_count, chain_weight, inj_count, lambda_count, sub_count, surj_count};
pub use error::{Error, Result};
pub use mobius::{
    s_chain, theorem_temp_factor, verify_theorems, ChainGuard, Method, MobiusTable, SEntry, TheoremReport,
    VerifyOptions,
};
pub use poset::{classes_up_to, enumerate_chains, enumerate_interval, Chain, Ell, GroupClass, Interval};

pub use num_bigint::{BigInt, BigUint};
