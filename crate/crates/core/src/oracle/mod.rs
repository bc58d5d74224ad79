//! Brute-force ground truth on explicit small groups.
//!
//! Everything here works element by element: subgroups are element sets,
//! maps are choices of generator images, μ is computed from its defining
//! recursion. It is deliberately slow and independent of the closed-form
//! counts in [`crate::counting`].

mod checks;
mod group;
mod lattice;
mod maps;

pub use checks::{
    amalgam_check, amalgam_sweep, hall_trivialyes_check, hall_value, AmalgamCheck, AmalgamReport, HallReport,
    MuTrivialEntry, OracleCheck, OracleViolation,
};
pub use group::{ConcreteGroup, ElementSet, OracleCaps};
pub use lattice::{enumerate_subgroups, LatticeDump, Subgroup, SubgroupLattice, SubgroupRecord};
pub use maps::{oracle_maps, oracle_sub, MapKind};
