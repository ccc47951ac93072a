//! Finite group computations on explicit multiplication tables.
//!
//! Groups are stored as full `order x order` multiplication tables with the
//! identity fixed at index 0, which keeps every element-level operation a
//! table lookup. On top of that sit subgroup arithmetic (closure, normalizer,
//! cores, quotients), exhaustive subgroup-lattice enumeration with conjugacy
//! reduction, structural predicates (p-cores, Fitting subgroup, Roquette
//! tests), the expansivity predicate, and first/second cohomology for cyclic
//! modules and F_p-linear actions.

pub mod bitset;
pub mod cache;
pub mod cohomology;
pub mod construct;
pub mod defs;
pub mod expansive;
pub mod group;
pub mod iso;
pub mod lattice;
pub mod structure;
pub mod subgroup;

pub use bitset::Bitset;
pub use group::{Elem, GroupError, GroupHomomorphism, GroupTable, SubgroupProperties};
pub use subgroup::SubgroupSet;

/// Hard upper bound on group order; everything in this crate assumes element
/// indices fit in a `u16` and tables fit comfortably in memory.
pub const MAX_ORDER: usize = 2000;
