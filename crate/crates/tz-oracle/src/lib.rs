//! Thorup–Zwick distance oracle and its compatible spanner over subgraphs
//! of a fixed host graph, sharing one global level hierarchy.
//!
//! Queries use the "both orientations, every level" variant: for every
//! level `i` and both endpoints, the pivot `p_i` is tried as interconnect
//! whenever it lies in the other endpoint's bunch.

mod hierarchy;
mod oracle;

pub use hierarchy::{sample_hierarchy, LevelHierarchy};
pub use oracle::{build_oracle_and_spanner, build_spanner, Interconnect, TzError, TzOracle};
