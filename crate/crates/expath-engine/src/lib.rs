//! Shortest decomposable paths and expaths in `G - A`, given canonical
//! all-pairs data of the unmodified graph.

mod decomposable;
mod expath;
mod layered;
mod params;
mod structure;

pub use decomposable::{decomposable_matrix, decomposable_sssp, DecompTable, Survival};
pub use expath::{shortest_expath, shortest_expath_with};
pub use layered::{decomposable_sssp_layered, layered_phase, shortest_expath_layered};
pub use params::DecompParams;
pub use structure::{verify_expath, Block, ExpathStructure, Label, Piece, Tail};
