//! Fault-tolerant oracle for short replacement paths.
//!
//! A forest of sampling trees: every node removes a random subset of the
//! edges its parent kept, internal nodes keep the union of many spanners
//! of randomly thinned graphs, and leaves carry a distance oracle. A query
//! descends each tree through children whose removed set covers the
//! failures still visible at the parent, and takes the minimum over the
//! leaves it reaches.

mod forest;
mod params;

pub use forest::{build_forest, BuildOptions, BuildStats, ForestError, LeafHandle, SamplingForest, SamplingNode, SamplingTree};
pub use params::{derive_params, ForestParams};
