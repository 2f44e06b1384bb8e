//! Undirected graphs with a global canonical choice of shortest paths.
//!
//! Every other crate in the workspace indexes into [`Graph`]: vertices are
//! dense `u32` ids, edges are dense ids fixed at construction, and all
//! shortest-path routines share the same tie-breaking rule so that the
//! path between two vertices is unique, symmetric and closed under taking
//! subpaths.
//!
//! Ties between equal-length paths are resolved by comparing edge-id sets:
//! of two distinct paths, the one containing the smallest edge id in their
//! symmetric difference wins. This is an additive (infinitesimal) weight
//! perturbation, so it is consistent across sources and subgraphs.

mod apsp;
mod dimacs;
mod edge_set;
pub mod envelope;
mod error;
pub mod generate;
mod graph;
mod lca;
mod search;
pub mod seed;

pub use apsp::{apsp, ApspTable};
pub use dimacs::{load_graph, read_graph, write_graph};
pub use edge_set::EdgeSet;
pub use error::GraphError;
pub use graph::{Adjacent, Edge, FailureSet, Graph};
pub use lca::{build_sp_tree_lca, edge_on_canonical_path, SpTree};
pub use search::{
    canonical_dijkstra, hop_bounded, shortest_path_tree, shortest_path_tree_in, HopBoundedPaths,
    Searcher, ShortestPathTree,
};

pub type VertexId = u32;
pub type EdgeId = u32;
pub type Weight = u32;

/// Path length. [`INF`] marks "no path".
pub type Dist = u64;

pub const INF: Dist = Dist::MAX;

/// Sentinel for "no vertex" in parent arrays.
pub const NO_VERTEX: VertexId = VertexId::MAX;

/// Sentinel for "no edge" in parent-edge arrays.
pub const NO_EDGE: EdgeId = EdgeId::MAX;

/// Saturating distance addition; anything involving [`INF`] stays infinite.
#[inline]
pub fn dist_add(a: Dist, b: Dist) -> Dist {
    if a == INF || b == INF {
        INF
    } else {
        a.saturating_add(b)
    }
}
