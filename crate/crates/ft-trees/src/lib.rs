//! Fault-tolerant trees over expaths: each node stores the shortest expath
//! avoiding the segments failed on its root path, cut into segments and
//! parts, and a query descends through the first failed segment.

mod check;
mod netpoints;
mod node;
mod pivots;
mod tree;

pub use check::{node_check, CheckOutcome, FnShort, LcaIndex, ShortOracle, SHORT_STRETCH};
pub use netpoints::{compute_netpoints, segment_violations, Netpoints};
pub use node::{FtNode, NodeBuildStats, NodeSpec, Part, PartKind};
pub use pivots::{sample_pivots, PivotConfig, PivotSets};
pub use tree::{FtAnswer, FtContext, FtParams, FtStats, FtTrees, NodeKey};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FtError {
    #[error(transparent)]
    Envelope(#[from] graph_core::envelope::EnvelopeError),
    #[error("snapshot taken with different tree parameters or epoch")]
    Mismatch,
}
