use graph_core::{edge_on_canonical_path, Dist, FailureSet, Graph, SpTree, VertexId, INF};
use rpc_forest::SamplingForest;

use crate::FtNode;

/// Stretch of the short-path oracle the checks are calibrated for (`k = 2`).
pub const SHORT_STRETCH: Dist = 3;

/// Hop-bounded distance estimate under failures.
pub trait ShortOracle {
    fn short_distance(&self, s: VertexId, t: VertexId, failures: &FailureSet) -> Dist;
}

impl ShortOracle for SamplingForest {
    fn short_distance(&self, s: VertexId, t: VertexId, failures: &FailureSet) -> Dist {
        self.query_short(s, t, failures)
    }
}

/// Adapter for closures.
pub struct FnShort<F>(pub F);

impl<F: Fn(VertexId, VertexId, &FailureSet) -> Dist> ShortOracle for FnShort<F> {
    fn short_distance(&self, s: VertexId, t: VertexId, failures: &FailureSet) -> Dist {
        (self.0)(s, t, failures)
    }
}

/// Canonical shortest-path trees rooted at pivots.
#[derive(Clone, Debug, Default)]
pub struct LcaIndex {
    trees: Vec<Option<SpTree>>,
}

impl LcaIndex {
    pub fn build(g: &Graph, roots: &[VertexId]) -> Self {
        let mut trees = vec![None; g.n()];
        for &r in roots {
            trees[r as usize] = Some(graph_core::build_sp_tree_lca(g, r));
        }
        LcaIndex { trees }
    }

    pub fn tree(&self, root: VertexId) -> Option<&SpTree> {
        self.trees.get(root as usize).and_then(|t| t.as_ref())
    }

    pub fn words(&self) -> usize {
        self.trees.iter().flatten().map(|t| t.words()).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckOutcome {
    /// A path of at most this length survives.
    Ok(Dist),
    FailedSegment(usize),
}

/// Tests each part in path order; the first failing part names the segment.
pub fn node_check(
    g: &Graph,
    node: &FtNode,
    failures: &FailureSet,
    short: &dyn ShortOracle,
    lca: &LcaIndex,
) -> CheckOutcome {
    if !node.exists() {
        return CheckOutcome::Ok(INF);
    }
    for part in &node.parts {
        let failed = if part.long {
            match part.pivot.and_then(|p| lca.tree(p)) {
                Some(tree) => failures
                    .edges()
                    .iter()
                    .any(|&e| edge_on_canonical_path(tree, g, part.v, part.w, e)),
                None => true,
            }
        } else {
            short.short_distance(part.v, part.w, failures) > SHORT_STRETCH * part.dist
        };
        if failed {
            return CheckOutcome::FailedSegment(part.segment as usize);
        }
    }
    CheckOutcome::Ok(SHORT_STRETCH.saturating_mul(node.length))
}
