use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use dashmap::mapref::entry::Entry;
use dashmap::DashMap;
use graph_core::envelope::{open, seal};
use graph_core::{ApspTable, Dist, EdgeSet, FailureSet, Graph, VertexId, INF};
use serde::{Deserialize, Serialize};

use crate::check::{node_check, CheckOutcome, LcaIndex, ShortOracle};
use crate::node::{FtNode, NodeSpec};
use crate::{FtError, PivotSets};

const MAGIC: [u8; 4] = *b"FTTR";
const VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FtParams {
    pub sensitivity: usize,
    pub eps: f64,
    pub lambda: usize,
    pub hop_cutoff: usize,
}

impl FtParams {
    /// Number of transitions allowed in an expath block.
    pub fn ell(&self) -> usize {
        2 * self.sensitivity + 1
    }
}

/// Shared read-only inputs of every tree.
#[derive(Clone, Debug)]
pub struct FtContext {
    pub graph: Arc<Graph>,
    pub apsp: Arc<ApspTable>,
    pub pivots: Arc<PivotSets>,
    pub lca: Arc<LcaIndex>,
}

/// A node is addressed by the tree endpoints and the failed segment index
/// chosen at each level below the root.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeKey {
    pub source: VertexId,
    pub target: VertexId,
    pub path: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FtAnswer {
    pub dist: Dist,
    pub visited: usize,
    /// The traversal ended at a depth-`f` node.
    pub reached_leaf: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FtStats {
    pub nodes_built: u64,
    pub missing_pivots: u64,
    pub segment_violations: u64,
    pub discarded_builds: u64,
}

#[derive(Default, Debug)]
struct Counters {
    nodes_built: AtomicU64,
    missing_pivots: AtomicU64,
    segment_violations: AtomicU64,
    discarded_builds: AtomicU64,
}

#[derive(Serialize, Deserialize)]
struct Snapshot {
    params: FtParams,
    epoch: u64,
    nodes: Vec<(NodeKey, FtNode)>,
}

/// Lazily materialized fault-tolerant trees for one granularity.
#[derive(Debug)]
pub struct FtTrees {
    ctx: FtContext,
    params: FtParams,
    epoch: u64,
    memo: DashMap<NodeKey, Arc<FtNode>>,
    counters: Counters,
}

impl FtTrees {
    /// `epoch` tags serialized snapshots, typically the pivot seed.
    pub fn new(ctx: FtContext, params: FtParams, epoch: u64) -> Self {
        FtTrees {
            ctx,
            params,
            epoch,
            memo: DashMap::new(),
            counters: Counters::default(),
        }
    }

    pub fn params(&self) -> &FtParams {
        &self.params
    }

    pub fn context(&self) -> &FtContext {
        &self.ctx
    }

    fn spec(&self, source: VertexId, target: VertexId) -> NodeSpec {
        NodeSpec {
            source,
            target,
            ell: self.params.ell(),
            lambda: self.params.lambda,
            eps: self.params.eps,
            hop_cutoff: self.params.hop_cutoff,
        }
    }

    /// Edges failed on the way to the node; never stored.
    pub fn removed_edges(&self, key: &NodeKey) -> EdgeSet {
        let mut a = EdgeSet::new(self.ctx.graph.m());
        for i in 0..key.path.len() {
            let anc = self.node(&NodeKey {
                source: key.source,
                target: key.target,
                path: key.path[..i].to_vec(),
            });
            for e in anc.segment_edges(&self.ctx.apsp, key.path[i] as usize) {
                a.insert(e);
            }
        }
        a
    }

    /// Returns the node, building it on first use. The key must name an
    /// existing segment at every level.
    pub fn node(&self, key: &NodeKey) -> Arc<FtNode> {
        if let Some(n) = self.memo.get(key) {
            return n.clone();
        }
        assert!(key.path.len() <= self.params.sensitivity, "node deeper than the sensitivity");
        let a = self.removed_edges(key);
        let (node, stats) = FtNode::build(
            &self.ctx.graph,
            &self.ctx.apsp,
            &self.ctx.pivots,
            &a,
            &self.spec(key.source, key.target),
            key.path.len() as u32,
        );
        match self.memo.entry(key.clone()) {
            Entry::Occupied(o) => {
                self.counters.discarded_builds.fetch_add(1, Ordering::Relaxed);
                o.get().clone()
            }
            Entry::Vacant(v) => {
                self.counters.nodes_built.fetch_add(1, Ordering::Relaxed);
                self.counters
                    .missing_pivots
                    .fetch_add(stats.missing_pivots as u64, Ordering::Relaxed);
                self.counters
                    .segment_violations
                    .fetch_add(stats.segment_violations as u64, Ordering::Relaxed);
                v.insert(Arc::new(node)).clone()
            }
        }
    }

    pub fn root(&self, source: VertexId, target: VertexId) -> Arc<FtNode> {
        self.node(&NodeKey {
            source,
            target,
            path: Vec::new(),
        })
    }

    /// Estimates `d_{G-F}(source, target)` by descending from the root.
    pub fn query(
        &self,
        source: VertexId,
        target: VertexId,
        failures: &FailureSet,
        short: &dyn ShortOracle,
    ) -> FtAnswer {
        let mut key = NodeKey {
            source,
            target,
            path: Vec::new(),
        };
        let mut visited = 0;
        loop {
            let node = self.node(&key);
            visited += 1;
            if !node.exists() {
                return FtAnswer {
                    dist: INF,
                    visited,
                    reached_leaf: node.depth as usize == self.params.sensitivity,
                };
            }
            let check = node_check(&self.ctx.graph, &node, failures, short, &self.ctx.lca);
            if node.depth as usize == self.params.sensitivity {
                // The leaf path is verified exactly, so a sampling failure
                // costs stretch rather than soundness.
                let dist = if node.avoids(&self.ctx.apsp, failures) {
                    node.length
                } else {
                    match check {
                        CheckOutcome::Ok(d) => d,
                        CheckOutcome::FailedSegment(_) => INF,
                    }
                };
                return FtAnswer {
                    dist,
                    visited,
                    reached_leaf: true,
                };
            }
            match check {
                CheckOutcome::Ok(d) => {
                    return FtAnswer {
                        dist: d,
                        visited,
                        reached_leaf: false,
                    }
                }
                CheckOutcome::FailedSegment(s) => key.path.push(s as u32),
            }
        }
    }

    /// Materializes the whole tree; returns its node count.
    pub fn build_eager(&self, source: VertexId, target: VertexId) -> usize {
        let mut stack = vec![NodeKey {
            source,
            target,
            path: Vec::new(),
        }];
        let mut count = 0;
        while let Some(key) = stack.pop() {
            let node = self.node(&key);
            count += 1;
            if (node.depth as usize) < self.params.sensitivity {
                for s in 0..node.segment_count() {
                    let mut child = key.clone();
                    child.path.push(s as u32);
                    stack.push(child);
                }
            }
        }
        count
    }

    pub fn stats(&self) -> FtStats {
        FtStats {
            nodes_built: self.counters.nodes_built.load(Ordering::Relaxed),
            missing_pivots: self.counters.missing_pivots.load(Ordering::Relaxed),
            segment_violations: self.counters.segment_violations.load(Ordering::Relaxed),
            discarded_builds: self.counters.discarded_builds.load(Ordering::Relaxed),
        }
    }

    pub fn len(&self) -> usize {
        self.memo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memo.is_empty()
    }

    /// Words held by materialized nodes, including their keys.
    pub fn words(&self) -> usize {
        self.memo
            .iter()
            .map(|e| 2 + e.key().path.len() + e.value().words())
            .sum()
    }

    /// Serializes every materialized node in key order.
    pub fn to_bytes(&self) -> Result<Vec<u8>, FtError> {
        let mut nodes: Vec<(NodeKey, FtNode)> = self
            .memo
            .iter()
            .map(|e| (e.key().clone(), (**e.value()).clone()))
            .collect();
        nodes.sort_by(|a, b| a.0.cmp(&b.0));
        let snap = Snapshot {
            params: self.params,
            epoch: self.epoch,
            nodes,
        };
        Ok(seal(MAGIC, VERSION, &snap)?)
    }

    /// Restores a snapshot over the given context. Fails on malformed bytes
    /// or when the snapshot was taken with other parameters or epoch.
    pub fn from_bytes(ctx: FtContext, bytes: &[u8], params: FtParams, epoch: u64) -> Result<Self, FtError> {
        let snap: Snapshot = open(bytes, MAGIC, VERSION)?;
        if snap.params != params || snap.epoch != epoch {
            return Err(FtError::Mismatch);
        }
        let trees = FtTrees::new(ctx, params, epoch);
        for (k, n) in snap.nodes {
            trees.memo.insert(k, Arc::new(n));
        }
        Ok(trees)
    }
}
