use graph_core::envelope::{self, EnvelopeError};
use graph_core::seed::rng_for;
use graph_core::{Dist, EdgeId, EdgeSet, FailureSet, Graph, VertexId, INF};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use tz_oracle::{build_oracle_and_spanner, build_spanner, LevelHierarchy, TzOracle};

use crate::ForestParams;

#[derive(Debug, Error)]
pub enum ForestError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("projected size {projected} words exceeds budget {budget}")]
    BudgetExceeded { projected: u128, budget: u128 },
    #[error(transparent)]
    Format(#[from] EnvelopeError),
}

const MAGIC: [u8; 4] = *b"RPCF";
const VERSION: u32 = 1;

#[derive(Clone, Debug, Default)]
pub struct BuildOptions {
    /// Abort when the projected number of stored words exceeds this.
    pub budget: Option<u128>,
    /// Also keep the full sampled set at every node and the spanner at
    /// every leaf, for audits.
    pub instrument: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildStats {
    pub spanner_builds: u64,
    pub leaves: u64,
    /// Entries of all stored edge dictionaries.
    pub dictionary_entries: u64,
    pub leaf_oracle_words: u64,
    /// Total bunch entries over all leaf oracles.
    pub bunch_entries: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplingNode {
    pub depth: u32,
    pub parent: u32,
    pub first_child: u32,
    pub child_count: u32,
    /// Kept edges `E(S_x)`; present at internal nodes (and at leaves when
    /// instrumented).
    pub kept: Option<EdgeSet>,
    /// Removed edges visible to the parent, `A_x ∩ E(S_parent)`; absent at
    /// the root.
    pub removed: Option<EdgeSet>,
    /// Full sampled set `A_x`, instrumented builds only.
    #[serde(skip)]
    pub sampled: Option<EdgeSet>,
    pub oracle: Option<TzOracle>,
    /// Global leaf ordinal, `u32::MAX` for internal nodes.
    pub leaf_index: u32,
}

impl SamplingNode {
    pub fn is_leaf(&self) -> bool {
        self.oracle.is_some()
    }

    pub fn children(&self) -> std::ops::Range<usize> {
        self.first_child as usize..(self.first_child + self.child_count) as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplingTree {
    pub nodes: Vec<SamplingNode>,
}

/// Address of a leaf: tree index and node index within the tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LeafHandle {
    pub tree: u32,
    pub node: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplingForest {
    pub params: ForestParams,
    pub seed: u64,
    pub hierarchy: LevelHierarchy,
    pub m: usize,
    pub trees: Vec<SamplingTree>,
    pub stats: BuildStats,
    leaves: Vec<LeafHandle>,
}

pub fn build_forest(
    g: &Graph,
    params: &ForestParams,
    hierarchy: &LevelHierarchy,
    seed: u64,
    options: &BuildOptions,
) -> Result<SamplingForest, ForestError> {
    if hierarchy.n() != g.n() || hierarchy.k() != params.k {
        return Err(ForestError::InvalidParams("hierarchy does not match graph or k".into()));
    }
    if let Some(budget) = options.budget {
        let projected = params.projected_entries(g.m());
        if projected > budget {
            return Err(ForestError::BudgetExceeded { projected, budget });
        }
    }
    let trees: Vec<(SamplingTree, u64)> = (0..params.trees)
        .into_par_iter()
        .map(|i| {
            let mut b = TreeBuilder {
                g,
                params,
                hierarchy,
                options,
                rng: rng_for(seed, &format!("forest/tree-{i}")),
                nodes: Vec::new(),
                spanner_builds: 0,
            };
            b.build();
            (SamplingTree { nodes: b.nodes }, b.spanner_builds)
        })
        .collect();
    let mut stats = BuildStats::default();
    let mut out = Vec::with_capacity(trees.len());
    let mut leaves = Vec::new();
    for (t, (mut tree, builds)) in trees.into_iter().enumerate() {
        stats.spanner_builds += builds;
        for (i, node) in tree.nodes.iter_mut().enumerate() {
            if node.is_leaf() {
                node.leaf_index = leaves.len() as u32;
                leaves.push(LeafHandle { tree: t as u32, node: i as u32 });
            }
            if !node.is_leaf() {
                stats.dictionary_entries += node.kept.as_ref().map_or(0, |s| s.len() as u64);
            }
            stats.dictionary_entries += node.removed.as_ref().map_or(0, |s| s.len() as u64);
            if let Some(o) = &node.oracle {
                stats.leaf_oracle_words += o.words() as u64;
                stats.bunch_entries += o.total_bunch_entries() as u64;
            }
        }
        out.push(tree);
    }
    stats.leaves = leaves.len() as u64;
    Ok(SamplingForest {
        params: params.clone(),
        seed,
        hierarchy: hierarchy.clone(),
        m: g.m(),
        trees: out,
        stats,
        leaves,
    })
}

struct TreeBuilder<'a, R: Rng> {
    g: &'a Graph,
    params: &'a ForestParams,
    hierarchy: &'a LevelHierarchy,
    options: &'a BuildOptions,
    rng: R,
    nodes: Vec<SamplingNode>,
    spanner_builds: u64,
}

impl<R: Rng> TreeBuilder<'_, R> {
    fn build(&mut self) {
        let all = EdgeSet::full(self.g.m());
        self.nodes.push(SamplingNode {
            depth: 0,
            parent: u32::MAX,
            first_child: 0,
            child_count: 0,
            kept: None,
            removed: None,
            sampled: None,
            oracle: None,
            leaf_index: u32::MAX,
        });
        self.visit(0, &all, &all);
    }

    fn sample(&mut self, from: &EdgeSet, q: f64) -> EdgeSet {
        let mut out = EdgeSet::new(self.g.m());
        if q >= 1.0 {
            out.union_with(from);
            return out;
        }
        for e in from.iter() {
            if self.rng.gen_bool(q) {
                out.insert(e);
            }
        }
        out
    }

    fn visit(&mut self, idx: usize, parent_kept: &EdgeSet, sampled: &EdgeSet) {
        let r = self.nodes[idx].depth as usize;
        let h = self.params.height;
        if self.options.instrument {
            self.nodes[idx].sampled = Some(sampled.clone());
        }
        if r == h {
            let mut graph = parent_kept.clone();
            graph.difference_with(sampled);
            let (oracle, spanner) = build_oracle_and_spanner(self.g, &graph, self.hierarchy);
            self.spanner_builds += 1;
            let node = &mut self.nodes[idx];
            node.oracle = Some(oracle);
            if self.options.instrument {
                node.kept = Some(spanner);
            }
            return;
        }
        let q = self.params.p.powi((h - r) as i32);
        let mut kept = EdgeSet::new(self.g.m());
        for _ in 0..self.params.rounds[r] {
            let a = self.sample(sampled, q);
            let mut graph = parent_kept.clone();
            graph.difference_with(&a);
            kept.union_with(&build_spanner(self.g, &graph, self.hierarchy));
            self.spanner_builds += 1;
        }
        let first = self.nodes.len();
        let count = self.params.branching;
        for _ in 0..count {
            self.nodes.push(SamplingNode {
                depth: r as u32 + 1,
                parent: idx as u32,
                first_child: 0,
                child_count: 0,
                kept: None,
                removed: None,
                sampled: None,
                oracle: None,
                leaf_index: u32::MAX,
            });
        }
        self.nodes[idx].first_child = first as u32;
        self.nodes[idx].child_count = count as u32;
        for c in first..first + count {
            let child_sampled = self.sample(sampled, self.params.p);
            let mut visible = child_sampled.clone();
            visible.intersect_with(&kept);
            self.nodes[c].removed = Some(visible);
            self.visit(c, &kept, &child_sampled);
        }
        self.nodes[idx].kept = Some(kept);
    }
}

impl SamplingForest {
    pub fn params(&self) -> &ForestParams {
        &self.params
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    pub fn leaf_handle(&self, index: usize) -> LeafHandle {
        self.leaves[index]
    }

    pub fn node(&self, h: LeafHandle) -> &SamplingNode {
        &self.trees[h.tree as usize].nodes[h.node as usize]
    }

    pub fn leaf_oracle(&self, h: LeafHandle) -> &TzOracle {
        self.node(h).oracle.as_ref().expect("handle does not name a leaf")
    }

    /// Edge set of the graph the leaf oracle was built on:
    /// `E(S_parent) - A_leaf`.
    pub fn leaf_graph(&self, h: LeafHandle) -> EdgeSet {
        let tree = &self.trees[h.tree as usize];
        let node = &tree.nodes[h.node as usize];
        let mut edges = match node.parent {
            u32::MAX => EdgeSet::full(self.m),
            p => tree.nodes[p as usize].kept.clone().expect("internal node without dictionary"),
        };
        if let Some(removed) = &node.removed {
            edges.difference_with(removed);
        }
        edges
    }

    /// Whether the child passes the descent test: every failure still
    /// present at the parent was removed at the child.
    #[inline]
    fn child_excludes(parent: &SamplingNode, child: &SamplingNode, failures: &[EdgeId]) -> bool {
        let kept = parent.kept.as_ref().expect("internal node without dictionary");
        let removed = child.removed.as_ref().expect("child without dictionary");
        failures.iter().all(|&e| !kept.contains(e) || removed.contains(e))
    }

    /// The leaf reached in one tree, taking the first passing child at each
    /// level, or `None` when the descent gets stuck.
    pub fn descend(&self, tree: usize, failures: &FailureSet) -> Option<LeafHandle> {
        let nodes = &self.trees[tree].nodes;
        let mut y = 0usize;
        loop {
            let node = &nodes[y];
            if node.is_leaf() {
                return Some(LeafHandle { tree: tree as u32, node: y as u32 });
            }
            y = node
                .children()
                .find(|&c| Self::child_excludes(node, &nodes[c], failures.edges()))?;
        }
    }

    /// Leaves reached by the query descent, at most one per tree.
    pub fn surviving_leaves(&self, failures: &FailureSet) -> Vec<LeafHandle> {
        (0..self.trees.len()).filter_map(|t| self.descend(t, failures)).collect()
    }

    /// Estimate of the replacement distance: never below `d_{G-F}(s,t)`,
    /// and within `2k - 1` of the best path with at most `L` edges when the
    /// covering holds.
    pub fn query_short(&self, s: VertexId, t: VertexId, failures: &FailureSet) -> Dist {
        let mut best = INF;
        for t_idx in 0..self.trees.len() {
            if let Some(h) = self.descend(t_idx, failures) {
                best = best.min(self.leaf_oracle(h).query(s, t));
            }
        }
        best
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>, ForestError> {
        Ok(envelope::seal(MAGIC, VERSION, self)?)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, ForestError> {
        Ok(envelope::open(bytes, MAGIC, VERSION)?)
    }

    /// Stored words: edge dictionaries plus leaf oracles.
    pub fn words(&self) -> u64 {
        self.stats.dictionary_entries + self.stats.leaf_oracle_words
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derive_params;
    use tz_oracle::sample_hierarchy;

    fn triangle() -> Graph {
        Graph::unweighted(3, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn triangle_leaves_are_exact() {
        let g = triangle();
        let params = derive_params(3, 2, 1, 1, 1.0).unwrap();
        let hier = sample_hierarchy(3, 1, 0);
        let forest = build_forest(&g, &params, &hier, 5, &BuildOptions::default()).unwrap();
        for i in 0..forest.leaf_count() {
            let h = forest.leaf_handle(i);
            let graph = forest.leaf_graph(h);
            let o = forest.leaf_oracle(h);
            let sub = graph_core::apsp(&Graph::from_edges(3, graph.iter().map(|e| {
                let x = g.edge(e);
                (x.u, x.v, x.weight)
            })).unwrap());
            for s in 0..3 {
                for t in 0..3 {
                    assert_eq!(o.query(s, t), sub.dist(s, t));
                }
            }
        }
    }

    #[test]
    fn empty_graph_answers_inf() {
        let g = Graph::new(5);
        let params = derive_params(5, 2, 1, 2, 1.0).unwrap();
        let hier = sample_hierarchy(5, 2, 0);
        let forest = build_forest(&g, &params, &hier, 1, &BuildOptions::default()).unwrap();
        assert_eq!(forest.query_short(0, 3, &FailureSet::empty()), INF);
        assert_eq!(forest.query_short(2, 2, &FailureSet::empty()), 0);
    }

    #[test]
    fn empty_failures_reach_a_leaf_in_every_tree() {
        let g = graph_core::generate::erdos_renyi(20, 0.2, 3);
        let params = derive_params(20, 3, 1, 2, 0.2).unwrap();
        let hier = sample_hierarchy(20, 2, 3);
        let forest = build_forest(&g, &params, &hier, 3, &BuildOptions::default()).unwrap();
        let leaves = forest.surviving_leaves(&FailureSet::empty());
        assert_eq!(leaves.len(), params.trees);
    }

    #[test]
    fn budget_guard() {
        let g = graph_core::generate::erdos_renyi(50, 0.2, 3);
        let params = derive_params(50, 8, 2, 2, 1.0).unwrap();
        let hier = sample_hierarchy(50, 2, 3);
        let options = BuildOptions { budget: Some(1000), instrument: false };
        assert!(matches!(
            build_forest(&g, &params, &hier, 3, &options),
            Err(ForestError::BudgetExceeded { .. })
        ));
    }
}
