use graph_core::{EdgeId, EdgeSet, FailureSet, Graph, VertexId};
use rpc_forest::SamplingForest;
use serde::{Deserialize, Serialize};
use tz_oracle::{build_oracle_and_spanner, LevelHierarchy};

/// Counts of sampling-tree nodes at one depth satisfying each
/// well-behavedness property for a fixed query.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthStats {
    pub depth: usize,
    pub nodes: u64,
    /// Every failure kept by the parent was removed here.
    pub f_missing: u64,
    /// Few witness edges removed here (always true at the root).
    pub p_small: u64,
    /// The witness lies in this node's kept edges.
    pub p_spanner: u64,
    pub well_behaved: u64,
    /// Internal nodes with `f_missing`, and how many of them have a child
    /// with `f_missing`.
    pub open_parents: u64,
    pub parents_with_child: u64,
}

impl DepthStats {
    pub fn rate(&self, count: u64) -> f64 {
        if self.nodes == 0 {
            0.0
        } else {
            count as f64 / self.nodes as f64
        }
    }
}

/// The approximate replacement path: the witness of the Thorup-Zwick
/// oracle built on `G - F` with the forest's hierarchy, as edge ids.
pub fn witness_path(
    g: &Graph,
    hierarchy: &LevelHierarchy,
    f: &FailureSet,
    s: VertexId,
    t: VertexId,
) -> Option<Vec<EdgeId>> {
    let mut alive = EdgeSet::full(g.m());
    for &e in f.edges() {
        alive.remove(e);
    }
    let (oracle, spanner) = build_oracle_and_spanner(g, &alive, hierarchy);
    let (_, path) = oracle.witness(g, &spanner, s, t).ok()?;
    g.path_edges(&path)
}

/// Per-depth property frequencies over every node of an instrumented
/// forest.
pub fn audit_well_behaved(forest: &SamplingForest, g: &Graph, f: &FailureSet, witness: &[EdgeId]) -> Vec<DepthStats> {
    let params = forest.params();
    let h = params.height;
    let mut stats: Vec<DepthStats> = (0..=h)
        .map(|depth| DepthStats {
            depth,
            ..DepthStats::default()
        })
        .collect();
    let everything = EdgeSet::full(g.m());
    for tree in &forest.trees {
        let missing: Vec<bool> = tree
            .nodes
            .iter()
            .map(|node| {
                let parent_kept = match node.parent {
                    u32::MAX => &everything,
                    p => tree.nodes[p as usize].kept.as_ref().expect("internal node without dictionary"),
                };
                let sampled = node.sampled.as_ref().expect("audit needs an instrumented forest");
                f.edges().iter().all(|&e| !parent_kept.contains(e) || sampled.contains(e))
            })
            .collect();
        for (idx, node) in tree.nodes.iter().enumerate() {
            let r = node.depth as usize;
            let sampled = node.sampled.as_ref().expect("audit needs an instrumented forest");
            let kept = node.kept.as_ref().expect("audit needs an instrumented forest");
            let removed = witness.iter().filter(|&&e| sampled.contains(e)).count();
            let bound = (params.branching as f64).powf((h - r) as f64 / params.sensitivity as f64);
            let p1 = missing[idx];
            let p2 = r == 0 || (removed as f64) < bound;
            let p3 = witness.iter().all(|&e| kept.contains(e));
            let s = &mut stats[r];
            s.nodes += 1;
            s.f_missing += p1 as u64;
            s.p_small += p2 as u64;
            s.p_spanner += p3 as u64;
            s.well_behaved += (p1 && p2 && p3) as u64;
            if p1 && !node.is_leaf() {
                s.open_parents += 1;
                s.parents_with_child += node.children().any(|c| missing[c]) as u64;
            }
        }
    }
    stats
}
