use expath_engine::{shortest_expath, Label};
use graph_core::{ApspTable, Dist, EdgeId, EdgeSet, FailureSet, Graph, VertexId, INF};
use serde::{Deserialize, Serialize};

use crate::netpoints::{compute_netpoints, segment_violations};
use crate::PivotSets;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PartKind {
    /// Subpath of a canonical shortest path.
    Path,
    /// A single edge that is not (necessarily) a canonical path: an
    /// interleaving edge or a tail edge.
    Edge(EdgeId),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Part {
    pub v: VertexId,
    pub w: VertexId,
    pub v_net: bool,
    pub w_net: bool,
    pub dist: Dist,
    pub hops: u32,
    pub long: bool,
    pub pivot: Option<VertexId>,
    pub kind: PartKind,
    pub segment: u32,
}

impl Part {
    pub fn edges(&self, apsp: &ApspTable) -> Vec<EdgeId> {
        match self.kind {
            PartKind::Path => apsp.path_edges(self.v, self.w),
            PartKind::Edge(e) => vec![e],
        }
    }

    pub fn avoids(&self, apsp: &ApspTable, failures: &FailureSet) -> bool {
        match self.kind {
            PartKind::Path => apsp.path_avoids(self.v, self.w, |e| !failures.contains(e)),
            PartKind::Edge(e) => !failures.contains(e),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FtNode {
    pub depth: u32,
    /// `|P_ν|`, `INF` when the endpoints are disconnected in `G - A_ν`.
    pub length: Dist,
    pub parts: Vec<Part>,
    /// Offsets into `parts`; segment `i` is `parts[seg[i]..seg[i + 1]]`.
    pub segment_starts: Vec<u32>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct NodeBuildStats {
    pub missing_pivots: u32,
    pub segment_violations: u32,
}

/// What a node needs to know about its tree.
#[derive(Clone, Copy, Debug)]
pub struct NodeSpec {
    pub source: VertexId,
    pub target: VertexId,
    pub ell: usize,
    pub lambda: usize,
    pub eps: f64,
    pub hop_cutoff: usize,
}

impl FtNode {
    pub fn exists(&self) -> bool {
        self.length != INF
    }

    pub fn segment_count(&self) -> usize {
        self.segment_starts.len().saturating_sub(1)
    }

    pub fn segment(&self, i: usize) -> &[Part] {
        &self.parts[self.segment_starts[i] as usize..self.segment_starts[i + 1] as usize]
    }

    pub fn segment_edges(&self, apsp: &ApspTable, i: usize) -> Vec<EdgeId> {
        self.segment(i).iter().flat_map(|p| p.edges(apsp)).collect()
    }

    pub fn avoids(&self, apsp: &ApspTable, failures: &FailureSet) -> bool {
        self.exists() && self.parts.iter().all(|p| p.avoids(apsp, failures))
    }

    pub fn words(&self) -> usize {
        4 + self.parts.len() * 8 + self.segment_starts.len()
    }

    /// Builds the node for `G - A` at the given depth.
    pub fn build(
        g: &Graph,
        apsp: &ApspTable,
        pivots: &PivotSets,
        a: &EdgeSet,
        spec: &NodeSpec,
        depth: u32,
    ) -> (FtNode, NodeBuildStats) {
        let mut stats = NodeBuildStats::default();
        let (length, st) = shortest_expath(g, apsp, a, spec.source, spec.target, spec.ell, spec.lambda);
        if length == INF {
            let node = FtNode {
                depth,
                length,
                parts: Vec::new(),
                segment_starts: Vec::new(),
            };
            return (node, stats);
        }
        let (vertices, edges, labels) = st.expand(g, apsp);
        let mut prefix = Vec::with_capacity(vertices.len());
        prefix.push(0);
        for &e in &edges {
            prefix.push(prefix.last().unwrap() + g.edge(e).weight as Dist);
        }
        let net = compute_netpoints(&prefix, spec.eps, spec.lambda);
        stats.segment_violations = segment_violations(&prefix, &net, spec.eps) as u32;

        let mut parts = Vec::new();
        let mut segment_starts = vec![0u32];
        let mut start = 0;
        for i in 0..edges.len() {
            let ends = i + 1 == edges.len()
                || net.contains(i + 1)
                || labels[i] != labels[i + 1]
                || !matches!(labels[i], Label::Path { .. });
            if !ends {
                continue;
            }
            let (v, w) = (vertices[start], vertices[i + 1]);
            let hops = i + 1 - start;
            let kind = match labels[i] {
                Label::Path { .. } => PartKind::Path,
                _ => PartKind::Edge(edges[i]),
            };
            let long = hops > spec.hop_cutoff;
            let pivot = if long {
                vertices[start..=i + 1].iter().copied().find(|&x| pivots.in_b(x))
            } else {
                None
            };
            if long && pivot.is_none() {
                stats.missing_pivots += 1;
            }
            let segment = net.segment_of_edge(start) as u32;
            if segment as usize + 1 > segment_starts.len() {
                segment_starts.push(parts.len() as u32);
            }
            parts.push(Part {
                v,
                w,
                v_net: net.contains(start),
                w_net: net.contains(i + 1),
                dist: prefix[i + 1] - prefix[start],
                hops: hops as u32,
                long,
                pivot,
                kind,
                segment,
            });
            start = i + 1;
        }
        if !parts.is_empty() {
            segment_starts.push(parts.len() as u32);
        } else {
            segment_starts.clear();
        }
        debug_assert_eq!(segment_starts.len().saturating_sub(1), net.segment_count());
        let node = FtNode {
            depth,
            length,
            parts,
            segment_starts,
        };
        (node, stats)
    }
}
