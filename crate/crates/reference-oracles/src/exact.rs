use graph_core::{hop_bounded, shortest_path_tree_in, Dist, FailureSet, Graph, Searcher, VertexId};

/// `d_{G-F}(s, t)`.
pub fn exact_replacement(g: &Graph, s: VertexId, t: VertexId, f: &FailureSet) -> Dist {
    shortest_path_tree_in(g, s, |e| !f.contains(e)).dist[t as usize]
}

/// `d^{<=L}_{G-F}(s, t)`: shortest length over paths with at most `l` edges.
pub fn exact_short(g: &Graph, s: VertexId, t: VertexId, f: &FailureSet, l: usize) -> Dist {
    hop_bounded(g, s, l, |e| !f.contains(e)).dist(t)
}

/// Row-major `d_{G-F}` for all pairs.
pub fn replacement_matrix(g: &Graph, f: &FailureSet) -> Vec<Dist> {
    let n = g.n();
    let mut out = Vec::with_capacity(n * n);
    let mut s = Searcher::new(n);
    for x in 0..n as VertexId {
        s.run(g, &[x], |e| !f.contains(e), |_, _| true);
        out.extend((0..n as VertexId).map(|v| s.dist(v)));
    }
    out
}
