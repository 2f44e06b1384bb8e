use graph_core::{Dist, FailureSet, Graph, VertexId, INF};

use crate::replacement_matrix;

/// Vertices near a path relative to their distance from its ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trapezoid {
    pub members: Vec<VertexId>,
}

impl Trapezoid {
    pub fn contains(&self, v: VertexId) -> bool {
        self.members.binary_search(&v).is_ok()
    }
}

/// `9 d <= eps * m`, with a little slack for the float product.
pub(crate) fn within(d: Dist, m: Dist, eps: f64) -> bool {
    d != INF && 9.0 * d as f64 <= eps * m as f64 + 1e-9
}

/// Prefix lengths `|P[u..v_i]|` of a vertex path.
pub(crate) fn prefix_lengths(g: &Graph, path: &[VertexId]) -> Vec<Dist> {
    let mut out = Vec::with_capacity(path.len());
    let mut acc = 0;
    out.push(0);
    for w in path.windows(2) {
        let e = g.edge_between(w[0], w[1]).expect("path uses graph edges");
        acc += g.edge(e).weight as Dist;
        out.push(acc);
    }
    out
}

/// All `z` other than the path ends with some `y` on the path such that
/// `d_{G-F}(y, z) <= (eps/9) * min(|P[u..y]|, |P[y..v]|)`.
pub fn trapezoid(g: &Graph, f: &FailureSet, path: &[VertexId], eps: f64) -> Trapezoid {
    let n = g.n();
    let dist = replacement_matrix(g, f);
    let pre = prefix_lengths(g, path);
    let total = *pre.last().unwrap_or(&0);
    let (u, v) = (path[0], *path.last().unwrap());
    let members = (0..n as VertexId)
        .filter(|&z| z != u && z != v)
        .filter(|&z| {
            path.iter()
                .zip(&pre)
                .any(|(&y, &a)| within(dist[y as usize * n + z as usize], a.min(total - a), eps))
        })
        .collect();
    Trapezoid { members }
}

/// Whether the path survives in `G - F` and its trapezoid contains no
/// endpoint of a failed edge.
pub fn far_away(g: &Graph, f: &FailureSet, path: &[VertexId], eps: f64) -> bool {
    let survives = path.windows(2).all(|w| match g.edge_between(w[0], w[1]) {
        Some(e) => !f.contains(e),
        None => false,
    });
    if !survives {
        return false;
    }
    let tr = trapezoid(g, f, path, eps);
    f.endpoints().iter().all(|&z| !tr.contains(z))
}
