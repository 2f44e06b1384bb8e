use graph_core::{dist_add, ApspTable, Dist, EdgeId, EdgeSet, Graph, VertexId, INF, NO_EDGE, NO_VERTEX};

use crate::Piece;

/// `d_G(x, y)` when the canonical x-y path avoids `A`, else `INF`.
#[derive(Clone, Debug)]
pub struct Survival {
    n: usize,
    dist: Vec<Dist>,
}

impl Survival {
    pub fn new(apsp: &ApspTable, a: &EdgeSet) -> Self {
        let n = apsp.n();
        let mut dist = vec![INF; n * n];
        let mut broken = vec![false; n];
        for x in 0..n as VertexId {
            let row = &mut dist[x as usize * n..(x as usize + 1) * n];
            for &v in apsp.order_from(x) {
                if v == x {
                    broken[v as usize] = false;
                } else {
                    let p = apsp.pred(x, v);
                    broken[v as usize] = broken[p as usize] || a.contains(apsp.pred_edge(x, v));
                }
                if !broken[v as usize] {
                    row[v as usize] = apsp.dist(x, v);
                }
            }
        }
        Survival { n, dist }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, x: VertexId, y: VertexId) -> Dist {
        self.dist[x as usize * self.n + y as usize]
    }

    pub fn row(&self, x: VertexId) -> &[Dist] {
        &self.dist[x as usize * self.n..(x as usize + 1) * self.n]
    }
}

struct Trace<'a> {
    pick: &'a mut [VertexId],
    enter: &'a mut [(VertexId, EdgeId)],
}

/// Level `j` holds the shortest j-decomposable distances from `s`.
fn run(g: &Graph, surv: &Survival, a: &EdgeSet, s: VertexId, ell: usize, mut trace: Option<Trace>) -> Vec<Dist> {
    let n = g.n();
    let mut levels = vec![INF; (ell + 1) * n];
    levels[..n].copy_from_slice(surv.row(s));
    let mut enter = vec![INF; n];
    for j in 1..=ell {
        let (done, rest) = levels.split_at_mut(j * n);
        let prev = &done[(j - 1) * n..];
        let cur = &mut rest[..n];
        enter.copy_from_slice(prev);
        for u in 0..n {
            let du = prev[u];
            if du == INF {
                continue;
            }
            for adj in g.neighbors(u as VertexId) {
                if a.contains(adj.edge) {
                    continue;
                }
                let nd = du + adj.weight as Dist;
                let x = adj.to as usize;
                if nd < enter[x] {
                    enter[x] = nd;
                    if let Some(t) = trace.as_mut() {
                        t.enter[j * n + x] = (u as VertexId, adj.edge);
                    }
                }
            }
        }
        cur.copy_from_slice(prev);
        for x in 0..n {
            let ex = enter[x];
            if ex == INF {
                continue;
            }
            match trace.as_mut() {
                Some(t) => {
                    for (y, &d) in surv.row(x as VertexId).iter().enumerate() {
                        let nd = dist_add(ex, d);
                        if nd < cur[y] {
                            cur[y] = nd;
                            t.pick[j * n + y] = x as VertexId;
                        }
                    }
                }
                // INF is u64::MAX, so saturation keeps unreachable entries infinite.
                None => {
                    for (c, &d) in cur.iter_mut().zip(surv.row(x as VertexId)) {
                        *c = (*c).min(ex.saturating_add(d));
                    }
                }
            }
        }
    }
    levels
}

/// Shortest ℓ-decomposable distances from `s` in `G - A` for every target.
pub fn decomposable_sssp(g: &Graph, apsp: &ApspTable, a: &EdgeSet, s: VertexId, ell: usize) -> Vec<Dist> {
    let surv = Survival::new(apsp, a);
    let n = g.n();
    run(g, &surv, a, s, ell, None)[ell * n..].to_vec()
}

/// Row-major matrix of shortest ℓ-decomposable distances in `G - A`.
pub fn decomposable_matrix(g: &Graph, surv: &Survival, a: &EdgeSet, ell: usize) -> Vec<Dist> {
    let n = g.n();
    if a.is_empty() {
        return surv.dist.clone();
    }
    let mut out = Vec::with_capacity(n * n);
    for s in 0..n as VertexId {
        out.extend_from_slice(&run(g, surv, a, s, ell, None)[ell * n..]);
    }
    out
}

/// Single-source table with enough choices recorded to rebuild paths.
#[derive(Clone, Debug)]
pub struct DecompTable {
    source: VertexId,
    ell: usize,
    n: usize,
    levels: Vec<Dist>,
    pick: Vec<VertexId>,
    enter: Vec<(VertexId, EdgeId)>,
}

impl DecompTable {
    pub fn build(g: &Graph, surv: &Survival, a: &EdgeSet, s: VertexId, ell: usize) -> Self {
        let n = g.n();
        let mut pick = vec![NO_VERTEX; (ell + 1) * n];
        let mut enter = vec![(NO_VERTEX, NO_EDGE); (ell + 1) * n];
        let levels = run(
            g,
            surv,
            a,
            s,
            ell,
            Some(Trace {
                pick: &mut pick,
                enter: &mut enter,
            }),
        );
        DecompTable {
            source: s,
            ell,
            n,
            levels,
            pick,
            enter,
        }
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn dist(&self, y: VertexId) -> Dist {
        self.levels[self.ell * self.n + y as usize]
    }

    pub fn dist_at(&self, level: usize, y: VertexId) -> Dist {
        self.levels[level * self.n + y as usize]
    }

    /// Pieces of a shortest decomposable path to `y`; trivial pieces are
    /// omitted. `None` when `y` is unreachable.
    pub fn pieces(&self, y: VertexId) -> Option<Vec<Piece>> {
        if self.dist(y) == INF {
            return None;
        }
        let n = self.n;
        let mut out = Vec::new();
        let mut v = y;
        let mut j = self.ell;
        while j > 0 {
            let x = self.pick[j * n + v as usize];
            if x != NO_VERTEX {
                if x != v {
                    out.push(Piece::Path { from: x, to: v });
                }
                let (u, e) = self.enter[j * n + x as usize];
                if u == NO_VERTEX {
                    v = x;
                } else {
                    out.push(Piece::Edge { edge: e, from: u, to: x });
                    v = u;
                }
            }
            j -= 1;
        }
        if v != self.source {
            out.push(Piece::Path { from: self.source, to: v });
        }
        out.reverse();
        Some(out)
    }
}
