use crate::{Dist, EdgeId, Graph, Searcher, VertexId, INF, NO_EDGE, NO_VERTEX};

/// All-pairs canonical distances with predecessor matrix.
///
/// Row `x` is the canonical shortest-path tree rooted at `x`:
/// `pred(x, y)` is the vertex before `y` on the canonical x-y path.
#[derive(Clone, Debug)]
pub struct ApspTable {
    n: usize,
    dist: Vec<Dist>,
    pred: Vec<VertexId>,
    pred_edge: Vec<EdgeId>,
    order: Vec<VertexId>,
    order_len: Vec<u32>,
}

pub fn apsp(g: &Graph) -> ApspTable {
    let n = g.n();
    let mut table = ApspTable {
        n,
        dist: vec![INF; n * n],
        pred: vec![NO_VERTEX; n * n],
        pred_edge: vec![NO_EDGE; n * n],
        order: vec![NO_VERTEX; n * n],
        order_len: vec![0; n],
    };
    let mut s = Searcher::new(n);
    for x in 0..n {
        s.run(g, &[x as VertexId], |_| true, |_, _| true);
        let row = x * n;
        for (k, &v) in s.order().iter().enumerate() {
            let i = row + v as usize;
            table.dist[i] = s.dist(v);
            table.pred[i] = s.parent(v);
            table.pred_edge[i] = s.parent_edge(v);
            table.order[row + k] = v;
        }
        table.order_len[x] = s.order().len() as u32;
    }
    table
}

impl ApspTable {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dist(&self, x: VertexId, y: VertexId) -> Dist {
        self.dist[x as usize * self.n + y as usize]
    }

    #[inline]
    pub fn pred(&self, x: VertexId, y: VertexId) -> VertexId {
        self.pred[x as usize * self.n + y as usize]
    }

    /// Last edge of the canonical x-y path.
    #[inline]
    pub fn pred_edge(&self, x: VertexId, y: VertexId) -> EdgeId {
        self.pred_edge[x as usize * self.n + y as usize]
    }

    pub fn row(&self, x: VertexId) -> &[Dist] {
        &self.dist[x as usize * self.n..(x as usize + 1) * self.n]
    }

    /// Vertices reachable from `x` in non-decreasing distance order; every
    /// predecessor appears before its successors.
    pub fn order_from(&self, x: VertexId) -> &[VertexId] {
        let row = x as usize * self.n;
        &self.order[row..row + self.order_len[x as usize] as usize]
    }

    /// Canonical x-y path as a vertex sequence, empty if unreachable.
    pub fn path(&self, x: VertexId, y: VertexId) -> Vec<VertexId> {
        if self.dist(x, y) == INF {
            return Vec::new();
        }
        let mut path = vec![y];
        let mut v = y;
        while v != x {
            v = self.pred(x, v);
            path.push(v);
        }
        path.reverse();
        path
    }

    /// Edge ids of the canonical x-y path in order from x.
    pub fn path_edges(&self, x: VertexId, y: VertexId) -> Vec<EdgeId> {
        if self.dist(x, y) == INF {
            return Vec::new();
        }
        let mut edges = Vec::new();
        let mut v = y;
        while v != x {
            edges.push(self.pred_edge(x, v));
            v = self.pred(x, v);
        }
        edges.reverse();
        edges
    }

    /// Number of edges on the canonical x-y path.
    pub fn hops(&self, x: VertexId, y: VertexId) -> usize {
        if self.dist(x, y) == INF {
            return 0;
        }
        let mut count = 0;
        let mut v = y;
        while v != x {
            v = self.pred(x, v);
            count += 1;
        }
        count
    }

    /// Whether the canonical x-y path avoids every edge rejected by `alive`.
    pub fn path_avoids<A: Fn(EdgeId) -> bool>(&self, x: VertexId, y: VertexId, alive: A) -> bool {
        if self.dist(x, y) == INF {
            return false;
        }
        let mut v = y;
        while v != x {
            if !alive(self.pred_edge(x, v)) {
                return false;
            }
            v = self.pred(x, v);
        }
        true
    }
}
