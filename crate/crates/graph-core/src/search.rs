use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use crate::{Dist, EdgeId, EdgeSet, Graph, VertexId, INF, NO_EDGE, NO_VERTEX};

/// Reusable scratch space for (multi-source, pruned) canonical searches.
///
/// Arrays are stamped with an epoch so consecutive runs on the same graph
/// do not pay for clearing. Each vertex is labelled with the pair
/// `(distance, origin)`; equal labels from the same origin are resolved by
/// the edge-id rule described at the crate root.
#[derive(Clone, Debug, Default)]
pub struct Searcher {
    dist: Vec<Dist>,
    parent: Vec<VertexId>,
    parent_edge: Vec<EdgeId>,
    hops: Vec<u32>,
    origin: Vec<VertexId>,
    stamp: Vec<u32>,
    settled: Vec<u32>,
    epoch: u32,
    order: Vec<VertexId>,
    heap: BinaryHeap<Reverse<(Dist, VertexId, VertexId)>>,
    queue: VecDeque<VertexId>,
}

impl Searcher {
    pub fn new(n: usize) -> Self {
        let mut s = Searcher::default();
        s.resize(n);
        s
    }

    fn resize(&mut self, n: usize) {
        if self.dist.len() < n {
            self.dist.resize(n, INF);
            self.parent.resize(n, NO_VERTEX);
            self.parent_edge.resize(n, NO_EDGE);
            self.hops.resize(n, 0);
            self.origin.resize(n, NO_VERTEX);
            self.stamp.resize(n, 0);
            self.settled.resize(n, 0);
        }
    }

    fn next_epoch(&mut self) {
        if self.epoch == u32::MAX {
            self.stamp.iter_mut().for_each(|x| *x = 0);
            self.settled.iter_mut().for_each(|x| *x = 0);
            self.epoch = 0;
        }
        self.epoch += 1;
    }

    #[inline]
    pub fn reached(&self, v: VertexId) -> bool {
        self.stamp[v as usize] == self.epoch
    }

    #[inline]
    pub fn dist(&self, v: VertexId) -> Dist {
        if self.reached(v) {
            self.dist[v as usize]
        } else {
            INF
        }
    }

    #[inline]
    pub fn parent(&self, v: VertexId) -> VertexId {
        if self.reached(v) {
            self.parent[v as usize]
        } else {
            NO_VERTEX
        }
    }

    #[inline]
    pub fn parent_edge(&self, v: VertexId) -> EdgeId {
        if self.reached(v) {
            self.parent_edge[v as usize]
        } else {
            NO_EDGE
        }
    }

    #[inline]
    pub fn hops(&self, v: VertexId) -> u32 {
        self.hops[v as usize]
    }

    #[inline]
    pub fn origin(&self, v: VertexId) -> VertexId {
        if self.reached(v) {
            self.origin[v as usize]
        } else {
            NO_VERTEX
        }
    }

    /// Vertices in the order they were settled (non-decreasing distance).
    pub fn order(&self) -> &[VertexId] {
        &self.order
    }

    /// Runs a search from `sources` over edges accepted by `alive`.
    ///
    /// A vertex is only entered when `keep(v, d)` holds for its tentative
    /// distance; sources are always kept. Pruning is exact whenever the kept
    /// region is closed under taking prefixes of canonical paths.
    pub fn run<A, K>(&mut self, g: &Graph, sources: &[VertexId], alive: A, mut keep: K)
    where
        A: Fn(EdgeId) -> bool,
        K: FnMut(VertexId, Dist) -> bool,
    {
        self.resize(g.n());
        self.next_epoch();
        self.order.clear();
        self.heap.clear();
        self.queue.clear();
        let epoch = self.epoch;
        for &s in sources {
            let i = s as usize;
            if self.stamp[i] == epoch {
                continue;
            }
            self.stamp[i] = epoch;
            self.dist[i] = 0;
            self.parent[i] = NO_VERTEX;
            self.parent_edge[i] = NO_EDGE;
            self.hops[i] = 0;
            self.origin[i] = s;
        }
        let mut roots: Vec<VertexId> = sources.to_vec();
        roots.sort_unstable();
        roots.dedup();
        if g.is_unit_weight() {
            self.queue.extend(roots.iter().copied());
            while let Some(x) = self.queue.pop_front() {
                self.settled[x as usize] = epoch;
                self.order.push(x);
                self.relax_from(g, x, &alive, &mut keep, true);
            }
        } else {
            for &s in &roots {
                self.heap.push(Reverse((0, s, s)));
            }
            while let Some(Reverse((d, o, x))) = self.heap.pop() {
                let i = x as usize;
                if self.settled[i] == epoch || self.dist[i] != d || self.origin[i] != o {
                    continue;
                }
                self.settled[i] = epoch;
                self.order.push(x);
                self.relax_from(g, x, &alive, &mut keep, false);
            }
        }
    }

    #[inline]
    fn relax_from<A, K>(&mut self, g: &Graph, x: VertexId, alive: &A, keep: &mut K, bfs: bool)
    where
        A: Fn(EdgeId) -> bool,
        K: FnMut(VertexId, Dist) -> bool,
    {
        let epoch = self.epoch;
        let xi = x as usize;
        let d = self.dist[xi];
        let o = self.origin[xi];
        for adj in g.neighbors(x) {
            if !alive(adj.edge) {
                continue;
            }
            let y = adj.to;
            let yi = y as usize;
            if self.settled[yi] == epoch {
                continue;
            }
            let nd = d + adj.weight as Dist;
            let better = if self.stamp[yi] != epoch {
                true
            } else {
                let cur = (self.dist[yi], self.origin[yi]);
                if (nd, o) < cur {
                    true
                } else if (nd, o) == cur {
                    self.prefer(x, adj.edge, y)
                } else {
                    false
                }
            };
            if !better {
                continue;
            }
            let fresh = self.stamp[yi] != epoch;
            if fresh && !keep(y, nd) {
                continue;
            }
            if !fresh && nd < self.dist[yi] && !keep(y, nd) {
                continue;
            }
            let push = fresh || nd != self.dist[yi] || o != self.origin[yi];
            self.stamp[yi] = epoch;
            self.dist[yi] = nd;
            self.origin[yi] = o;
            self.parent[yi] = x;
            self.parent_edge[yi] = adj.edge;
            self.hops[yi] = self.hops[xi] + 1;
            if push {
                if bfs {
                    if fresh {
                        self.queue.push_back(y);
                    }
                } else {
                    self.heap.push(Reverse((nd, o, y)));
                }
            }
        }
    }

    /// Whether reaching `v` through `u` via `e` beats the current parent of
    /// `v`, given equal length and origin. Compares the smallest edge id on
    /// either branch below their meeting point.
    fn prefer(&self, u: VertexId, e: EdgeId, v: VertexId) -> bool {
        let vi = v as usize;
        let mut a = u;
        let mut b = self.parent[vi];
        if a == b {
            return false;
        }
        let mut min_a = e;
        let mut min_b = self.parent_edge[vi];
        while a != b {
            if self.hops[a as usize] >= self.hops[b as usize] {
                min_a = min_a.min(self.parent_edge[a as usize]);
                a = self.parent[a as usize];
            } else {
                min_b = min_b.min(self.parent_edge[b as usize]);
                b = self.parent[b as usize];
            }
        }
        min_a < min_b
    }

    /// Vertex sequence from the origin of `v` to `v`, or empty if unreached.
    pub fn path_to(&self, v: VertexId) -> Vec<VertexId> {
        if !self.reached(v) {
            return Vec::new();
        }
        let mut path = vec![v];
        let mut x = v;
        while self.parent[x as usize] != NO_VERTEX {
            x = self.parent[x as usize];
            path.push(x);
        }
        path.reverse();
        path
    }

    pub fn snapshot(&self, source: VertexId, n: usize) -> ShortestPathTree {
        let mut tree = ShortestPathTree {
            source,
            dist: vec![INF; n],
            parent: vec![NO_VERTEX; n],
            parent_edge: vec![NO_EDGE; n],
            hops: vec![0; n],
            order: self.order.clone(),
        };
        for &v in &self.order {
            let i = v as usize;
            tree.dist[i] = self.dist[i];
            tree.parent[i] = self.parent[i];
            tree.parent_edge[i] = self.parent_edge[i];
            tree.hops[i] = self.hops[i];
        }
        tree
    }
}

/// Canonical single-source shortest-path tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortestPathTree {
    pub source: VertexId,
    pub dist: Vec<Dist>,
    pub parent: Vec<VertexId>,
    pub parent_edge: Vec<EdgeId>,
    pub hops: Vec<u32>,
    /// Reached vertices in settle order.
    pub order: Vec<VertexId>,
}

impl ShortestPathTree {
    pub fn reached(&self, v: VertexId) -> bool {
        self.dist[v as usize] != INF
    }

    pub fn path_to(&self, v: VertexId) -> Vec<VertexId> {
        if !self.reached(v) {
            return Vec::new();
        }
        let mut path = vec![v];
        let mut x = v;
        while self.parent[x as usize] != NO_VERTEX {
            x = self.parent[x as usize];
            path.push(x);
        }
        path.reverse();
        path
    }

    pub fn edges_to(&self, v: VertexId) -> Vec<EdgeId> {
        if !self.reached(v) {
            return Vec::new();
        }
        let mut edges = Vec::with_capacity(self.hops[v as usize] as usize);
        let mut x = v;
        while self.parent[x as usize] != NO_VERTEX {
            edges.push(self.parent_edge[x as usize]);
            x = self.parent[x as usize];
        }
        edges.reverse();
        edges
    }
}

pub fn shortest_path_tree(g: &Graph, source: VertexId, blocked: Option<&EdgeSet>) -> ShortestPathTree {
    match blocked {
        Some(b) => shortest_path_tree_in(g, source, |e| !b.contains(e)),
        None => shortest_path_tree_in(g, source, |_| true),
    }
}

pub fn shortest_path_tree_in<A: Fn(EdgeId) -> bool>(g: &Graph, source: VertexId, alive: A) -> ShortestPathTree {
    let mut s = Searcher::new(g.n());
    s.run(g, &[source], alive, |_, _| true);
    s.snapshot(source, g.n())
}

/// Hop-bounded distances d^{<=L} from one source, kept per hop layer so
/// that paths can be reconstructed.
#[derive(Clone, Debug)]
pub struct HopBoundedPaths {
    pub source: VertexId,
    pub cap: usize,
    n: usize,
    /// `layers[j*n + v]` is the best length using at most `j` edges.
    layers: Vec<Dist>,
    /// Last edge of the best path using exactly the improving layer.
    via: Vec<(VertexId, EdgeId)>,
}

impl HopBoundedPaths {
    pub fn dist(&self, v: VertexId) -> Dist {
        self.layers[self.cap * self.n + v as usize]
    }

    pub fn dist_within(&self, v: VertexId, hops: usize) -> Dist {
        self.layers[hops.min(self.cap) * self.n + v as usize]
    }

    pub fn dists(&self) -> &[Dist] {
        &self.layers[self.cap * self.n..]
    }

    /// A path of length `dist(v)` with at most `cap` edges.
    pub fn path_to(&self, v: VertexId) -> Vec<VertexId> {
        if self.dist(v) == INF {
            return Vec::new();
        }
        let mut path = vec![v];
        let mut x = v;
        let mut j = self.cap;
        while x != self.source {
            let here = self.layers[j * self.n + x as usize];
            while j > 0 && self.layers[(j - 1) * self.n + x as usize] == here {
                j -= 1;
            }
            let (p, _) = self.via[j * self.n + x as usize];
            x = p;
            j -= 1;
            path.push(x);
        }
        path.reverse();
        path
    }
}

pub fn hop_bounded<A: Fn(EdgeId) -> bool>(g: &Graph, source: VertexId, cap: usize, alive: A) -> HopBoundedPaths {
    let n = g.n();
    let mut layers = vec![INF; (cap + 1) * n];
    let mut via = vec![(NO_VERTEX, NO_EDGE); (cap + 1) * n];
    layers[source as usize] = 0;
    for j in 1..=cap {
        let (prev, cur) = layers.split_at_mut(j * n);
        let prev = &prev[(j - 1) * n..];
        let cur = &mut cur[..n];
        cur.copy_from_slice(prev);
        for u in 0..n {
            let du = prev[u];
            if du == INF {
                continue;
            }
            for adj in g.neighbors(u as VertexId) {
                if !alive(adj.edge) {
                    continue;
                }
                let nd = du + adj.weight as Dist;
                let t = adj.to as usize;
                let slot = &mut via[j * n + t];
                if nd < cur[t] || (nd == cur[t] && nd < prev[t] && adj.edge < slot.1) {
                    cur[t] = nd;
                    *slot = (u as VertexId, adj.edge);
                }
            }
        }
    }
    HopBoundedPaths {
        source,
        cap,
        n,
        layers,
        via,
    }
}

/// Distances and parents from `source` in `g - masked`, optionally limited
/// to paths with at most `hop_cap` edges.
pub fn canonical_dijkstra(
    g: &Graph,
    source: VertexId,
    masked: Option<&EdgeSet>,
    hop_cap: Option<usize>,
) -> (Vec<Dist>, Vec<VertexId>) {
    let alive = |e: EdgeId| masked.map_or(true, |m| !m.contains(e));
    match hop_cap {
        Some(cap) if cap + 1 < g.n() => {
            let hb = hop_bounded(g, source, cap, alive);
            let dist = hb.dists().to_vec();
            let parent = (0..g.n() as VertexId)
                .map(|v| {
                    let p = hb.path_to(v);
                    if p.len() >= 2 {
                        p[p.len() - 2]
                    } else {
                        NO_VERTEX
                    }
                })
                .collect();
            (dist, parent)
        }
        _ => {
            let t = shortest_path_tree_in(g, source, alive);
            (t.dist, t.parent)
        }
    }
}
