use graph_core::{ApspTable, Dist, EdgeSet, Graph, VertexId, INF};

use crate::trapezoid::prefix_lengths;
use crate::OracleError;

const NONE: usize = usize::MAX / 4;

/// A growing simple path that tracks, for its current end, the fewest layer
/// transitions needed to write it as canonical pieces of `G` joined either
/// directly or by single edges.
pub struct PathWalk<'a> {
    apsp: &'a ApspTable,
    vertices: Vec<VertexId>,
    /// `canon[i][j]`: the subpath from position `j` to `i` is canonical.
    canon: Vec<Vec<bool>>,
    trans: Vec<usize>,
}

impl<'a> PathWalk<'a> {
    pub fn new(apsp: &'a ApspTable, start: VertexId) -> Self {
        PathWalk {
            apsp,
            vertices: vec![start],
            canon: vec![vec![true]],
            trans: vec![0],
        }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn end(&self) -> VertexId {
        *self.vertices.last().unwrap()
    }

    /// Fewest transitions for the whole current path.
    pub fn transitions(&self) -> usize {
        *self.trans.last().unwrap()
    }

    pub fn push(&mut self, v: VertexId) {
        let i = self.vertices.len();
        let prev = self.vertices[i - 1];
        let mut row = Vec::with_capacity(i + 1);
        for j in 0..i {
            let ok = self.canon[i - 1][j] && self.apsp.pred(self.vertices[j], v) == prev;
            row.push(ok);
        }
        row.push(true);
        self.vertices.push(v);
        let mut best = self.trans[i - 1] + 1;
        for j in 0..i {
            if !row[j] {
                continue;
            }
            let c = if j == 0 {
                0
            } else {
                (self.trans[j] + 1).min(self.trans[j - 1] + 1)
            };
            best = best.min(c);
        }
        self.canon.push(row);
        self.trans.push(best);
    }

    pub fn pop(&mut self) {
        assert!(self.vertices.len() > 1);
        self.vertices.pop();
        self.canon.pop();
        self.trans.pop();
    }
}

/// Fewest transitions for a vertex path (its edges must exist).
pub fn min_transitions(apsp: &ApspTable, path: &[VertexId]) -> usize {
    let mut w = PathWalk::new(apsp, path[0]);
    for &v in &path[1..] {
        w.push(v);
    }
    w.transitions()
}

fn block_caps(g: &Graph) -> Vec<Dist> {
    let d = (g.n().max(1) as u64) * (g.max_weight().max(1) as u64);
    let mut log = 0;
    while (1u64 << log) < d {
        log += 1;
    }
    let phases = 2 * log;
    (0..=phases).map(|j| 1u64 << j.min(phases - j)).collect()
}

/// Whether a simple path in `G - A` splits into a walk of at most `λ` edges,
/// the expath blocks (each decomposable within `ℓ` transitions and within
/// its cap), and another walk of at most `λ` edges.
pub fn expath_certificate(g: &Graph, apsp: &ApspTable, path: &[VertexId], ell: usize, lambda: usize) -> bool {
    let k = path.len() - 1;
    let pre = prefix_lengths(g, path);
    // trans[p][q]: fewest transitions for the subpath p..q.
    let mut trans = vec![vec![NONE; k + 1]; k + 1];
    for p in 0..=k {
        let mut w = PathWalk::new(apsp, path[p]);
        trans[p][p] = 0;
        for q in p + 1..=k {
            w.push(path[q]);
            trans[p][q] = w.transitions();
        }
    }
    let mut reach: Vec<bool> = (0..=k).map(|q| q <= lambda).collect();
    for cap in block_caps(g) {
        let mut next = reach.clone();
        for q in 0..=k {
            if next[q] {
                continue;
            }
            next[q] = (0..q).any(|p| reach[p] && trans[p][q] <= ell && pre[q] - pre[p] <= cap);
        }
        reach = next;
    }
    (0..=k).any(|q| reach[q] && k - q <= lambda)
}

fn enumerate<V>(
    g: &Graph,
    apsp: &ApspTable,
    a: &EdgeSet,
    s: VertexId,
    budget: u64,
    prune: &dyn Fn(&PathWalk) -> bool,
    mut visit: V,
) -> Result<(), OracleError>
where
    V: FnMut(&PathWalk, Dist),
{
    let n = g.n();
    let mut on = vec![false; n];
    let mut walk = PathWalk::new(apsp, s);
    let mut lens = vec![0 as Dist];
    let mut stack: Vec<usize> = vec![0];
    on[s as usize] = true;
    let mut nodes = 0u64;
    visit(&walk, 0);
    while let Some(top) = stack.last_mut() {
        let u = walk.end();
        let adj = g.neighbors(u);
        if *top == adj.len() {
            stack.pop();
            on[u as usize] = false;
            if !stack.is_empty() {
                walk.pop();
                lens.pop();
            }
            continue;
        }
        let next = adj[*top];
        *top += 1;
        if on[next.to as usize] || a.contains(next.edge) {
            continue;
        }
        nodes += 1;
        if nodes > budget {
            return Err(OracleError::BudgetExceeded(budget));
        }
        walk.push(next.to);
        if prune(&walk) {
            walk.pop();
            continue;
        }
        let len = lens.last().unwrap() + next.weight as Dist;
        lens.push(len);
        on[next.to as usize] = true;
        visit(&walk, len);
        stack.push(0);
    }
    Ok(())
}

/// Shortest ℓ-decomposable simple-path lengths from `s` in `G - A`, by
/// exhaustive search.
pub fn brute_decomposable(
    g: &Graph,
    apsp: &ApspTable,
    a: &EdgeSet,
    s: VertexId,
    ell: usize,
    budget: u64,
) -> Result<Vec<Dist>, OracleError> {
    let mut best = vec![INF; g.n()];
    enumerate(g, apsp, a, s, budget, &|w| w.transitions() > ell, |w, len| {
        let v = w.end() as usize;
        best[v] = best[v].min(len);
    })?;
    Ok(best)
}

/// Shortest simple-path lengths from `s` in `G - A` that admit an expath
/// certificate, by exhaustive search.
pub fn brute_expath(
    g: &Graph,
    apsp: &ApspTable,
    a: &EdgeSet,
    s: VertexId,
    ell: usize,
    lambda: usize,
    budget: u64,
) -> Result<Vec<Dist>, OracleError> {
    let mut best = vec![INF; g.n()];
    enumerate(g, apsp, a, s, budget, &|_| false, |w, len| {
        let v = w.end() as usize;
        if len < best[v] && expath_certificate(g, apsp, w.vertices(), ell, lambda) {
            best[v] = len;
        }
    })?;
    Ok(best)
}

/// Positions `y` of a path from `s` to `t` breaking
/// `|P[s..y]| <= 4 d(s, y) + λ` or `|P[y..t]| <= 4 d(y, t) + λ`, where `d`
/// is the decomposable distance. For `λ > 0` only positions farther than
/// `λ` from both ends are checked.
pub fn prefix_bound_violations<D>(g: &Graph, path: &[VertexId], lambda: Dist, dec: D) -> usize
where
    D: Fn(VertexId, VertexId) -> Dist,
{
    if path.is_empty() {
        return 0;
    }
    let pre = prefix_lengths(g, path);
    let total = *pre.last().unwrap();
    let (s, t) = (path[0], *path.last().unwrap());
    path.iter()
        .zip(&pre)
        .filter(|&(&y, &a)| {
            let b = total - a;
            if lambda > 0 && (a <= lambda || b <= lambda) {
                return false;
            }
            let (ds, dt) = (dec(s, y), dec(y, t));
            (ds != INF && a > 4 * ds + lambda) || (dt != INF && b > 4 * dt + lambda)
        })
        .count()
}
