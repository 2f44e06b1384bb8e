use graph_core::{shortest_path_tree_in, Dist, EdgeId, EdgeSet, Graph, Searcher, VertexId, INF, NO_EDGE, NO_VERTEX};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::LevelHierarchy;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TzError {
    #[error("vertices {s} and {t} are disconnected in the oracle's subgraph")]
    Disconnected { s: VertexId, t: VertexId },
}

/// Oracle for one spanning subgraph `H`. Bunches of all levels are merged
/// into one sorted `(vertex, distance)` run per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TzOracle {
    k: usize,
    n: usize,
    /// `pivots[v * k + i] = p_i(v)`, or `NO_VERTEX` if `X_i` is unreachable.
    pivots: Vec<VertexId>,
    offsets: Vec<u32>,
    bunch_vertex: Vec<VertexId>,
    bunch_dist: Vec<u32>,
}

/// The interconnecting vertex chosen by a query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Interconnect {
    pub vertex: VertexId,
    pub level: usize,
    /// Whether `vertex = p_level(s)` (otherwise it is `p_level(t)`).
    pub from_s: bool,
    pub dist: Dist,
}

/// Builds the oracle and spanner of the subgraph of `g` made of `edges`.
pub fn build_oracle_and_spanner(g: &Graph, edges: &EdgeSet, hier: &LevelHierarchy) -> (TzOracle, EdgeSet) {
    let (oracle, spanner) = build(g, |e| edges.contains(e), hier, true);
    (oracle.unwrap(), spanner)
}

/// Only the spanner; skips bunch materialisation.
pub fn build_spanner(g: &Graph, edges: &EdgeSet, hier: &LevelHierarchy) -> EdgeSet {
    build(g, |e| edges.contains(e), hier, false).1
}

fn build<A: Fn(EdgeId) -> bool + Copy>(
    g: &Graph,
    alive: A,
    hier: &LevelHierarchy,
    want_oracle: bool,
) -> (Option<TzOracle>, EdgeSet) {
    let n = g.n();
    let k = hier.k();
    assert_eq!(hier.n(), n, "hierarchy built for a different vertex set");
    let mut spanner = EdgeSet::new(g.m());
    let mut search = Searcher::new(n);

    // dist_to[i][v] = d_H(v, X_i); index k is the empty level
    let mut dist_to: Vec<Vec<Dist>> = Vec::with_capacity(k + 1);
    let mut pivots = vec![NO_VERTEX; n * k];
    dist_to.push(vec![0; n]);
    for v in 0..n {
        if k > 0 {
            pivots[v * k] = v as VertexId;
        }
    }
    for i in 1..k {
        let sources = hier.members(i);
        search.run(g, &sources, alive, |_, _| true);
        let mut d = vec![INF; n];
        for &v in search.order() {
            d[v as usize] = search.dist(v);
            pivots[v as usize * k + i] = search.origin(v);
            let e = search.parent_edge(v);
            if e != NO_EDGE {
                spanner.insert(e);
            }
        }
        dist_to.push(d);
    }
    dist_to.push(vec![INF; n]);

    let mut triples: Vec<(VertexId, VertexId, u32)> = Vec::new();
    for w in 0..n as VertexId {
        let i = hier.level(w);
        let bound = &dist_to[i + 1];
        search.run(g, &[w], alive, |v, d| d < bound[v as usize]);
        for &v in search.order() {
            let e = search.parent_edge(v);
            if e != NO_EDGE {
                spanner.insert(e);
            }
            if want_oracle {
                triples.push((v, w, to_u32(search.dist(v))));
            }
        }
    }
    if !want_oracle {
        return (None, spanner);
    }
    for v in 0..n {
        for i in 0..k {
            let p = pivots[v * k + i];
            if p != NO_VERTEX {
                triples.push((v as VertexId, p, to_u32(dist_to[i][v])));
            }
        }
    }
    triples.sort_unstable();
    triples.dedup_by_key(|t| (t.0, t.1));
    let mut offsets = vec![0u32; n + 1];
    for t in &triples {
        offsets[t.0 as usize + 1] += 1;
    }
    for v in 0..n {
        offsets[v + 1] += offsets[v];
    }
    let oracle = TzOracle {
        k,
        n,
        pivots,
        offsets,
        bunch_vertex: triples.iter().map(|t| t.1).collect(),
        bunch_dist: triples.iter().map(|t| t.2).collect(),
    };
    (Some(oracle), spanner)
}

fn to_u32(d: Dist) -> u32 {
    u32::try_from(d).expect("distance exceeds oracle storage range")
}

impl TzOracle {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `p_i(v)`, the nearest vertex of `X_i` (smaller id on ties).
    #[inline]
    pub fn pivot(&self, i: usize, v: VertexId) -> Option<VertexId> {
        let p = self.pivots[v as usize * self.k + i];
        (p != NO_VERTEX).then_some(p)
    }

    /// Sorted `(vertex, distance)` entries of the merged bunch of `v`.
    pub fn bunch(&self, v: VertexId) -> impl Iterator<Item = (VertexId, Dist)> + '_ {
        let r = self.offsets[v as usize] as usize..self.offsets[v as usize + 1] as usize;
        self.bunch_vertex[r.clone()]
            .iter()
            .zip(&self.bunch_dist[r])
            .map(|(&w, &d)| (w, d as Dist))
    }

    pub fn bunch_len(&self, v: VertexId) -> usize {
        (self.offsets[v as usize + 1] - self.offsets[v as usize]) as usize
    }

    /// `d_H(v, w)` if `w` belongs to a bunch of `v`.
    #[inline]
    pub fn bunch_dist(&self, v: VertexId, w: VertexId) -> Option<Dist> {
        let lo = self.offsets[v as usize] as usize;
        let hi = self.offsets[v as usize + 1] as usize;
        self.bunch_vertex[lo..hi]
            .binary_search(&w)
            .ok()
            .map(|j| self.bunch_dist[lo + j] as Dist)
    }

    pub fn total_bunch_entries(&self) -> usize {
        self.bunch_vertex.len()
    }

    /// Machine words held by the oracle.
    pub fn words(&self) -> usize {
        self.pivots.len() + self.offsets.len() + self.bunch_vertex.len() + self.bunch_dist.len()
    }

    /// Estimate in `[d_H(s,t), (2k-1) d_H(s,t)]`, `INF` when disconnected.
    pub fn query(&self, s: VertexId, t: VertexId) -> Dist {
        self.interconnect(s, t).map_or(INF, |c| c.dist)
    }

    /// Best interconnect over all levels and both orientations; on equal
    /// values the lowest level wins, then the `s` side.
    pub fn interconnect(&self, s: VertexId, t: VertexId) -> Option<Interconnect> {
        let mut best: Option<Interconnect> = None;
        for level in 0..self.k {
            for (a, b, from_s) in [(s, t, true), (t, s, false)] {
                let Some(p) = self.pivot(level, a) else { continue };
                let Some(pb) = self.bunch_dist(b, p) else { continue };
                let pa = self.bunch_dist(a, p).expect("pivot missing from own bunch");
                let dist = pa + pb;
                if best.map_or(true, |c| dist < c.dist) {
                    best = Some(Interconnect {
                        vertex: p,
                        level,
                        from_s,
                        dist,
                    });
                }
            }
        }
        best
    }

    /// The path realising [`TzOracle::query`]: canonical `s-u` and `u-t`
    /// paths of the subgraph joined at the interconnect `u`. `spanner` must
    /// be the spanner built alongside this oracle.
    pub fn witness(
        &self,
        g: &Graph,
        spanner: &EdgeSet,
        s: VertexId,
        t: VertexId,
    ) -> Result<(VertexId, Vec<VertexId>), TzError> {
        let c = self.interconnect(s, t).ok_or(TzError::Disconnected { s, t })?;
        let tree = shortest_path_tree_in(g, c.vertex, |e| spanner.contains(e));
        let mut path = tree.path_to(s);
        path.reverse();
        let tail = tree.path_to(t);
        path.extend_from_slice(&tail[1..]);
        Ok((c.vertex, path))
    }
}
