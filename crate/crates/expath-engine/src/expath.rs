use graph_core::{hop_bounded, ApspTable, Dist, EdgeSet, Graph, VertexId, INF, NO_VERTEX};

use crate::decomposable::{decomposable_matrix, DecompTable, Survival};
use crate::{Block, DecompParams, ExpathStructure, Tail};

/// Shortest ℓ-expath from `s` to `t` in `G - A`, with granularity `λ`
/// prefix and suffix walks when `lambda > 0`.
pub fn shortest_expath(
    g: &Graph,
    apsp: &ApspTable,
    a: &EdgeSet,
    s: VertexId,
    t: VertexId,
    ell: usize,
    lambda: usize,
) -> (Dist, ExpathStructure) {
    if s == t {
        return (0, ExpathStructure::empty(s, t, 0));
    }
    let surv = Survival::new(apsp, a);
    let dec = decomposable_matrix(g, &surv, a, ell);
    shortest_expath_with(g, &surv, &dec, a, s, t, ell, lambda)
}

/// As [`shortest_expath`], reusing a survival table and the matrix from
/// [`decomposable_matrix`] for the same `A` and `ℓ`.
#[allow(clippy::too_many_arguments)]
pub fn shortest_expath_with(
    g: &Graph,
    surv: &Survival,
    dec: &[Dist],
    a: &EdgeSet,
    s: VertexId,
    t: VertexId,
    ell: usize,
    lambda: usize,
) -> (Dist, ExpathStructure) {
    if s == t {
        return (0, ExpathStructure::empty(s, t, 0));
    }
    let n = g.n();
    let params = DecompParams::for_graph(g, ell);
    let alive = |e| !a.contains(e);
    let head = (lambda > 0).then(|| hop_bounded(g, s, lambda, alive));
    let mut d = match &head {
        Some(hb) => hb.dists().to_vec(),
        None => {
            let mut d = vec![INF; n];
            d[s as usize] = 0;
            d
        }
    };
    // Ties between equally long expaths go to fewer nonempty blocks.
    let mut used = vec![0u32; n];
    let mut from = vec![NO_VERTEX; params.blocks() * n];
    for i in 0..params.blocks() {
        let cap = params.delta(i);
        let mut next = d.clone();
        let mut next_used = used.clone();
        for w in 0..n {
            if d[w] == INF {
                continue;
            }
            let row = &dec[w * n..(w + 1) * n];
            for v in 0..n {
                if v == w || row[v] > cap {
                    continue;
                }
                let cand = (d[w] + row[v], used[w] + 1);
                if cand < (next[v], next_used[v]) {
                    (next[v], next_used[v]) = cand;
                    from[i * n + v] = w as VertexId;
                }
            }
        }
        d = next;
        used = next_used;
    }

    let tail = (lambda > 0).then(|| hop_bounded(g, t, lambda, alive));
    let (end, total) = match &tail {
        None => (t, d[t as usize]),
        Some(hb) => {
            let mut best = (t, d[t as usize]);
            for v in 0..n as VertexId {
                let c = graph_core::dist_add(d[v as usize], hb.dist(v));
                if c < best.1 {
                    best = (v, c);
                }
            }
            best
        }
    };
    if total == INF {
        return (INF, ExpathStructure::empty(s, t, INF));
    }

    let mut spans = Vec::new();
    let mut v = end;
    for i in (0..params.blocks()).rev() {
        let w = from[i * n + v as usize];
        if w != NO_VERTEX {
            spans.push((i, w, v));
            v = w;
        }
    }
    spans.reverse();
    let start = v;
    let mut blocks: Vec<Block> = spans
        .into_iter()
        .map(|(index, w, v)| {
            let pieces = DecompTable::build(g, surv, a, w, ell)
                .pieces(v)
                .expect("block endpoints are decomposably connected");
            Block {
                index,
                pieces,
                length: dec[w as usize * n + v as usize],
            }
        })
        .collect();
    if blocks.len() == 1 {
        blocks[0].index = params.middle();
    }
    let prefix = head.map(|hb| Tail::from_vertices(g, hb.path_to(start)));
    let suffix = tail.map(|hb| {
        let mut walk = hb.path_to(end);
        walk.reverse();
        Tail::from_vertices(g, walk)
    });
    let st = ExpathStructure {
        source: s,
        target: t,
        length: total,
        prefix,
        blocks,
        suffix,
    };
    (total, st)
}
