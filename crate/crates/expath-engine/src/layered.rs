use std::cmp::Reverse;
use std::collections::BinaryHeap;

use graph_core::{hop_bounded, ApspTable, Dist, EdgeSet, Graph, VertexId, INF};

use crate::DecompParams;

/// One phase over the layered graph with copies `0..=ell` of `V`, run as a
/// single Dijkstra from a virtual source whose edge to the layer-0 copy of
/// `v` weighs `init[v]`.
///
/// Every label carries its entry into the layered graph (`base`, the weight
/// of the virtual edge used) and its entry `x` into the current layer. An
/// in-layer edge is relaxed only if it is the last edge of the canonical
/// path from `x`, and any relaxation must keep `dist - base <= cap`.
pub fn layered_phase(
    g: &Graph,
    apsp: &ApspTable,
    a: &EdgeSet,
    init: &[Dist],
    ell: usize,
    cap: Option<Dist>,
) -> Vec<Dist> {
    let n = g.n();
    let cap = cap.unwrap_or(INF);
    let size = (ell + 1) * n;
    let mut dist = vec![INF; size];
    let mut entry = vec![0 as VertexId; size];
    let mut base = vec![0 as Dist; size];
    let mut done = vec![false; size];
    let mut heap = BinaryHeap::new();
    for (v, &d) in init.iter().enumerate() {
        if d != INF {
            dist[v] = d;
            entry[v] = v as VertexId;
            base[v] = d;
            heap.push(Reverse((d, v)));
        }
    }
    while let Some(Reverse((d, id))) = heap.pop() {
        if done[id] {
            continue;
        }
        done[id] = true;
        let (j, u) = (id / n, (id % n) as VertexId);
        let (x, b) = (entry[id], base[id]);
        let mut relax = |to: usize, nd: Dist, x: VertexId, heap: &mut BinaryHeap<_>| {
            if nd - b <= cap && nd < dist[to] {
                dist[to] = nd;
                entry[to] = x;
                base[to] = b;
                heap.push(Reverse((nd, to)));
            }
        };
        for adj in g.neighbors(u) {
            if a.contains(adj.edge) {
                continue;
            }
            let nd = d + adj.weight as Dist;
            if apsp.pred_edge(x, adj.to) == adj.edge {
                relax(j * n + adj.to as usize, nd, x, &mut heap);
            }
            if j < ell {
                relax((j + 1) * n + adj.to as usize, nd, adj.to, &mut heap);
            }
        }
        if j < ell {
            relax((j + 1) * n + u as usize, d, u, &mut heap);
        }
    }
    dist[ell * n..].to_vec()
}

/// Decomposable distances from the layered Dijkstra; compare with the exact
/// [`crate::decomposable_sssp`].
pub fn decomposable_sssp_layered(g: &Graph, apsp: &ApspTable, a: &EdgeSet, s: VertexId, ell: usize) -> Vec<Dist> {
    let mut init = vec![INF; g.n()];
    init[s as usize] = 0;
    layered_phase(g, apsp, a, &init, ell, None)
}

/// Expath length from iterating [`layered_phase`] over all phases.
pub fn shortest_expath_layered(
    g: &Graph,
    apsp: &ApspTable,
    a: &EdgeSet,
    s: VertexId,
    t: VertexId,
    ell: usize,
    lambda: usize,
) -> Dist {
    if s == t {
        return 0;
    }
    let params = DecompParams::for_graph(g, ell);
    let alive = |e| !a.contains(e);
    let mut d = if lambda > 0 {
        hop_bounded(g, s, lambda, alive).dists().to_vec()
    } else {
        let mut d = vec![INF; g.n()];
        d[s as usize] = 0;
        d
    };
    for i in 0..params.blocks() {
        d = layered_phase(g, apsp, a, &d, ell, Some(params.delta(i)));
    }
    if lambda == 0 {
        return d[t as usize];
    }
    let tail = hop_bounded(g, t, lambda, alive);
    (0..g.n())
        .map(|v| graph_core::dist_add(d[v], tail.dist(v as VertexId)))
        .min()
        .unwrap_or(INF)
}
