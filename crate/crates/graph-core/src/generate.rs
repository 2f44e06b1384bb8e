//! Seeded random and structured graph families.

use rand::Rng;

use crate::seed::rng_for;
use crate::{Graph, VertexId, Weight};

/// G(n, p) with unit weights.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Graph {
    erdos_renyi_weighted(n, p, 1, seed)
}

/// G(n, p) with weights uniform in `1..=max_weight`.
pub fn erdos_renyi_weighted(n: usize, p: f64, max_weight: Weight, seed: u64) -> Graph {
    let mut rng = rng_for(seed, "generate/er");
    let p = p.clamp(0.0, 1.0);
    let mut edges = Vec::new();
    for u in 0..n as VertexId {
        for v in u + 1..n as VertexId {
            if rng.gen_bool(p) {
                let w = if max_weight > 1 { rng.gen_range(1..=max_weight) } else { 1 };
                edges.push((u, v, w));
            }
        }
    }
    Graph::from_edges(n, edges).expect("generator produced a simple graph")
}

/// `w × h` grid, row-major ids.
pub fn grid(w: usize, h: usize) -> Graph {
    let id = |x: usize, y: usize| (y * w + x) as VertexId;
    let mut edges = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if x + 1 < w {
                edges.push((id(x, y), id(x + 1, y)));
            }
            if y + 1 < h {
                edges.push((id(x, y), id(x, y + 1)));
            }
        }
    }
    Graph::unweighted(w * h, edges).expect("grid is simple")
}

/// Random geometric graph: `n` uniform points in the unit square, joined
/// when their Euclidean distance is at most `r`.
pub fn random_geometric(n: usize, r: f64, seed: u64) -> Graph {
    let mut rng = rng_for(seed, "generate/rgg");
    let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen(), rng.gen())).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let (dx, dy) = (pts[u].0 - pts[v].0, pts[u].1 - pts[v].1);
            if dx * dx + dy * dy <= r * r {
                edges.push((u as VertexId, v as VertexId));
            }
        }
    }
    Graph::unweighted(n, edges).expect("geometric graph is simple")
}

/// The subgraph induced by the largest connected component, relabelled
/// to `0..n'` preserving vertex order.
pub fn largest_component(g: &Graph) -> Graph {
    let n = g.n();
    let mut comp = vec![usize::MAX; n];
    let mut sizes = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let c = sizes.len();
        let mut stack = vec![s as VertexId];
        comp[s] = c;
        let mut size = 0;
        while let Some(v) = stack.pop() {
            size += 1;
            for a in g.neighbors(v) {
                if comp[a.to as usize] == usize::MAX {
                    comp[a.to as usize] = c;
                    stack.push(a.to);
                }
            }
        }
        sizes.push(size);
    }
    let Some(best) = (0..sizes.len()).max_by_key(|&c| (sizes[c], usize::MAX - c)) else {
        return Graph::new(0);
    };
    let mut map = vec![VertexId::MAX; n];
    let mut next = 0;
    for v in 0..n {
        if comp[v] == best {
            map[v] = next;
            next += 1;
        }
    }
    let edges = g
        .edges()
        .iter()
        .filter(|e| comp[e.u as usize] == best)
        .map(|e| (map[e.u as usize], map[e.v as usize], e.weight));
    Graph::from_edges(next as usize, edges).expect("subgraph of a simple graph")
}
