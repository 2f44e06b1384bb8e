use graph_core::{ApspTable, Dist, EdgeId, EdgeSet, Graph, VertexId, INF};
use serde::{Deserialize, Serialize};

use crate::DecompParams;

/// One constituent of a decomposable block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Piece {
    /// The canonical shortest path of `G` between the two vertices.
    Path { from: VertexId, to: VertexId },
    /// A single edge of `G - A` traversed from `from` to `to`.
    Edge { edge: EdgeId, from: VertexId, to: VertexId },
}

impl Piece {
    pub fn from(&self) -> VertexId {
        match *self {
            Piece::Path { from, .. } | Piece::Edge { from, .. } => from,
        }
    }

    pub fn to(&self) -> VertexId {
        match *self {
            Piece::Path { to, .. } | Piece::Edge { to, .. } => to,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub index: usize,
    pub pieces: Vec<Piece>,
    pub length: Dist,
}

/// Granularity prefix or suffix: an explicit walk of at most `λ` edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tail {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    pub length: Dist,
}

impl Tail {
    pub fn trivial(v: VertexId) -> Self {
        Tail {
            vertices: vec![v],
            edges: Vec::new(),
            length: 0,
        }
    }

    pub(crate) fn from_vertices(g: &Graph, vertices: Vec<VertexId>) -> Self {
        let edges: Vec<EdgeId> = vertices
            .windows(2)
            .map(|w| g.edge_between(w[0], w[1]).expect("walk uses graph edges"))
            .collect();
        let length = edges.iter().map(|&e| g.edge(e).weight as Dist).sum();
        Tail { vertices, edges, length }
    }
}

/// Where an edge of an expanded expath comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Label {
    Prefix,
    Suffix,
    /// Edge of a canonical shortest-path piece.
    Path { block: usize, piece: usize },
    /// Interleaving single edge.
    Edge { block: usize, piece: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpathStructure {
    pub source: VertexId,
    pub target: VertexId,
    pub length: Dist,
    pub prefix: Option<Tail>,
    pub blocks: Vec<Block>,
    pub suffix: Option<Tail>,
}

impl ExpathStructure {
    pub fn empty(source: VertexId, target: VertexId, length: Dist) -> Self {
        ExpathStructure {
            source,
            target,
            length,
            prefix: None,
            blocks: Vec::new(),
            suffix: None,
        }
    }

    pub fn exists(&self) -> bool {
        self.length != INF
    }

    /// Expands the structure into vertices, edges and per-edge labels.
    /// Returns empty vectors when no path exists.
    pub fn expand(&self, g: &Graph, apsp: &ApspTable) -> (Vec<VertexId>, Vec<EdgeId>, Vec<Label>) {
        if !self.exists() {
            return (Vec::new(), Vec::new(), Vec::new());
        }
        let mut vertices = vec![self.source];
        let mut edges = Vec::new();
        let mut labels = Vec::new();
        if let Some(p) = &self.prefix {
            vertices.extend_from_slice(&p.vertices[1..]);
            edges.extend_from_slice(&p.edges);
            labels.extend(std::iter::repeat(Label::Prefix).take(p.edges.len()));
        }
        for b in &self.blocks {
            for (k, piece) in b.pieces.iter().enumerate() {
                match *piece {
                    Piece::Path { from, to } => {
                        let path = apsp.path(from, to);
                        let pe = apsp.path_edges(from, to);
                        vertices.extend_from_slice(&path[1..]);
                        labels.extend(std::iter::repeat(Label::Path { block: b.index, piece: k }).take(pe.len()));
                        edges.extend(pe);
                    }
                    Piece::Edge { edge, to, .. } => {
                        vertices.push(to);
                        edges.push(edge);
                        labels.push(Label::Edge { block: b.index, piece: k });
                    }
                }
            }
        }
        if let Some(s) = &self.suffix {
            vertices.extend_from_slice(&s.vertices[1..]);
            edges.extend_from_slice(&s.edges);
            labels.extend(std::iter::repeat(Label::Suffix).take(s.edges.len()));
        }
        debug_assert_eq!(edges.iter().map(|&e| g.edge(e).weight as Dist).sum::<Dist>(), self.length);
        (vertices, edges, labels)
    }
}

/// Number of layer transitions a piece sequence needs: one per interleaving
/// edge and one between directly adjacent shortest-path pieces.
pub(crate) fn transitions(pieces: &[Piece]) -> usize {
    let edges = pieces.iter().filter(|p| matches!(p, Piece::Edge { .. })).count();
    let joins = pieces
        .windows(2)
        .filter(|w| matches!(w[0], Piece::Path { .. }) && matches!(w[1], Piece::Path { .. }))
        .count();
    edges + joins
}

fn check_tail(g: &Graph, a: &EdgeSet, t: &Tail, start: VertexId, lambda: usize) -> Option<VertexId> {
    if t.vertices.first() != Some(&start) || t.edges.len() + 1 != t.vertices.len() || t.edges.len() > lambda {
        return None;
    }
    let mut len = 0;
    for (k, &e) in t.edges.iter().enumerate() {
        if e as usize >= g.m() || a.contains(e) {
            return None;
        }
        let edge = g.edge(e);
        let (x, y) = (t.vertices[k], t.vertices[k + 1]);
        if !((edge.u == x && edge.v == y) || (edge.u == y && edge.v == x)) {
            return None;
        }
        len += edge.weight as Dist;
    }
    (len == t.length).then(|| *t.vertices.last().unwrap())
}

/// Checks every structural invariant of an expath certificate in `G - A`.
pub fn verify_expath(
    g: &Graph,
    apsp: &ApspTable,
    a: &EdgeSet,
    st: &ExpathStructure,
    ell: usize,
    lambda: usize,
) -> bool {
    let n = g.n() as VertexId;
    if st.source >= n || st.target >= n {
        return false;
    }
    if !st.exists() {
        return st.blocks.is_empty() && st.prefix.is_none() && st.suffix.is_none();
    }
    let params = DecompParams::for_graph(g, ell);
    let mut at = st.source;
    let mut total = 0;
    if let Some(t) = &st.prefix {
        if lambda == 0 && !t.edges.is_empty() {
            return false;
        }
        match check_tail(g, a, t, at, lambda) {
            Some(end) => at = end,
            None => return false,
        }
        total += t.length;
    }
    let mut last_index = None;
    for b in &st.blocks {
        if b.index >= params.blocks() || last_index.is_some_and(|i| i >= b.index) {
            return false;
        }
        last_index = Some(b.index);
        let mut len = 0;
        for piece in &b.pieces {
            if piece.from() != at || piece.to() >= n {
                return false;
            }
            match *piece {
                Piece::Path { from, to } => {
                    if !apsp.path_avoids(from, to, |e| !a.contains(e)) {
                        return false;
                    }
                    len += apsp.dist(from, to);
                }
                Piece::Edge { edge, from, to } => {
                    if edge as usize >= g.m() || a.contains(edge) {
                        return false;
                    }
                    let e = g.edge(edge);
                    if !((e.u == from && e.v == to) || (e.u == to && e.v == from)) {
                        return false;
                    }
                    len += e.weight as Dist;
                }
            }
            at = piece.to();
        }
        if transitions(&b.pieces) > ell || len != b.length || len > params.delta(b.index) {
            return false;
        }
        total += len;
    }
    if let Some(t) = &st.suffix {
        if lambda == 0 && !t.edges.is_empty() {
            return false;
        }
        match check_tail(g, a, t, at, lambda) {
            Some(end) => at = end,
            None => return false,
        }
        total += t.length;
    }
    at == st.target && total == st.length
}
