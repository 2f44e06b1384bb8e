use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{EdgeId, EdgeSet, GraphError, VertexId, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub weight: Weight,
}

impl Edge {
    /// The endpoint that is not `x`.
    #[inline]
    pub fn other(&self, x: VertexId) -> VertexId {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

/// One entry of an adjacency list.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Adjacent {
    pub to: VertexId,
    pub weight: Weight,
    pub edge: EdgeId,
}

/// Undirected simple graph with positive integer weights.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "GraphRepr", into = "GraphRepr")]
pub struct Graph {
    edges: Vec<Edge>,
    adjacency: Vec<Vec<Adjacent>>,
    max_weight: Weight,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<Edge>,
}

impl From<GraphRepr> for Graph {
    fn from(repr: GraphRepr) -> Self {
        let mut g = Graph::new(repr.n);
        for e in repr.edges {
            g.push_unchecked(e.u, e.v, e.weight);
        }
        g
    }
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> Self {
        GraphRepr {
            n: g.n(),
            edges: g.edges,
        }
    }
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            edges: Vec::new(),
            adjacency: vec![Vec::new(); n],
            max_weight: 1,
        }
    }

    /// Builds a graph from `(u, v, weight)` triples, rejecting self-loops,
    /// parallel edges and zero weights.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (VertexId, VertexId, Weight)>,
    {
        let mut g = Graph::new(n);
        let mut seen = HashSet::new();
        for (u, v, w) in edges {
            g.check_edge(u, v, w)?;
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(GraphError::DuplicateEdge { u, v });
            }
            g.push_unchecked(u, v, w);
        }
        Ok(g)
    }

    /// Unit-weight convenience constructor.
    pub fn unweighted<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        Graph::from_edges(n, edges.into_iter().map(|(u, v)| (u, v, 1)))
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId, weight: Weight) -> Result<EdgeId, GraphError> {
        self.check_edge(u, v, weight)?;
        if self.edge_between(u, v).is_some() {
            return Err(GraphError::DuplicateEdge { u, v });
        }
        Ok(self.push_unchecked(u, v, weight))
    }

    fn check_edge(&self, u: VertexId, v: VertexId, weight: Weight) -> Result<(), GraphError> {
        for x in [u, v] {
            if x as usize >= self.n() {
                return Err(GraphError::VertexOutOfRange { vertex: x, n: self.n() });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop { vertex: u });
        }
        if weight == 0 {
            return Err(GraphError::ZeroWeight { u, v });
        }
        Ok(())
    }

    fn push_unchecked(&mut self, u: VertexId, v: VertexId, weight: Weight) -> EdgeId {
        let id = self.edges.len() as EdgeId;
        self.edges.push(Edge { u, v, weight });
        self.adjacency[u as usize].push(Adjacent { to: v, weight, edge: id });
        self.adjacency[v as usize].push(Adjacent { to: u, weight, edge: id });
        self.max_weight = self.max_weight.max(weight);
        id
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn max_weight(&self) -> Weight {
        self.max_weight
    }

    pub fn is_unit_weight(&self) -> bool {
        self.max_weight == 1
    }

    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[Adjacent] {
        &self.adjacency[v as usize]
    }

    #[inline]
    pub fn edge(&self, e: EdgeId) -> Edge {
        self.edges[e as usize]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v as usize].len()
    }

    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        let (a, b) = if self.degree(u) <= self.degree(v) { (u, v) } else { (v, u) };
        self.neighbors(a).iter().find(|adj| adj.to == b).map(|adj| adj.edge)
    }

    pub fn all_edges(&self) -> EdgeSet {
        EdgeSet::full(self.m())
    }

    /// Randomly reorders every adjacency list. Edge ids are unchanged, so
    /// all canonical paths must stay the same.
    pub fn shuffle_adjacency<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        for list in &mut self.adjacency {
            list.shuffle(rng);
        }
    }

    /// Sum of edge weights along a vertex sequence, or `None` if two
    /// consecutive vertices are not adjacent.
    pub fn path_length(&self, path: &[VertexId]) -> Option<u64> {
        let mut total = 0u64;
        for pair in path.windows(2) {
            let e = self.edge_between(pair[0], pair[1])?;
            total += self.edge(e).weight as u64;
        }
        Some(total)
    }

    /// Edge ids along a vertex sequence, or `None` if it is not a walk.
    pub fn path_edges(&self, path: &[VertexId]) -> Option<Vec<EdgeId>> {
        path.windows(2).map(|p| self.edge_between(p[0], p[1])).collect()
    }

    /// Number of connected components (isolated vertices count).
    pub fn component_count(&self) -> usize {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            stack.push(s as VertexId);
            while let Some(v) = stack.pop() {
                for adj in self.neighbors(v) {
                    if !seen[adj.to as usize] {
                        seen[adj.to as usize] = true;
                        stack.push(adj.to);
                    }
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.component_count() == 1
    }
}

/// A set of failed edges together with its endpoint set V(F).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FailureSet {
    edges: Vec<EdgeId>,
    endpoints: Vec<VertexId>,
}

impl FailureSet {
    pub fn empty() -> Self {
        FailureSet::default()
    }

    /// Validates the ids against `g`; duplicates are merged.
    pub fn new<I: IntoIterator<Item = EdgeId>>(g: &Graph, edges: I) -> Result<Self, GraphError> {
        let mut edges: Vec<EdgeId> = edges.into_iter().collect();
        edges.sort_unstable();
        edges.dedup();
        let mut endpoints = Vec::with_capacity(2 * edges.len());
        for &e in &edges {
            if e as usize >= g.m() {
                return Err(GraphError::UnknownEdge(e));
            }
            let edge = g.edge(e);
            endpoints.push(edge.u);
            endpoints.push(edge.v);
        }
        endpoints.sort_unstable();
        endpoints.dedup();
        Ok(FailureSet { edges, endpoints })
    }

    /// Like [`FailureSet::new`] but also enforces `|F| <= max`.
    pub fn bounded<I: IntoIterator<Item = EdgeId>>(g: &Graph, edges: I, max: usize) -> Result<Self, GraphError> {
        let set = FailureSet::new(g, edges)?;
        if set.len() > max {
            return Err(GraphError::TooManyFailures { size: set.len(), max });
        }
        Ok(set)
    }

    #[inline]
    pub fn contains(&self, e: EdgeId) -> bool {
        self.edges.contains(&e)
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn endpoints(&self) -> &[VertexId] {
        &self.endpoints
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn to_edge_set(&self, m: usize) -> EdgeSet {
        EdgeSet::from_edges(m, self.edges.iter().copied())
    }
}
