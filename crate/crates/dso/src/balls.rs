use ft_trees::PivotSets;
use graph_core::{EdgeSet, Graph, Searcher, VertexId};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BallRecord {
    /// The ball has at most `cap` vertices; these are its `B` members.
    Sparse(Vec<VertexId>),
    /// The nearest new pivot in the ball, or `None` when sampling missed it.
    Dense(Option<VertexId>),
}

impl BallRecord {
    pub fn words(&self) -> usize {
        match self {
            BallRecord::Sparse(v) => 1 + v.len(),
            BallRecord::Dense(_) => 1,
        }
    }
}

/// Classifies the radius-`lambda` ball of `x` in the subgraph `edges`.
pub fn classify_ball(
    g: &Graph,
    edges: &EdgeSet,
    x: VertexId,
    lambda: usize,
    cap: usize,
    pivots: &PivotSets,
    searcher: &mut Searcher,
) -> BallRecord {
    let radius = lambda as u64;
    searcher.run(g, &[x], |e| edges.contains(e), |_, d| d <= radius);
    let ball = searcher.order();
    if ball.len() <= cap {
        let mut members: Vec<VertexId> = ball.iter().copied().filter(|&v| pivots.in_b(v)).collect();
        members.sort_unstable();
        BallRecord::Sparse(members)
    } else {
        BallRecord::Dense(ball.iter().copied().find(|&v| pivots.in_new(v)))
    }
}

/// One record per (leaf graph, vertex).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallIndex {
    n: usize,
    records: Vec<BallRecord>,
}

impl BallIndex {
    pub fn new(n: usize, records: Vec<BallRecord>) -> Self {
        BallIndex { n, records }
    }

    pub fn get(&self, leaf: usize, x: VertexId) -> &BallRecord {
        &self.records[leaf * self.n + x as usize]
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn dense_without_pivot(&self) -> usize {
        self.records.iter().filter(|r| matches!(r, BallRecord::Dense(None))).count()
    }

    pub fn sparse_count(&self) -> usize {
        self.records.iter().filter(|r| matches!(r, BallRecord::Sparse(_))).count()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn words(&self) -> usize {
        self.records.iter().map(BallRecord::words).sum()
    }
}
