use std::collections::BTreeSet;
use std::sync::Arc;

use ft_trees::{
    sample_pivots, FtContext, FtParams, FtTrees, LcaIndex, PivotConfig, PivotSets, ShortOracle,
};
use graph_core::envelope::{open, seal};
use graph_core::{apsp, dist_add, Dist, FailureSet, Graph, Searcher, VertexId, INF};
use rayon::prelude::*;
use rpc_forest::{build_forest, derive_params, BuildOptions, ForestError, LeafHandle, SamplingForest};
use serde::{Deserialize, Serialize};
use tz_oracle::sample_hierarchy;

use crate::balls::{classify_ball, BallIndex, BallRecord};
use crate::params::{derive_dso_params, DsoConfig, DsoParams};
use crate::DsoError;

const MAGIC: [u8; 4] = *b"FDSO";
const VERSION: u32 = 1;

/// How the non-short term of an auxiliary edge weight was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Case {
    /// Same vertex.
    Trivial,
    /// An endpoint is in `B`; fault-tolerant tree between the endpoints.
    Pivot,
    /// Pivots from a sparse ball around one endpoint.
    Sparse,
    /// New pivots of dense balls around both endpoints.
    Dense,
    /// No applicable pivot; only the short-path estimate is available.
    Unavailable,
}

impl Case {
    pub fn name(&self) -> &'static str {
        match self {
            Case::Trivial => "trivial",
            Case::Pivot => "pivot",
            Case::Sparse => "sparse",
            Case::Dense => "dense",
            Case::Unavailable => "unavailable",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeWeight {
    pub weight: Dist,
    pub short: Dist,
    /// The pivot-based term `w'`.
    pub alternative: Dist,
    pub case: Case,
    pub ft_visits: usize,
    /// A dense ball had no sampled new pivot in a surviving leaf.
    pub sampling_failure: bool,
}

/// Complete graph on `{s, t} ∪ V(F)` with possibly infinite weights.
#[derive(Clone, Debug)]
pub struct AuxGraph {
    pub vertices: Vec<VertexId>,
    pub weights: Vec<EdgeWeight>,
}

impl AuxGraph {
    pub fn weight(&self, i: usize, j: usize) -> &EdgeWeight {
        &self.weights[i * self.vertices.len() + j]
    }

    /// Single-source distances and predecessors from vertex index `src`.
    pub fn distances(&self, src: usize) -> (Vec<Dist>, Vec<usize>) {
        let k = self.vertices.len();
        let mut dist = vec![INF; k];
        let mut pred = vec![usize::MAX; k];
        let mut done = vec![false; k];
        dist[src] = 0;
        for _ in 0..k {
            let Some(x) = (0..k).filter(|&i| !done[i] && dist[i] != INF).min_by_key(|&i| (dist[i], i)) else {
                break;
            };
            done[x] = true;
            for y in 0..k {
                let nd = dist_add(dist[x], self.weight(x, y).weight);
                if !done[y] && nd < dist[y] {
                    dist[y] = nd;
                    pred[y] = x;
                }
            }
        }
        (dist, pred)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryOutcome {
    pub dist: Dist,
    /// Cases of the auxiliary edges on the chosen s-t path, in order.
    pub path_cases: Vec<Case>,
    /// Whether each edge on the path was realized by the short estimate.
    pub path_short: Vec<bool>,
    pub ft_visits: usize,
    pub sampling_failures: usize,
}

impl QueryOutcome {
    /// Compact label such as `pivot+short`.
    pub fn label(&self) -> String {
        if self.path_cases.is_empty() {
            return if self.dist == 0 { "trivial".into() } else { "none".into() };
        }
        self.path_cases
            .iter()
            .zip(&self.path_short)
            .map(|(c, &s)| if s { "short" } else { c.name() })
            .collect::<Vec<_>>()
            .join("+")
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceReport {
    pub forest: u64,
    pub pivots: u64,
    pub balls: u64,
    pub lca: u64,
    /// All-pairs table kept for building tree nodes on demand.
    pub apsp: u64,
    /// Tree nodes materialized so far.
    pub ft_nodes: u64,
}

impl SpaceReport {
    pub fn total(&self) -> u64 {
        self.forest + self.pivots + self.balls + self.lca + self.apsp + self.ft_nodes
    }
}

#[derive(Serialize, Deserialize)]
struct Stored {
    config: DsoConfig,
    params: DsoParams,
    graph: Graph,
    forest: SamplingForest,
    pivots: PivotSets,
    balls: BallIndex,
}

pub struct Dso {
    config: DsoConfig,
    params: DsoParams,
    forest: SamplingForest,
    balls: BallIndex,
    ctx: FtContext,
    trees: FtTrees,
    granular: Option<FtTrees>,
}

/// Short-path estimates restricted to the leaves one failure set reaches.
struct LeafShort<'a> {
    forest: &'a SamplingForest,
    leaves: &'a [LeafHandle],
}

impl ShortOracle for LeafShort<'_> {
    fn short_distance(&self, s: VertexId, t: VertexId, _failures: &FailureSet) -> Dist {
        self.leaves
            .iter()
            .map(|&h| self.forest.leaf_oracle(h).query(s, t))
            .min()
            .unwrap_or(INF)
    }
}

impl Dso {
    pub fn preprocess(g: &Graph, config: &DsoConfig) -> Result<Dso, DsoError> {
        let params = derive_dso_params(g.n(), config)?;
        let n = g.n();
        let fp = derive_params(n, params.hop_cutoff, params.sensitivity, params.k, config.c_forest)?;
        if let Some(budget) = config.budget {
            let leaves = fp.trees as u128 * fp.leaves_per_tree();
            let balls = if params.degenerate { 0 } else { leaves * n as u128 };
            let projected = fp.projected_entries(g.m()) + 4 * (n as u128).pow(2) + balls;
            if projected > budget {
                return Err(DsoError::BudgetExceeded { projected, budget });
            }
        }
        let hierarchy = sample_hierarchy(n, params.k, config.seed);
        let options = BuildOptions {
            budget: config.budget,
            instrument: false,
        };
        let forest = build_forest(g, &fp, &hierarchy, config.seed, &options)?;
        let pivots = sample_pivots(n, &pivot_config(&params, config), config.seed);
        let balls = if params.degenerate {
            BallIndex::default()
        } else {
            build_balls(g, &forest, &pivots, &params)
        };
        Ok(Dso::assemble(config.clone(), params, g.clone(), forest, pivots, balls))
    }

    fn assemble(
        config: DsoConfig,
        params: DsoParams,
        graph: Graph,
        forest: SamplingForest,
        pivots: PivotSets,
        balls: BallIndex,
    ) -> Dso {
        let table = apsp(&graph);
        let lca = LcaIndex::build(&graph, &pivots.b);
        let ctx = FtContext {
            graph: Arc::new(graph),
            apsp: Arc::new(table),
            pivots: Arc::new(pivots),
            lca: Arc::new(lca),
        };
        let tree_params = |lambda| FtParams {
            sensitivity: params.sensitivity,
            eps: params.eps,
            lambda,
            hop_cutoff: params.hop_cutoff,
        };
        let trees = FtTrees::new(ctx.clone(), tree_params(0), config.seed);
        let granular = (!params.degenerate).then(|| FtTrees::new(ctx.clone(), tree_params(params.lambda), config.seed));
        Dso {
            config,
            params,
            forest,
            balls,
            ctx,
            trees,
            granular,
        }
    }

    pub fn params(&self) -> &DsoParams {
        &self.params
    }

    pub fn config(&self) -> &DsoConfig {
        &self.config
    }

    pub fn graph(&self) -> &Graph {
        &self.ctx.graph
    }

    pub fn forest(&self) -> &SamplingForest {
        &self.forest
    }

    pub fn pivots(&self) -> &PivotSets {
        &self.ctx.pivots
    }

    pub fn balls(&self) -> &BallIndex {
        &self.balls
    }

    pub fn trees(&self) -> &FtTrees {
        &self.trees
    }

    pub fn granular_trees(&self) -> Option<&FtTrees> {
        self.granular.as_ref()
    }

    fn check_failures(&self, failures: &FailureSet) -> Result<(), DsoError> {
        if failures.len() > self.params.sensitivity {
            return Err(DsoError::TooManyFailures {
                got: failures.len(),
                max: self.params.sensitivity,
            });
        }
        let m = self.ctx.graph.m();
        if let Some(&e) = failures.edges().iter().find(|&&e| e as usize >= m) {
            return Err(DsoError::InvalidQuery(format!("edge {e} out of range")));
        }
        Ok(())
    }

    fn check_vertex(&self, v: VertexId) -> Result<(), DsoError> {
        if v as usize >= self.ctx.graph.n() {
            return Err(DsoError::InvalidQuery(format!("vertex {v} out of range")));
        }
        Ok(())
    }

    /// Weight of the auxiliary edge `{u, v}` under `failures`.
    pub fn edge_weight(&self, u: VertexId, v: VertexId, failures: &FailureSet) -> Result<EdgeWeight, DsoError> {
        self.check_failures(failures)?;
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let leaves = self.forest.surviving_leaves(failures);
        Ok(self.weight_with(u, v, failures, &leaves))
    }

    fn weight_with(&self, u: VertexId, v: VertexId, failures: &FailureSet, leaves: &[LeafHandle]) -> EdgeWeight {
        if u == v {
            return EdgeWeight {
                weight: 0,
                short: 0,
                alternative: 0,
                case: Case::Trivial,
                ft_visits: 0,
                sampling_failure: false,
            };
        }
        let short = LeafShort {
            forest: &self.forest,
            leaves,
        };
        let direct = short.short_distance(u, v, failures);
        let pivots = &self.ctx.pivots;
        let mut visits = 0;
        let mut sampling_failure = false;
        let mut ft = |trees: &FtTrees, a: VertexId, b: VertexId| {
            let ans = trees.query(a, b, failures, &short);
            visits += ans.visited;
            ans.dist
        };
        let (alternative, case) = if pivots.in_b(u) || pivots.in_b(v) {
            let mut best = INF;
            if pivots.in_b(v) {
                best = best.min(ft(&self.trees, u, v));
            }
            if pivots.in_b(u) {
                best = best.min(ft(&self.trees, v, u));
            }
            (best, Case::Pivot)
        } else if let (Some(granular), false) = (&self.granular, leaves.is_empty()) {
            let record = |leaf: &LeafHandle, x: VertexId| self.balls.get(self.forest.node(*leaf).leaf_index as usize, x);
            let sparse = |x: VertexId| leaves.iter().any(|h| matches!(record(h, x), BallRecord::Sparse(_)));
            if !sparse(u) && !sparse(v) {
                let pick = |x: VertexId| {
                    leaves.iter().find_map(|h| match record(h, x) {
                        BallRecord::Dense(p) => *p,
                        BallRecord::Sparse(_) => None,
                    })
                };
                match (pick(u), pick(v)) {
                    (Some(bu), Some(bv)) => {
                        let d = ft(granular, bu, bv);
                        (dist_add(d, 2 * self.params.lambda as Dist), Case::Dense)
                    }
                    _ => {
                        sampling_failure = true;
                        (INF, Case::Dense)
                    }
                }
            } else {
                let (x, y) = if sparse(u) { (u, v) } else { (v, u) };
                let members: BTreeSet<VertexId> = leaves
                    .iter()
                    .filter_map(|h| match record(h, x) {
                        BallRecord::Sparse(list) => Some(list.iter().copied()),
                        BallRecord::Dense(_) => None,
                    })
                    .flatten()
                    .collect();
                let mut best = INF;
                for b in members {
                    let head = short.short_distance(x, b, failures);
                    if head == INF || head >= best {
                        continue;
                    }
                    best = best.min(dist_add(head, ft(&self.trees, y, b)));
                }
                (best, Case::Sparse)
            }
        } else {
            (INF, Case::Unavailable)
        };
        EdgeWeight {
            weight: direct.min(alternative),
            short: direct,
            alternative,
            case,
            ft_visits: visits,
            sampling_failure,
        }
    }

    /// Builds `H^F` for the query.
    pub fn aux_graph(&self, s: VertexId, t: VertexId, failures: &FailureSet) -> Result<AuxGraph, DsoError> {
        self.check_failures(failures)?;
        self.check_vertex(s)?;
        self.check_vertex(t)?;
        let mut vertices = vec![s];
        if t != s {
            vertices.push(t);
        }
        let rest: BTreeSet<VertexId> = failures
            .endpoints()
            .iter()
            .copied()
            .filter(|&x| x != s && x != t)
            .collect();
        vertices.extend(rest);
        let k = vertices.len();
        let leaves = self.forest.surviving_leaves(failures);
        let mut weights = vec![self.weight_with(s, s, failures, &leaves); k * k];
        for i in 0..k {
            for j in i + 1..k {
                let w = self.weight_with(vertices[i], vertices[j], failures, &leaves);
                weights[i * k + j] = w;
                weights[j * k + i] = w;
            }
        }
        Ok(AuxGraph { vertices, weights })
    }

    pub fn query(&self, s: VertexId, t: VertexId, failures: &FailureSet) -> Result<QueryOutcome, DsoError> {
        let aux = self.aux_graph(s, t, failures)?;
        let (dist, pred) = aux.distances(0);
        let target = if s == t { 0 } else { 1 };
        let mut path_cases = Vec::new();
        let mut path_short = Vec::new();
        if dist[target] != INF {
            let mut y = target;
            while y != 0 {
                let x = pred[y];
                let w = aux.weight(x, y);
                path_cases.push(w.case);
                path_short.push(w.short <= w.alternative);
                y = x;
            }
            path_cases.reverse();
            path_short.reverse();
        }
        Ok(QueryOutcome {
            dist: dist[target],
            path_cases,
            path_short,
            ft_visits: aux.weights.iter().map(|w| w.ft_visits).sum::<usize>() / 2,
            sampling_failures: aux.weights.iter().filter(|w| w.sampling_failure).count() / 2,
        })
    }

    pub fn space(&self) -> SpaceReport {
        let n = self.ctx.graph.n() as u64;
        SpaceReport {
            forest: self.forest.words(),
            pivots: self.ctx.pivots.words() as u64,
            balls: self.balls.words() as u64,
            lca: self.ctx.lca.words() as u64,
            apsp: 4 * n * n,
            ft_nodes: (self.trees.words() + self.granular.as_ref().map_or(0, |t| t.words())) as u64,
        }
    }

    /// Serializes the built structures; tree nodes are a cache and excluded.
    pub fn to_bytes(&self) -> Result<Vec<u8>, DsoError> {
        let stored = Stored {
            config: self.config.clone(),
            params: self.params.clone(),
            graph: (*self.ctx.graph).clone(),
            forest: self.forest.clone(),
            pivots: (*self.ctx.pivots).clone(),
            balls: self.balls.clone(),
        };
        Ok(seal(MAGIC, VERSION, &stored)?)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Dso, DsoError> {
        let s: Stored = open(bytes, MAGIC, VERSION)?;
        Ok(Dso::assemble(s.config, s.params, s.graph, s.forest, s.pivots, s.balls))
    }
}

fn pivot_config(params: &DsoParams, config: &DsoConfig) -> PivotConfig {
    PivotConfig {
        sensitivity: params.sensitivity,
        hitting_scale: if params.degenerate {
            params.hop_cutoff
        } else {
            params.lambda
        },
        lambda: params.lambda,
        hop_cutoff: params.hop_cutoff,
        c_new: config.c_new,
        c_b: config.c_b,
    }
}

fn build_balls(g: &Graph, forest: &SamplingForest, pivots: &PivotSets, params: &DsoParams) -> BallIndex {
    let n = g.n();
    let mut per_leaf: Vec<(usize, Vec<BallRecord>)> = (0..forest.leaf_count())
        .into_par_iter()
        .map(|i| {
            let h = forest.leaf_handle(i);
            let edges = forest.leaf_graph(h);
            let mut searcher = Searcher::new(n);
            let records = (0..n as VertexId)
                .map(|x| classify_ball(g, &edges, x, params.lambda, params.ball_cap, pivots, &mut searcher))
                .collect();
            (forest.node(h).leaf_index as usize, records)
        })
        .collect();
    per_leaf.sort_by_key(|(i, _)| *i);
    BallIndex::new(n, per_leaf.into_iter().flat_map(|(_, r)| r).collect())
}

impl From<ForestError> for DsoError {
    fn from(e: ForestError) -> Self {
        match e {
            ForestError::BudgetExceeded { projected, budget } => DsoError::BudgetExceeded { projected, budget },
            ForestError::InvalidParams(m) => DsoError::InvalidParams(m),
            ForestError::Format(f) => DsoError::Format(f),
        }
    }
}
