use std::collections::BTreeMap;
use std::time::Instant;

use dso::{Dso, DsoParams, SpaceReport};
use graph_core::seed::rng_for;
use graph_core::{shortest_path_tree_in, Dist, EdgeId, FailureSet, Graph, VertexId, INF};
use rand::Rng;
use rayon::prelude::*;
use reference_oracles::exact_replacement;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::{CliError, ExperimentConfig, Workload};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Query {
    pub s: VertexId,
    pub t: VertexId,
    pub failures: Vec<EdgeId>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QueryRecord {
    pub index: usize,
    pub s: VertexId,
    pub t: VertexId,
    #[serde(rename = "F")]
    pub failures: Vec<EdgeId>,
    /// `None` stands for an infinite distance.
    pub answer: Option<Dist>,
    pub exact: Option<Dist>,
    /// `answer / exact`; `None` when either side is infinite or `exact = 0`
    /// with a nonzero answer.
    pub stretch: Option<f64>,
    pub case: String,
    pub sound: bool,
    pub sampling_failures: usize,
    pub ft_visits: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub queries: usize,
    /// Queries whose exact distance is finite.
    pub finite: usize,
    pub soundness_violations: usize,
    pub stretch_violations: usize,
    pub stretch_violation_rate: f64,
    pub max_stretch: f64,
    pub mean_stretch: f64,
    pub cases: BTreeMap<String, usize>,
    pub sampling_failures: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: ExperimentConfig,
    pub n: usize,
    pub m: usize,
    pub params: DsoParams,
    pub forest_trees: usize,
    pub forest_leaves: usize,
    pub pivots_b: usize,
    pub pivots_new: usize,
    pub space: SpaceReport,
    pub space_words: u64,
    /// SHA-256 of the serialized oracle.
    pub oracle_sha256: String,
    pub summary: Summary,
    pub records: Vec<QueryRecord>,
}

/// Wall-clock measurements, kept apart from the deterministic report.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub graph_ms: f64,
    pub build_ms: f64,
    pub queries_ms: f64,
    pub per_query_ms: Vec<f64>,
}

/// Draws `(s, t, F)` triples from the `"workload"` stream of `seed`.
pub fn generate_workload(g: &Graph, workload: &Workload, seed: u64) -> Vec<Query> {
    let mut rng = rng_for(seed, "workload");
    let n = g.n();
    if n == 0 {
        return Vec::new();
    }
    (0..workload.queries)
        .map(|_| {
            let s = rng.gen_range(0..n as VertexId);
            let t = rng.gen_range(0..n as VertexId);
            let size = rng.gen_range(0..=workload.max_failures.min(g.m()));
            let mut failures: Vec<EdgeId> = Vec::new();
            let mut attempts = 0;
            while failures.len() < size && attempts < 100 {
                attempts += 1;
                let e = if rng.gen_bool(workload.path_bias) {
                    let tree = shortest_path_tree_in(g, s, |e| !failures.contains(&e));
                    let path = tree.edges_to(t);
                    if path.is_empty() {
                        continue;
                    }
                    path[rng.gen_range(0..path.len())]
                } else {
                    rng.gen_range(0..g.m() as EdgeId)
                };
                if !failures.contains(&e) {
                    failures.push(e);
                }
            }
            Query { s, t, failures }
        })
        .collect()
}

fn finite(d: Dist) -> Option<Dist> {
    (d != INF).then_some(d)
}

pub fn run_query(dso: &Dso, index: usize, q: &Query) -> Result<QueryRecord, CliError> {
    let g = dso.graph();
    let fs = FailureSet::new(g, q.failures.iter().copied())?;
    let out = dso.query(q.s, q.t, &fs)?;
    let exact = exact_replacement(g, q.s, q.t, &fs);
    let stretch = match (out.dist, exact) {
        (INF, _) | (_, INF) => None,
        (0, 0) => Some(1.0),
        (_, 0) => None,
        (a, e) => Some(a as f64 / e as f64),
    };
    Ok(QueryRecord {
        index,
        s: q.s,
        t: q.t,
        failures: q.failures.clone(),
        answer: finite(out.dist),
        exact: finite(exact),
        stretch,
        case: out.label(),
        sound: out.dist >= exact,
        sampling_failures: out.sampling_failures,
        ft_visits: out.ft_visits,
    })
}

/// Answers every query, in parallel, returning records in query order.
pub fn run_queries(dso: &Dso, queries: &[Query]) -> Result<(Vec<QueryRecord>, Vec<f64>), CliError> {
    let results: Vec<Result<(QueryRecord, f64), CliError>> = queries
        .par_iter()
        .enumerate()
        .map(|(i, q)| {
            let start = Instant::now();
            let r = run_query(dso, i, q)?;
            Ok((r, start.elapsed().as_secs_f64() * 1e3))
        })
        .collect();
    let mut records = Vec::with_capacity(queries.len());
    let mut times = Vec::with_capacity(queries.len());
    for r in results {
        let (rec, ms) = r?;
        records.push(rec);
        times.push(ms);
    }
    Ok((records, times))
}

pub fn summarize(records: &[QueryRecord], eps: f64) -> Summary {
    let mut s = Summary {
        queries: records.len(),
        ..Summary::default()
    };
    let mut stretch_sum = 0.0;
    for r in records {
        *s.cases.entry(r.case.clone()).or_default() += 1;
        s.sampling_failures += r.sampling_failures;
        s.soundness_violations += (!r.sound) as usize;
        if r.exact.is_none() {
            continue;
        }
        s.finite += 1;
        match r.stretch {
            Some(x) => {
                stretch_sum += x;
                s.max_stretch = s.max_stretch.max(x);
                s.stretch_violations += (x > 3.0 + eps) as usize;
            }
            None => s.stretch_violations += 1,
        }
    }
    if s.finite > 0 {
        s.stretch_violation_rate = s.stretch_violations as f64 / s.finite as f64;
        s.mean_stretch = stretch_sum / s.finite as f64;
    }
    s
}

pub fn oracle_digest(dso: &Dso) -> Result<String, CliError> {
    let bytes = dso.to_bytes()?;
    Ok(Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect())
}

pub fn report_for(config: &ExperimentConfig, dso: &Dso, records: Vec<QueryRecord>) -> Result<Report, CliError> {
    let summary = summarize(&records, config.oracle.eps);
    let space = dso.space();
    Ok(Report {
        config: config.clone(),
        n: dso.graph().n(),
        m: dso.graph().m(),
        params: dso.params().clone(),
        forest_trees: dso.forest().params().trees,
        forest_leaves: dso.forest().leaf_count(),
        pivots_b: dso.pivots().b.len(),
        pivots_new: dso.pivots().new.len(),
        space_words: space.total(),
        space,
        oracle_sha256: oracle_digest(dso)?,
        summary,
        records,
    })
}

/// Generates the graph, builds the oracle and answers the workload.
pub fn run_campaign(config: &ExperimentConfig) -> Result<(Report, Timings), CliError> {
    config.validate()?;
    let t0 = Instant::now();
    let g = config.graph.build()?;
    let graph_ms = t0.elapsed().as_secs_f64() * 1e3;
    let t1 = Instant::now();
    let dso = Dso::preprocess(&g, &config.oracle.dso_config(config.seed)?)?;
    let build_ms = t1.elapsed().as_secs_f64() * 1e3;
    let queries = generate_workload(&g, &config.workload, config.seed);
    let t2 = Instant::now();
    let (records, per_query_ms) = run_queries(&dso, &queries)?;
    let queries_ms = t2.elapsed().as_secs_f64() * 1e3;
    let report = report_for(config, &dso, records)?;
    Ok((
        report,
        Timings {
            graph_ms,
            build_ms,
            queries_ms,
            per_query_ms,
        },
    ))
}

pub fn write_csv<W: std::io::Write>(records: &[QueryRecord], out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["index", "s", "t", "F", "answer", "exact", "stretch", "case", "sound"])?;
    let opt = |d: Option<Dist>| d.map_or("inf".to_string(), |d| d.to_string());
    for r in records {
        let fs: Vec<String> = r.failures.iter().map(|e| e.to_string()).collect();
        w.write_record([
            r.index.to_string(),
            r.s.to_string(),
            r.t.to_string(),
            fs.join(";"),
            opt(r.answer),
            opt(r.exact),
            r.stretch.map_or(String::new(), |x| format!("{x:.6}")),
            r.case.clone(),
            r.sound.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
