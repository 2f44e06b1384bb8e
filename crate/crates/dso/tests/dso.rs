use std::collections::BTreeMap;

use dso::{Case, Dso, DsoConfig, DsoError};
use graph_core::generate::{erdos_renyi, largest_component};
use graph_core::{apsp, EdgeId, FailureSet, Graph, VertexId, INF};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reference_oracles::exact_replacement;

fn random_failures(g: &Graph, f: usize, rng: &mut ChaCha8Rng) -> FailureSet {
    let k = rng.gen_range(0..=f.min(g.m()));
    let mut picked: Vec<EdgeId> = Vec::new();
    while picked.len() < k {
        let e = rng.gen_range(0..g.m() as EdgeId);
        if !picked.contains(&e) {
            picked.push(e);
        }
    }
    FailureSet::new(g, picked).unwrap()
}

/// Failures biased onto the current shortest path.
fn path_failures(g: &Graph, s: VertexId, t: VertexId, f: usize, rng: &mut ChaCha8Rng) -> FailureSet {
    let table = apsp(g);
    let on = table.path_edges(s, t);
    let mut picked: Vec<EdgeId> = Vec::new();
    for _ in 0..f {
        let e = if !on.is_empty() && rng.gen_bool(0.7) {
            on[rng.gen_range(0..on.len())]
        } else {
            rng.gen_range(0..g.m() as EdgeId)
        };
        if !picked.contains(&e) {
            picked.push(e);
        }
    }
    FailureSet::new(g, picked).unwrap()
}

#[test]
fn single_edge_graph() {
    let g = Graph::unweighted(2, [(0, 1)]).unwrap();
    let dso = Dso::preprocess(&g, &DsoConfig::new(2, 0.4, 1.0, 1)).unwrap();
    let cut = FailureSet::new(&g, [0]).unwrap();
    assert_eq!(dso.query(0, 1, &cut).unwrap().dist, INF);
    let d = dso.query(0, 1, &FailureSet::empty()).unwrap().dist;
    assert!((1..=3).contains(&d));
    assert_eq!(dso.query(1, 1, &cut).unwrap().dist, 0);
}

#[test]
fn rejects_sensitivity_one_and_oversized_queries() {
    let g = Graph::unweighted(3, [(0, 1), (1, 2)]).unwrap();
    assert!(matches!(
        Dso::preprocess(&g, &DsoConfig::new(1, 0.4, 1.0, 1)),
        Err(DsoError::InvalidParams(_))
    ));
    let dso = Dso::preprocess(&g, &DsoConfig::new(2, 0.4, 1.0, 1)).unwrap();
    let g4 = Graph::unweighted(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
    let many = FailureSet::new(&g4, [0, 1, 2]).unwrap();
    assert!(matches!(dso.query(0, 2, &many), Err(DsoError::TooManyFailures { .. })));
    assert!(matches!(dso.query(0, 9, &FailureSet::empty()), Err(DsoError::InvalidQuery(_))));
}

#[test]
fn budget_is_enforced() {
    let g = largest_component(&erdos_renyi(60, 0.1, 3));
    let mut cfg = DsoConfig::new(2, 0.4, 1.0, 1);
    cfg.budget = Some(1000);
    assert!(matches!(Dso::preprocess(&g, &cfg), Err(DsoError::BudgetExceeded { .. })));
}

#[test]
fn default_instance_is_sound_and_within_stretch() {
    let g = largest_component(&erdos_renyi(60, 0.1, 7));
    let eps = 1.0;
    let dso = Dso::preprocess(&g, &DsoConfig::new(2, 0.4, eps, 5)).unwrap();
    assert!(dso.params().degenerate);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut over, mut total) = (0, 0);
    let mut cases: BTreeMap<String, usize> = BTreeMap::new();
    for q in 0..150 {
        let s = rng.gen_range(0..g.n() as VertexId);
        let t = rng.gen_range(0..g.n() as VertexId);
        let fs = if q % 2 == 0 {
            path_failures(&g, s, t, 2, &mut rng)
        } else {
            random_failures(&g, 2, &mut rng)
        };
        let out = dso.query(s, t, &fs).unwrap();
        let exact = exact_replacement(&g, s, t, &fs);
        assert!(out.dist >= exact, "unsound: {} < {exact}", out.dist);
        if exact == INF {
            assert_eq!(out.dist, INF);
            continue;
        }
        total += 1;
        over += (out.dist as f64 > (3.0 + eps) * exact as f64) as usize;
        *cases.entry(out.label()).or_default() += 1;

        // The auxiliary distances obey the triangle inequality.
        let aux = dso.aux_graph(s, t, &fs).unwrap();
        let (d0, _) = aux.distances(0);
        for x in 0..aux.vertices.len() {
            let (dx, _) = aux.distances(x);
            let target = if s == t { 0 } else { 1 };
            assert!(d0[target] <= graph_core::dist_add(aux.weight(0, x).weight, dx[target]));
        }
    }
    assert!(over * 100 <= total, "{over} of {total} over the stretch");
    assert!(cases.keys().any(|k| k.contains("pivot") || k.contains("short")));
}

#[test]
fn no_failures_within_three() {
    let g = largest_component(&erdos_renyi(50, 0.12, 9));
    let dso = Dso::preprocess(&g, &DsoConfig::new(2, 0.4, 0.5, 2)).unwrap();
    let table = apsp(&g);
    for s in (0..g.n() as VertexId).step_by(3) {
        for t in (0..g.n() as VertexId).step_by(5) {
            let d = table.dist(s, t);
            let got = dso.query(s, t, &FailureSet::empty()).unwrap().dist;
            assert!(got >= d && got <= 3 * d, "{s}-{t}: {got} vs {d}");
        }
    }
}

#[test]
fn disconnecting_failures_give_infinity() {
    // Two triangles joined by two parallel paths.
    let g = Graph::unweighted(8, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 6), (6, 3), (1, 7), (7, 4)]).unwrap();
    let dso = Dso::preprocess(&g, &DsoConfig::new(2, 0.4, 1.0, 3)).unwrap();
    let cut = FailureSet::new(&g, [g.edge_between(2, 6).unwrap(), g.edge_between(7, 4).unwrap()]).unwrap();
    assert_eq!(dso.query(0, 5, &cut).unwrap().dist, INF);
    let one = FailureSet::new(&g, [g.edge_between(2, 6).unwrap()]).unwrap();
    let d = dso.query(0, 5, &one).unwrap().dist;
    assert!(d >= 4 && d <= 12);
}

fn granular_config(seed: u64) -> DsoConfig {
    let mut cfg = DsoConfig::new(2, 0.4, 1.0, seed);
    cfg.hop_cutoff = Some(3);
    cfg.lambda = Some(1);
    cfg.c_forest = 0.3;
    cfg.c_b = 0.02;
    cfg.c_new = 0.5;
    cfg
}

#[test]
fn granular_mode_is_sound_and_uses_balls() {
    let g = largest_component(&erdos_renyi(60, 0.2, 21));
    let dso = Dso::preprocess(&g, &granular_config(4)).unwrap();
    assert!(!dso.params().degenerate);
    assert!(!dso.balls().is_empty());
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut seen: BTreeMap<Case, usize> = BTreeMap::new();
    for _ in 0..120 {
        let s = rng.gen_range(0..g.n() as VertexId);
        let t = rng.gen_range(0..g.n() as VertexId);
        let fs = path_failures(&g, s, t, 2, &mut rng);
        let exact = exact_replacement(&g, s, t, &fs);
        let aux = dso.aux_graph(s, t, &fs).unwrap();
        for (i, &a) in aux.vertices.iter().enumerate() {
            for (j, &b) in aux.vertices.iter().enumerate().skip(i + 1) {
                let w = aux.weight(i, j);
                *seen.entry(w.case).or_default() += 1;
                let d = exact_replacement(&g, a, b, &fs);
                // Every branch is sound on its own, not only the minimum.
                assert!(w.short >= d && w.alternative >= d, "edge {a}-{b} case {:?}", w.case);
            }
        }
        assert!(dso.query(s, t, &fs).unwrap().dist >= exact);
    }
    assert!(seen.contains_key(&Case::Pivot));
    assert!(seen.contains_key(&Case::Sparse) && seen.contains_key(&Case::Dense), "{seen:?}");
}

#[test]
fn serialization_round_trips() {
    let g = largest_component(&erdos_renyi(40, 0.15, 2));
    let cfg = granular_config(9);
    let a = Dso::preprocess(&g, &cfg).unwrap();
    let b = Dso::preprocess(&g, &cfg).unwrap();
    let bytes = a.to_bytes().unwrap();
    assert_eq!(bytes, b.to_bytes().unwrap());
    let back = Dso::from_bytes(&bytes).unwrap();
    assert_eq!(back.to_bytes().unwrap(), bytes);
    let fs = FailureSet::new(&g, [0, 3]).unwrap();
    for s in 0..10 {
        assert_eq!(a.query(s, 20, &fs).unwrap(), back.query(s, 20, &fs).unwrap());
    }
    let mut bad = bytes.clone();
    let last = bad.len() - 1;
    bad[last] ^= 0xff;
    assert!(Dso::from_bytes(&bad).is_err());
    assert!(a.space().total() > 0);
}
