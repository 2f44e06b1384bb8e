use graph_core::seed::rng_for;
use graph_core::VertexId;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Sampling constants for the two pivot sets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PivotConfig {
    pub sensitivity: usize,
    /// Scale the set `B` must hit: the hop cutoff, or the granularity.
    pub hitting_scale: usize,
    /// Granularity; `0` disables the sparser set.
    pub lambda: usize,
    pub hop_cutoff: usize,
    /// Constant for the sparser set.
    pub c_new: f64,
    /// Constant for `B`.
    pub c_b: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PivotSets {
    pub prob_b: f64,
    pub prob_new: f64,
    pub b: Vec<VertexId>,
    pub new: Vec<VertexId>,
    in_b: Vec<bool>,
    in_new: Vec<bool>,
}

fn clamp(p: f64) -> f64 {
    if p.is_nan() {
        0.0
    } else {
        p.clamp(0.0, 1.0)
    }
}

fn draw(n: usize, p: f64, seed: u64, label: &str) -> (Vec<VertexId>, Vec<bool>) {
    let mut rng = rng_for(seed, label);
    let mut mask = vec![false; n];
    let mut set = Vec::new();
    for (v, m) in mask.iter_mut().enumerate() {
        // Always draw so both sets consume a fixed stream per vertex.
        let x: f64 = rng.gen();
        if x < p {
            *m = true;
            set.push(v as VertexId);
        }
    }
    (set, mask)
}

pub fn sample_pivots(n: usize, cfg: &PivotConfig, seed: u64) -> PivotSets {
    let log_n = if n > 1 { (n as f64).log2() } else { 0.0 };
    let f = cfg.sensitivity as f64;
    let prob_b = if cfg.hitting_scale == 0 {
        1.0
    } else {
        clamp(cfg.c_b * f * log_n / cfg.hitting_scale as f64)
    };
    let prob_new = if cfg.lambda == 0 {
        0.0
    } else {
        let denom = cfg.lambda as f64 * (cfg.hop_cutoff as f64).powi(cfg.sensitivity as i32 - 1);
        clamp(cfg.c_new * f * log_n / denom)
    };
    let (b, in_b) = draw(n, prob_b, seed, "pivots-B");
    let (new, in_new) = draw(n, prob_new, seed, "pivots-newB");
    PivotSets {
        prob_b,
        prob_new,
        b,
        new,
        in_b,
        in_new,
    }
}

impl PivotSets {
    pub fn n(&self) -> usize {
        self.in_b.len()
    }

    pub fn in_b(&self, v: VertexId) -> bool {
        self.in_b[v as usize]
    }

    pub fn in_new(&self, v: VertexId) -> bool {
        self.in_new[v as usize]
    }

    pub fn words(&self) -> usize {
        self.b.len() + self.new.len()
    }
}
