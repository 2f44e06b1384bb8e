use serde::{Deserialize, Serialize};

use crate::ForestError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n: usize,
    /// Hop cutoff: paths with at most this many edges are short.
    pub hop_cutoff: usize,
    pub sensitivity: usize,
    /// Stretch parameter of the leaf oracles (stretch `2k - 1`).
    pub k: usize,
    pub c: f64,
    /// Tree height.
    pub height: usize,
    /// Children per internal node.
    pub branching: usize,
    /// Per-level edge survival probability when sampling a child.
    pub p: f64,
    pub trees: usize,
    /// Spanner rounds per node at each depth `0..=height`.
    pub rounds: Vec<u64>,
}

/// Derives every structural parameter from `(n, L, f, k, C)`.
///
/// Height is `round(sqrt(f ln L))` (at least 1), branching
/// `ceil(((2k-1) L)^(f/h))`, `p = K^(-1/f)`, tree count
/// `max(1, ceil(C 11^h ln n))`, rounds `4 K^(h-r)` above the leaves and 1 at
/// the leaves.
pub fn derive_params(n: usize, hop_cutoff: usize, sensitivity: usize, k: usize, c: f64) -> Result<ForestParams, ForestError> {
    if hop_cutoff < 2 {
        return Err(ForestError::InvalidParams(format!("hop cutoff must be at least 2, got {hop_cutoff}")));
    }
    if sensitivity < 1 || k < 1 {
        return Err(ForestError::InvalidParams("sensitivity and k must be positive".into()));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(ForestError::InvalidParams(format!("C must be positive, got {c}")));
    }
    let f = sensitivity;
    let l = hop_cutoff as f64;
    let height = ((f as f64 * l.ln()).sqrt().round() as usize).max(1);
    let base = ((2 * k - 1) * hop_cutoff) as u64;
    let branching = if f % height == 0 {
        base.checked_pow((f / height) as u32)
            .ok_or_else(|| ForestError::InvalidParams("branching factor overflows".into()))?
    } else {
        ((base as f64).powf(f as f64 / height as f64) - 1e-9).ceil() as u64
    };
    let p = (branching as f64).powf(-1.0 / f as f64);
    let ln_n = if n > 1 { (n as f64).ln() } else { 0.0 };
    let trees = ((c * 11f64.powi(height as i32) * ln_n).ceil() as usize).max(1);
    let mut rounds = Vec::with_capacity(height + 1);
    for r in 0..height {
        let j = (branching as u128).checked_pow((height - r) as u32).map(|x| 4 * x);
        match j {
            Some(j) if j <= u64::MAX as u128 => rounds.push(j as u64),
            _ => return Err(ForestError::InvalidParams("round count overflows".into())),
        }
    }
    rounds.push(1);
    Ok(ForestParams {
        n,
        hop_cutoff,
        sensitivity,
        k,
        c,
        height,
        branching: branching as usize,
        p,
        trees,
        rounds,
    })
}

impl ForestParams {
    /// Nodes per tree at depth `r`.
    pub fn nodes_at_depth(&self, r: usize) -> u128 {
        (self.branching as u128).pow(r as u32)
    }

    pub fn leaves_per_tree(&self) -> u128 {
        self.nodes_at_depth(self.height)
    }

    /// Upper estimate of stored words for a graph with `m` edges.
    pub fn projected_entries(&self, m: usize) -> u128 {
        let n = self.n as f64;
        let k = self.k as f64;
        let bunch = (2.0 * k * n.powf(1.0 + 1.0 / k) + n * (k + 1.0)) as u128;
        let m = m as u128;
        let internal: u128 = (0..self.height).map(|r| self.nodes_at_depth(r) * 2 * m).sum();
        let leaves = self.leaves_per_tree() * (m + bunch);
        self.trees as u128 * (internal + leaves)
    }

    /// Spanner computations needed for one tree.
    pub fn spanner_builds_per_tree(&self) -> u128 {
        (0..=self.height)
            .map(|r| self.nodes_at_depth(r) * self.rounds[r] as u128)
            .sum()
    }
}
