use graph_core::seed::rng_for;
use graph_core::VertexId;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Nested samples `V = X_0 ⊇ X_1 ⊇ … ⊇ X_{k-1}`, stored as the highest
/// level each vertex reaches.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelHierarchy {
    k: usize,
    seed: u64,
    level: Vec<u8>,
}

/// Samples each level from the previous one with probability `n^{-1/k}`.
/// When `n > 0` the draw is repeated until `X_{k-1}` is nonempty.
pub fn sample_hierarchy(n: usize, k: usize, seed: u64) -> LevelHierarchy {
    assert!(k >= 1, "k must be positive");
    assert!(k <= u8::MAX as usize);
    let mut rng = rng_for(seed, "hierarchy");
    let q = if n == 0 { 0.0 } else { (n as f64).powf(-1.0 / k as f64) };
    loop {
        let mut level = vec![0u8; n];
        for l in level.iter_mut() {
            let mut i = 0;
            while i + 1 < k && rng.gen_bool(q) {
                i += 1;
            }
            *l = i as u8;
        }
        if n == 0 || level.iter().any(|&l| l as usize == k - 1) {
            return LevelHierarchy { k, seed, level };
        }
    }
}

impl LevelHierarchy {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.level.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Highest `i` with `v ∈ X_i`.
    #[inline]
    pub fn level(&self, v: VertexId) -> usize {
        self.level[v as usize] as usize
    }

    #[inline]
    pub fn contains(&self, i: usize, v: VertexId) -> bool {
        i < self.k && self.level(v) >= i
    }

    /// Members of `X_i` in increasing id order; empty for `i >= k`.
    pub fn members(&self, i: usize) -> Vec<VertexId> {
        (0..self.n() as VertexId).filter(|&v| self.contains(i, v)).collect()
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        (0..self.k).map(|i| self.level.iter().filter(|&&l| l as usize >= i).count()).collect()
    }
}
