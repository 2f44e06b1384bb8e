use graph_core::{Dist, Graph};
use serde::{Deserialize, Serialize};

/// Block count and caps of an expath over a graph with `n` vertices and
/// maximum weight `W`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompParams {
    pub ell: usize,
    /// `2 * ceil(log2(n * W))`; blocks are indexed `0..=phases`.
    pub phases: usize,
}

impl DecompParams {
    pub fn new(ell: usize, n: usize, max_weight: u32) -> Self {
        let d = (n as u64).max(1) * (max_weight as u64).max(1);
        let log = 64 - (d - 1).leading_zeros() as usize;
        let log = if d == 1 { 0 } else { log };
        DecompParams { ell, phases: 2 * log }
    }

    pub fn for_graph(g: &Graph, ell: usize) -> Self {
        Self::new(ell, g.n(), g.max_weight())
    }

    pub fn blocks(&self) -> usize {
        self.phases + 1
    }

    pub fn middle(&self) -> usize {
        self.phases / 2
    }

    /// `min(2^j, 2^(phases - j))`.
    pub fn delta(&self, j: usize) -> Dist {
        let e = j.min(self.phases.saturating_sub(j));
        if e >= 63 {
            Dist::MAX
        } else {
            1 << e
        }
    }
}
