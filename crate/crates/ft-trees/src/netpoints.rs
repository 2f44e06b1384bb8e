use graph_core::Dist;
use serde::{Deserialize, Serialize};

/// Netpoint positions on a path, as indices into its vertex sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Netpoints {
    pub positions: Vec<usize>,
    pub lambda: usize,
}

impl Netpoints {
    pub fn contains(&self, pos: usize) -> bool {
        self.positions.binary_search(&pos).is_ok()
    }

    /// Index of the segment containing the edge `(pos, pos + 1)`.
    pub fn segment_of_edge(&self, pos: usize) -> usize {
        self.positions.partition_point(|&p| p <= pos) - 1
    }

    pub fn segment_count(&self) -> usize {
        self.positions.len().saturating_sub(1)
    }
}

/// Whether some power `base^i`, `i ≥ 0`, lies in `(lo, hi]`.
pub(crate) fn power_between(lo: f64, hi: f64, base: f64) -> bool {
    if hi < 1.0 {
        return false;
    }
    let mut i = 0;
    while base.powi(i) <= lo {
        i += 1;
    }
    base.powi(i) <= hi
}

/// Netpoints of a path given by its prefix lengths (`prefix[0] = 0`,
/// `prefix[i]` the length up to the i-th vertex). Spacing base is
/// `1 + eps / 36`; with `lambda > 0` the first and last `lambda` positions
/// are taken wholesale and the crossings are measured from them.
pub fn compute_netpoints(prefix: &[Dist], eps: f64, lambda: usize) -> Netpoints {
    assert!(!prefix.is_empty(), "path has at least one vertex");
    let k = prefix.len() - 1;
    if lambda > 0 && k <= 2 * lambda {
        return Netpoints {
            positions: (0..=k).collect(),
            lambda,
        };
    }
    let base = 1.0 + eps / 36.0;
    let (lo, hi) = (lambda, k - lambda);
    let mut net = vec![false; k + 1];
    for p in net.iter_mut().take(lo + 1) {
        *p = true;
    }
    for p in net.iter_mut().skip(hi) {
        *p = true;
    }
    for j in lo..hi {
        let a = (prefix[j] - prefix[lo]) as f64;
        let a2 = (prefix[j + 1] - prefix[lo]) as f64;
        if power_between(a, a2, base) {
            net[j] = true;
            net[j + 1] = true;
        }
        let b = (prefix[hi] - prefix[j + 1]) as f64;
        let b2 = (prefix[hi] - prefix[j]) as f64;
        if power_between(b, b2, base) {
            net[j] = true;
            net[j + 1] = true;
        }
    }
    Netpoints {
        positions: (0..=k).filter(|&i| net[i]).collect(),
        lambda,
    }
}

/// Multi-edge segments exceeding `(eps/36)·(min(|P[start..y]|, |P[y..end]|) − λ)`
/// for some vertex `y` of the segment.
pub fn segment_violations(prefix: &[Dist], net: &Netpoints, eps: f64) -> usize {
    let k = prefix.len() - 1;
    let lambda = net.lambda as f64;
    net.positions
        .windows(2)
        .filter(|w| w[1] - w[0] >= 2)
        .filter(|w| {
            let size = (prefix[w[1]] - prefix[w[0]]) as f64;
            (w[0]..=w[1]).any(|y| {
                let side = prefix[y].min(prefix[k] - prefix[y]) as f64;
                size > eps / 36.0 * (side - lambda) + 1e-9
            })
        })
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(k: usize) -> Vec<Dist> {
        (0..=k as Dist).collect()
    }

    #[test]
    fn short_paths_are_all_netpoints() {
        let n = compute_netpoints(&unit(4), 1.0, 2);
        assert_eq!(n.positions, vec![0, 1, 2, 3, 4]);
        let n = compute_netpoints(&unit(1), 1.0, 0);
        assert_eq!(n.positions, vec![0, 1]);
        let n = compute_netpoints(&[0], 1.0, 0);
        assert_eq!(n.positions, vec![0]);
        assert_eq!(n.segment_count(), 0);
    }

    #[test]
    fn powers_strictly_above_lower_end() {
        assert!(power_between(0.0, 1.0, 1.1));
        assert!(!power_between(1.0, 1.05, 1.1));
        assert!(power_between(1.0, 1.1, 1.1));
        assert!(!power_between(0.0, 0.5, 1.1));
    }

    #[test]
    fn segments_located_by_edge() {
        let n = Netpoints {
            positions: vec![0, 1, 4, 6],
            lambda: 0,
        };
        assert_eq!(n.segment_of_edge(0), 0);
        assert_eq!(n.segment_of_edge(1), 1);
        assert_eq!(n.segment_of_edge(3), 1);
        assert_eq!(n.segment_of_edge(5), 2);
        assert!(n.contains(4) && !n.contains(5));
    }

    #[test]
    fn long_unit_paths_meet_the_segment_bound() {
        for k in [10, 40, 200, 1000] {
            for eps in [0.5, 1.0, 2.9] {
                for lambda in [0, 1, 3] {
                    let p = unit(k);
                    let n = compute_netpoints(&p, eps, lambda);
                    assert_eq!(n.positions[0], 0);
                    assert_eq!(*n.positions.last().unwrap(), k);
                    assert_eq!(segment_violations(&p, &n, eps), 0, "k={k} eps={eps} lambda={lambda}");
                }
            }
        }
    }
}
