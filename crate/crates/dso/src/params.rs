use serde::{Deserialize, Serialize};

use crate::DsoError;

/// User-facing knobs. Overrides replace the derived hop cutoff or
/// granularity; sampling constants default to 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DsoConfig {
    pub sensitivity: usize,
    pub alpha: f64,
    pub eps: f64,
    pub seed: u64,
    pub hop_cutoff: Option<usize>,
    pub lambda: Option<usize>,
    /// Forest repetition constant.
    pub c_forest: f64,
    /// Constant for the sparser pivot set.
    pub c_new: f64,
    /// Constant for `B`.
    pub c_b: f64,
    /// Abort when the projected stored words exceed this.
    pub budget: Option<u128>,
}

impl DsoConfig {
    pub fn new(sensitivity: usize, alpha: f64, eps: f64, seed: u64) -> Self {
        DsoConfig {
            sensitivity,
            alpha,
            eps,
            seed,
            hop_cutoff: None,
            lambda: None,
            c_forest: 1.0,
            c_new: 1.0,
            c_b: 1.0,
            budget: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DsoParams {
    pub sensitivity: usize,
    pub alpha: f64,
    pub eps: f64,
    /// `3 - eps`.
    pub gap: f64,
    pub hop_cutoff: usize,
    /// `(gap / 96) * eps * L` before rounding.
    pub lambda_raw: f64,
    /// Zero in degenerate mode.
    pub lambda: usize,
    pub degenerate: bool,
    /// `8 λ / L`.
    pub delta: f64,
    /// Ball size above which a ball counts as dense: `L^f`.
    pub ball_cap: usize,
    pub k: usize,
}

pub fn derive_dso_params(n: usize, cfg: &DsoConfig) -> Result<DsoParams, DsoError> {
    let f = cfg.sensitivity;
    if f < 2 {
        return Err(DsoError::InvalidParams(format!("sensitivity must be at least 2, got {f}")));
    }
    if !(cfg.alpha > 0.0 && cfg.alpha < 0.5) {
        return Err(DsoError::InvalidParams(format!("alpha must lie in (0, 1/2), got {}", cfg.alpha)));
    }
    if !(cfg.eps > 0.0 && cfg.eps < 3.0) {
        return Err(DsoError::InvalidParams(format!("eps must lie in (0, 3), got {}", cfg.eps)));
    }
    for (name, c) in [("c_forest", cfg.c_forest), ("c_new", cfg.c_new), ("c_b", cfg.c_b)] {
        if !(c > 0.0 && c.is_finite()) {
            return Err(DsoError::InvalidParams(format!("{name} must be positive")));
        }
    }
    let derived = (n.max(1) as f64).powf(cfg.alpha / (f + 1) as f64).ceil() as usize;
    // The short-path forest needs a cutoff of at least 2.
    let hop_cutoff = cfg.hop_cutoff.unwrap_or(derived).max(2);
    let gap = 3.0 - cfg.eps;
    let lambda_raw = gap / 96.0 * cfg.eps * hop_cutoff as f64;
    let lambda = match cfg.lambda {
        Some(l) => l.min(hop_cutoff),
        None if lambda_raw < 1.0 => 0,
        None => (lambda_raw.ceil() as usize).clamp(1, hop_cutoff),
    };
    let ball_cap = hop_cutoff.saturating_pow(f as u32);
    Ok(DsoParams {
        sensitivity: f,
        alpha: cfg.alpha,
        eps: cfg.eps,
        gap,
        hop_cutoff,
        lambda_raw,
        lambda,
        degenerate: lambda == 0,
        delta: 8.0 * lambda as f64 / hop_cutoff as f64,
        ball_cap,
        k: 2,
    })
}
