use std::path::PathBuf;

use dso::DsoConfig;
use graph_core::generate::{erdos_renyi, grid, largest_component, random_geometric};
use graph_core::{load_graph, Graph};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GraphSource {
    File { path: PathBuf },
    Er { n: usize, p: f64 },
    Grid { w: usize, h: usize },
    Rgg { n: usize, r: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphSpec {
    #[serde(flatten)]
    pub source: GraphSource,
    #[serde(default)]
    pub seed: u64,
    /// Keep only the largest connected component.
    #[serde(default)]
    pub largest_component: bool,
}

impl GraphSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::Invalid(m.into()));
        match &self.source {
            GraphSource::Er { p, .. } if !(0.0..=1.0).contains(p) => bad("er: p must lie in [0, 1]"),
            GraphSource::Rgg { r, .. } if !(*r >= 0.0 && r.is_finite()) => bad("rgg: r must be non-negative"),
            _ => Ok(()),
        }
    }

    pub fn build(&self) -> Result<Graph, CliError> {
        self.validate()?;
        let g = match &self.source {
            GraphSource::File { path } => load_graph(&std::fs::read_to_string(path)?)?,
            GraphSource::Er { n, p } => erdos_renyi(*n, *p, self.seed),
            GraphSource::Grid { w, h } => grid(*w, *h),
            GraphSource::Rgg { n, r } => random_geometric(*n, *r, self.seed),
        };
        Ok(if self.largest_component { largest_component(&g) } else { g })
    }
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleSpec {
    pub f: usize,
    pub alpha: f64,
    pub eps: f64,
    /// Stretch parameter of the short-path oracle; only 2 is supported.
    #[serde(default = "two")]
    pub k: usize,
    #[serde(default)]
    pub hop_cutoff: Option<usize>,
    #[serde(default)]
    pub lambda: Option<usize>,
    #[serde(default = "one")]
    pub c_forest: f64,
    #[serde(default = "one")]
    pub c_new: f64,
    #[serde(default = "one")]
    pub c_b: f64,
    #[serde(default)]
    pub budget: Option<u128>,
}

fn two() -> usize {
    2
}

impl OracleSpec {
    pub fn dso_config(&self, seed: u64) -> Result<DsoConfig, CliError> {
        if self.k != 2 {
            return Err(CliError::Invalid(format!("k = {} unsupported, the oracle uses k = 2", self.k)));
        }
        Ok(DsoConfig {
            sensitivity: self.f,
            alpha: self.alpha,
            eps: self.eps,
            seed,
            hop_cutoff: self.hop_cutoff,
            lambda: self.lambda,
            c_forest: self.c_forest,
            c_new: self.c_new,
            c_b: self.c_b,
            budget: self.budget,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Workload {
    pub queries: usize,
    /// Failure-set sizes are uniform in `0..=max_failures`.
    pub max_failures: usize,
    /// Probability that a failure is drawn from the current replacement
    /// path instead of uniformly.
    #[serde(default)]
    pub path_bias: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// Largest tolerated fraction of finite queries above `3 + eps`.
    pub max_stretch_violation_rate: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            max_stretch_violation_rate: 0.01,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub graph: GraphSpec,
    pub oracle: OracleSpec,
    pub seed: u64,
    pub workload: Workload,
    #[serde(default)]
    pub thresholds: Thresholds,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        self.graph.validate()?;
        let cfg = self.oracle.dso_config(self.seed)?;
        dso::derive_dso_params(1, &cfg)?;
        if self.workload.max_failures > self.oracle.f {
            return Err(CliError::Invalid("max_failures exceeds f".into()));
        }
        if !(0.0..=1.0).contains(&self.workload.path_bias) {
            return Err(CliError::Invalid("path_bias must lie in [0, 1]".into()));
        }
        if !(0.0..=1.0).contains(&self.thresholds.max_stretch_violation_rate) {
            return Err(CliError::Invalid("max_stretch_violation_rate must lie in [0, 1]".into()));
        }
        Ok(())
    }
}
