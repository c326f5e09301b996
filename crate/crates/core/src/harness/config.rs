//! Experiment configuration file: parsing and field-level validation.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cadlag::MC_TOL;
use crate::error::{Error, Result};
use crate::innovations::{InnovationKind, InnovationSpec};
use crate::limit::DEFAULT_ATOMS;
use crate::linear::CoefficientModel;
use crate::tail::TailModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    MarginalConvergence,
    Negligibility,
    M1Counterexample,
    InfiniteOrder,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::MarginalConvergence => "marginal_convergence",
            ExperimentKind::Negligibility => "negligibility",
            ExperimentKind::M1Counterexample => "m1_counterexample",
            ExperimentKind::InfiniteOrder => "infinite_order",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailBlock {
    pub alpha: f64,
    pub p: f64,
}

fn default_reps() -> usize {
    1000
}

fn default_n_grid() -> Vec<usize> {
    vec![1_000, 10_000, 100_000]
}

fn default_t_grid() -> Vec<f64> {
    vec![0.25, 0.5, 1.0]
}

fn default_q_grid() -> Vec<usize> {
    vec![1, 2, 4, 8]
}

fn default_u() -> f64 {
    0.1
}

fn default_delta() -> f64 {
    0.2
}

fn default_epsilon() -> f64 {
    0.1
}

fn default_atoms() -> usize {
    DEFAULT_ATOMS
}

fn default_tol() -> f64 {
    MC_TOL
}

fn default_innovations() -> InnovationKind {
    InnovationKind::Iid
}

/// One experiment run. Unknown fields are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub tail: TailBlock,
    #[serde(default = "default_innovations")]
    pub innovations: InnovationKind,
    pub coefficients: CoefficientModel,
    #[serde(default = "default_n_grid")]
    pub n_grid: Vec<usize>,
    #[serde(default = "default_reps")]
    pub reps: usize,
    /// Number of limit samples; defaults to `reps`.
    #[serde(default)]
    pub limit_reps: Option<usize>,
    /// Truncation level for the small-jump diagnostic.
    #[serde(default = "default_u")]
    pub u: f64,
    #[serde(default)]
    pub u_grid: Vec<f64>,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_q_grid")]
    pub q_grid: Vec<usize>,
    #[serde(default = "default_t_grid")]
    pub t_grid: Vec<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_atoms")]
    pub limit_atoms: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

fn strictly_increasing<T: PartialOrd>(xs: &[T]) -> bool {
    xs.windows(2).all(|w| w[0] < w[1])
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| Error::config("config", e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn limit_reps(&self) -> usize {
        self.limit_reps.unwrap_or(self.reps)
    }

    pub fn tail_model(&self) -> Result<TailModel> {
        TailModel::new(self.tail.alpha, self.tail.p).map_err(|e| {
            let field = match &e {
                Error::Parameter { name, .. } => format!("tail.{name}"),
                _ => "tail".to_string(),
            };
            Error::config(field, e.to_string())
        })
    }

    pub fn innovation_spec(&self) -> Result<InnovationSpec> {
        InnovationSpec::new(self.innovations, self.tail_model()?)
            .map_err(|e| Error::config("innovations.phi", e.to_string()))
    }

    /// Checks every block and names the offending field on failure.
    pub fn validate(&self) -> Result<()> {
        let tail = self.tail_model()?;
        self.innovation_spec()?;
        self.coefficients.validate().map_err(|e| {
            let field = match &e {
                Error::Parameter { name, .. } => format!("coefficients.{name}"),
                _ => "coefficients".to_string(),
            };
            Error::config(field, e.to_string())
        })?;
        if tail.alpha() > 1.0 && tail.p() != tail.r() {
            return Err(Error::config(
                "tail.p",
                "alpha in (1, 2) needs centred innovations here, so p must equal 0.5",
            ));
        }
        if self.n_grid.is_empty() || self.n_grid[0] < 1 || !strictly_increasing(&self.n_grid) {
            return Err(Error::config("n_grid", "must be a nonempty, strictly increasing list of positive lengths"));
        }
        if self.reps < 2 {
            return Err(Error::config("reps", "must be at least 2"));
        }
        if self.limit_reps() < 2 {
            return Err(Error::config("limit_reps", "must be at least 2"));
        }
        if !(self.u > 0.0 && self.u <= 1.0) {
            return Err(Error::config("u", "must lie in (0, 1]"));
        }
        if self.u_grid.iter().any(|&u| !(u > 0.0 && u <= 1.0)) || !strictly_increasing(&self.u_grid) {
            return Err(Error::config("u_grid", "must be strictly increasing values in (0, 1]"));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::config("delta", "must be positive"));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::config("epsilon", "must be positive"));
        }
        if self.q_grid.is_empty() || self.q_grid[0] < 1 || !strictly_increasing(&self.q_grid) {
            return Err(Error::config("q_grid", "must be a nonempty, strictly increasing list of positive orders"));
        }
        if self.t_grid.is_empty() || self.t_grid.iter().any(|&t| !(t > 0.0 && t <= 1.0)) || !strictly_increasing(&self.t_grid) {
            return Err(Error::config("t_grid", "must be strictly increasing times in (0, 1]"));
        }
        if self.limit_atoms < 1 {
            return Err(Error::config("limit_atoms", "must be at least 1"));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::config("tol", "must be positive"));
        }
        if self.experiment == ExperimentKind::InfiniteOrder && !self.coefficients.is_infinite() {
            return Err(Error::config(
                "coefficients.kind",
                "the infinite_order experiment needs infinite_geometric coefficients",
            ));
        }
        Ok(())
    }
}
