//! The JSON run configuration shared by every subcommand.
//!
//! The model block is the core schema
//! `{"eta": …, "kernel": {"family": "exponential", "a": …, "b": …}, "delta": …}`;
//! all other fields are optional and only read by the commands that need them.

use std::path::{Path, PathBuf};

use hawkinar_core::{discretize, HawkesModel, InarParams, KernelSpec, ReproductionKernel, RngStream};
use serde::{Deserialize, Serialize};

use crate::error::AppError;

type Result<T> = std::result::Result<T, AppError>;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub eta: Option<f64>,
    pub kernel: Option<KernelSpec>,
    pub delta: Option<f64>,
    /// Explicit INAR parameters; take precedence over `eta`/`kernel`/`delta`.
    pub alpha0: Option<f64>,
    pub alphas: Option<Vec<f64>>,
    /// Truncation horizon for the discretized kernel.
    pub horizon: Option<f64>,
    pub n_steps: Option<usize>,
    pub burn_in: Option<usize>,
    pub window: Option<(f64, f64)>,
    pub windows: Option<[(f64, f64); 2]>,
    pub lookback: Option<f64>,
    pub deltas: Option<Vec<f64>>,
    pub p: Option<usize>,
    pub max_lag: Option<usize>,
    /// `cluster`/`thinning` for Hawkes, `recursion`/`branching`/`family` for INAR.
    pub method: Option<String>,
    pub input: Option<PathBuf>,
    pub seed: Option<u64>,
    pub reps: Option<usize>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| AppError::Config(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
        Self::from_json(&text)
    }

    /// Command-line flags win over file fields.
    pub fn with_overrides(mut self, seed: Option<u64>, reps: Option<usize>, out: Option<PathBuf>) -> Self {
        self.seed = seed.or(self.seed);
        self.reps = reps.or(self.reps);
        self.out = out.or(self.out);
        self
    }

    /// Seed 0 when none is given, so runs are always reproducible.
    pub fn stream(&self) -> RngStream {
        RngStream::new(self.seed.unwrap_or(0), 0)
    }

    pub fn kernel(&self) -> Result<ReproductionKernel> {
        let spec = self.kernel.clone().ok_or_else(|| missing("kernel"))?;
        Ok(ReproductionKernel::from_spec(&spec)?)
    }

    pub fn hawkes_model(&self) -> Result<HawkesModel> {
        let eta = self.eta.ok_or_else(|| missing("eta"))?;
        Ok(HawkesModel::new(eta, self.kernel()?)?)
    }

    pub fn delta(&self) -> Result<f64> {
        self.delta.ok_or_else(|| missing("delta"))
    }

    /// `alpha0`/`alphas` if given, else the discretization of the Hawkes model.
    pub fn inar_params(&self) -> Result<InarParams> {
        if let Some(alpha0) = self.alpha0 {
            let p = InarParams::new(alpha0, self.alphas.clone().unwrap_or_default())?;
            return Ok(match self.delta {
                Some(d) => p.with_delta(d)?,
                None => p,
            });
        }
        if self.alphas.is_some() {
            return Err(missing("alpha0"));
        }
        let eta = self.eta.ok_or_else(|| missing("eta or alpha0"))?;
        Ok(discretize(eta, &self.kernel()?, self.delta()?, self.horizon)?)
    }

    pub fn out(&self) -> Result<&Path> {
        self.out.as_deref().ok_or_else(|| missing("out"))
    }

    pub fn reps_or(&self, default: usize) -> Result<usize> {
        match self.reps.unwrap_or(default) {
            0 => Err(AppError::Config("reps must be > 0".into())),
            r => Ok(r),
        }
    }
}

fn missing(field: &str) -> AppError {
    AppError::Config(format!("missing field `{field}`"))
}
