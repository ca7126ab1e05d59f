use std::time::Duration;

use ldsolve_core::{Cost, ProblemKind, SearchConfig};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
    Plain,
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("ratio must lie in (0, 1], got {0}")]
    Ratio(f64),
    #[error("time limit must be a positive number of seconds, got {0}")]
    TimeLimit(f64),
    #[error("subgradient iterations must be at most {max}, got {got}")]
    SubgradientIterations { got: usize, max: usize },
}

/// Run options shared by `solve`, `bench` and `partition-report`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveConfig {
    /// `None` picks the default for the instance kind.
    pub ratio: Option<f64>,
    pub cuts: bool,
    pub sg_iters: usize,
    pub first_only: bool,
    pub max_k: Option<usize>,
    pub time_limit: Option<Duration>,
    pub theorem1: bool,
    pub ub: Option<Cost>,
    pub format: OutputFormat,
}

pub const DEFAULT_TIME_LIMIT: Duration = Duration::from_secs(300);
const MAX_SG_ITERS: usize = 10_000;

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            ratio: None,
            cuts: true,
            sg_iters: ldsolve_core::lagrangean::DEFAULT_SUBGRADIENT_ITERATIONS,
            first_only: false,
            max_k: None,
            time_limit: Some(DEFAULT_TIME_LIMIT),
            theorem1: true,
            ub: None,
            format: OutputFormat::Plain,
        }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if let Some(r) = self.ratio {
            if !(r > 0.0 && r <= 1.0) {
                return Err(ConfigError::Ratio(r));
            }
        }
        if let Some(t) = self.time_limit {
            if t.is_zero() {
                return Err(ConfigError::TimeLimit(t.as_secs_f64()));
            }
        }
        if self.sg_iters > MAX_SG_ITERS {
            return Err(ConfigError::SubgradientIterations {
                got: self.sg_iters,
                max: MAX_SG_ITERS,
            });
        }
        Ok(())
    }

    pub fn ratio_for(&self, kind: ProblemKind) -> f64 {
        self.ratio
            .unwrap_or_else(|| SearchConfig::default_ratio(kind))
    }

    pub fn search_config(&self, kind: ProblemKind) -> SearchConfig {
        SearchConfig {
            ratio: self.ratio_for(kind),
            cuts: self.cuts,
            sg_iters: self.sg_iters,
            first_only: self.first_only,
            max_k: self.max_k,
            theorem1: self.theorem1,
            ub: self.ub,
            ..SearchConfig::default()
        }
    }
}

/// Seconds as given on the command line.
pub fn time_limit_from_secs(secs: f64) -> Result<Duration, ConfigError> {
    if secs.is_nan() || secs <= 0.0 || !secs.is_finite() {
        return Err(ConfigError::TimeLimit(secs));
    }
    Ok(Duration::from_secs_f64(secs))
}
