//! Run configuration: a plain `key = value` file (or JSON object), overlaid by
//! command-line flags. Every flag has a config key of the same name.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dependent::{ReferenceMode, SimulationConfig};
use crate::error::{Error, Result};
use crate::io::leaderboard::Design;
use crate::sota::{BootstrapConfig, CohortDependence, CropMode, Metric, SolverOptions};

/// One source of settings; unset keys fall through to the next layer.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigLayer {
    pub metric: Option<Metric>,
    pub n: Option<u64>,
    pub pi: Option<f64>,
    pub chance_level: Option<f64>,
    pub rho0: Option<f64>,
    pub theta0: Option<f64>,
    pub reference_mode: Option<ReferenceMode>,
    pub m: Option<u64>,
    pub theta: Option<f64>,
    pub theta_min: Option<f64>,
    pub replications: Option<u64>,
    pub bootstrap: Option<u64>,
    pub bootstrap_replications: Option<u64>,
    pub alpha: Option<f64>,
    pub seed: Option<u64>,
    pub mode: Option<CropMode>,
    pub tolerance: Option<f64>,
    pub input: Option<PathBuf>,
    pub competition: Option<String>,
    pub snapshot: Option<String>,
    pub cache_dir: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
}

const TEXT_KEYS: &[&str] = &[
    "metric",
    "reference_mode",
    "mode",
    "input",
    "competition",
    "snapshot",
    "cache_dir",
    "out",
];

impl ConfigLayer {
    /// Parses `key = value` lines (`#` starts a comment) or a JSON object.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            return serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()));
        }
        let mut map = serde_json::Map::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", i + 1)))?;
            let key = key.trim().replace('-', "_");
            let value = value.trim().trim_matches('"');
            let json = if TEXT_KEYS.contains(&key.as_str()) {
                serde_json::Value::String(value.to_string())
            } else {
                serde_json::from_str(value).map_err(|_| {
                    Error::Config(format!("line {}: `{value}` is not a number", i + 1))
                })?
            };
            if map.insert(key.clone(), json).is_some() {
                return Err(Error::Config(format!(
                    "line {}: duplicate key `{key}`",
                    i + 1
                )));
            }
        }
        serde_json::from_value(serde_json::Value::Object(map))
            .map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// `self` with every key set in `top` replaced by its value there.
    pub fn overlay(self, top: ConfigLayer) -> ConfigLayer {
        macro_rules! pick {
            ($($f:ident),*) => { ConfigLayer { $($f: top.$f.or(self.$f)),* } };
        }
        pick!(
            metric,
            n,
            pi,
            chance_level,
            rho0,
            theta0,
            reference_mode,
            m,
            theta,
            theta_min,
            replications,
            bootstrap,
            bootstrap_replications,
            alpha,
            seed,
            mode,
            tolerance,
            input,
            competition,
            snapshot,
            cache_dir,
            out,
            workers
        )
    }

    pub fn resolve(self) -> Result<RunConfig> {
        let metric = self.metric.unwrap_or(Metric::Accuracy);
        let (default_rho0, default_chance) = match metric {
            Metric::Accuracy => (CohortDependence::DEFAULT_RHO0, 0.0),
            Metric::Auc => (0.0, 0.5),
        };
        let config = RunConfig {
            metric,
            n: self.n,
            pi: self.pi,
            chance_level: self.chance_level.unwrap_or(default_chance),
            rho0: self.rho0.unwrap_or(default_rho0),
            theta0: self.theta0,
            reference_mode: self.reference_mode.unwrap_or_default(),
            m: self.m,
            theta: self.theta,
            theta_min: self.theta_min,
            replications: self.replications.unwrap_or(RunConfig::DEFAULT_REPLICATIONS),
            bootstrap: self.bootstrap.unwrap_or(RunConfig::DEFAULT_BOOTSTRAP),
            bootstrap_replications: self
                .bootstrap_replications
                .unwrap_or(BootstrapConfig::default().replications),
            alpha: self.alpha.unwrap_or(0.05),
            seed: self.seed.unwrap_or(RunConfig::DEFAULT_SEED),
            mode: self.mode,
            tolerance: self.tolerance.unwrap_or(SolverOptions::default().tolerance),
            input: self.input,
            competition: self.competition,
            snapshot: self.snapshot,
            cache_dir: self.cache_dir,
            out: self.out,
            workers: self.workers,
        };
        config.validate()?;
        Ok(config)
    }
}

/// Fully resolved settings of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub metric: Metric,
    pub n: Option<u64>,
    pub pi: Option<f64>,
    pub chance_level: f64,
    pub rho0: f64,
    pub theta0: Option<f64>,
    pub reference_mode: ReferenceMode,
    pub m: Option<u64>,
    pub theta: Option<f64>,
    pub theta_min: Option<f64>,
    pub replications: u64,
    /// Bootstrap resamples; 0 disables the bootstrap.
    pub bootstrap: u64,
    pub bootstrap_replications: u64,
    pub alpha: f64,
    pub seed: u64,
    /// Cropping criterion; both are run when unset.
    pub mode: Option<CropMode>,
    pub tolerance: f64,
    pub input: Option<PathBuf>,
    pub competition: Option<String>,
    pub snapshot: Option<String>,
    pub cache_dir: Option<PathBuf>,
    pub out: Option<PathBuf>,
    /// Thread count; never affects results, so it is not echoed in reports.
    #[serde(skip)]
    pub workers: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        ConfigLayer::default()
            .resolve()
            .expect("defaults are valid")
    }
}

impl RunConfig {
    pub const DEFAULT_REPLICATIONS: u64 = 10_000;
    pub const DEFAULT_BOOTSTRAP: u64 = 1000;
    pub const DEFAULT_SEED: u64 = 1;

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        let unit = |v: f64| (0.0..=1.0).contains(&v);
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha = {} is not in (0, 1)", self.alpha));
        }
        if let Some(pi) = self.pi
            && !(pi > 0.0 && pi < 1.0)
        {
            return bad(format!("pi = {pi} is not in (0, 1)"));
        }
        if !unit(self.rho0) {
            return bad(format!("rho0 = {} is not in [0, 1]", self.rho0));
        }
        if !unit(self.chance_level) {
            return bad(format!(
                "chance_level = {} is not in [0, 1]",
                self.chance_level
            ));
        }
        for (name, v) in [
            ("theta", self.theta),
            ("theta_min", self.theta_min),
            ("theta0", self.theta0),
        ] {
            if let Some(v) = v
                && !unit(v)
            {
                return bad(format!("{name} = {v} is not in [0, 1]"));
            }
        }
        if self.n == Some(0) {
            return bad("n must be at least 1".into());
        }
        if self.m == Some(0) {
            return bad("m must be at least 1".into());
        }
        if self.replications == 0 || self.bootstrap_replications == 0 {
            return bad("replication counts must be at least 1".into());
        }
        if self.bootstrap == 1 {
            return bad("bootstrap needs at least 2 resamples (or 0 to disable)".into());
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return bad(format!("tolerance = {} must be positive", self.tolerance));
        }
        if self.workers == Some(0) {
            return bad("workers must be at least 1".into());
        }
        Ok(())
    }

    pub fn modes(&self) -> Vec<CropMode> {
        match self.mode {
            Some(m) => vec![m],
            None => vec![CropMode::MatchExpectation, CropMode::MatchUpperCi],
        }
    }

    pub fn simulation(&self) -> SimulationConfig {
        SimulationConfig {
            replications: self.replications,
            seed: self.seed,
            alpha: self.alpha,
            worker_hint: self.workers,
        }
    }

    pub fn dependence(&self) -> CohortDependence {
        CohortDependence {
            rho0: self.rho0,
            reference_mode: self.reference_mode,
        }
    }

    pub fn solver(&self) -> SolverOptions {
        SolverOptions {
            tolerance: self.tolerance,
            ..SolverOptions::default()
        }
    }

    pub fn bootstrap_config(&self) -> BootstrapConfig {
        BootstrapConfig {
            samples: self.bootstrap,
            replications: self.bootstrap_replications,
        }
    }

    /// Test-set design for leaderboard input; `n` (and `pi` for AUC) must be set.
    pub fn design(&self) -> Result<Design> {
        let n = self
            .n
            .ok_or_else(|| Error::Config("the test-set size `n` is required".into()))?;
        if self.metric == Metric::Auc && self.pi.is_none() {
            return Err(Error::Config("AUC runs need the class balance `pi`".into()));
        }
        Ok(Design {
            n,
            metric: self.metric,
            class_balance: self.pi,
            chance_level: self.chance_level,
        })
    }
}
