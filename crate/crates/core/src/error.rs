use std::path::PathBuf;

use thiserror::Error;

/// Errors returned by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A classifier probability violates the conditional-dependence feasibility bounds.
    #[error(
        "infeasible classifier: theta_j = {theta} violates the {bound} bound {limit} (rho0 = {rho0}, theta0 = {theta0})"
    )]
    Infeasible {
        theta: f64,
        rho0: f64,
        theta0: f64,
        bound: FeasibilityBound,
        limit: f64,
    },

    /// Bad arguments to a sweep or pipeline (empty grids, missing fields).
    #[error("usage error: {0}")]
    Usage(String),

    /// Every team was removed by the chance-level filter.
    #[error("empty sample: all {removed} teams fall below the chance level {chance_level}")]
    EmptySample { removed: usize, chance_level: f64 },

    /// A label draw produced a single-class sample and AUC is undefined.
    #[error("single-class sample: {positives} positives, {negatives} negatives")]
    SingleClass { positives: usize, negatives: usize },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("fixture {name} failed checksum verification (expected {expected}, got {actual})")]
    Checksum {
        name: String,
        expected: String,
        actual: String,
    },

    #[error("competition not found: {0}")]
    NotFound(String),

    /// Network or credential failure of the leaderboard client.
    #[error(
        "leaderboard download failed: {0}; use a cached snapshot or pass a local CSV (see the bundled fixtures)"
    )]
    Fetch(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Which side of the conditional-probability constraints was violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeasibilityBound {
    /// `P(Y_j = 1 | Y_0 = 0) >= 0`, i.e. theta_j is too small.
    Lower,
    /// `P(Y_j = 1 | Y_0 = 1) <= 1`, i.e. theta_j is too large.
    Upper,
}

impl std::fmt::Display for FeasibilityBound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FeasibilityBound::Lower => f.write_str("lower"),
            FeasibilityBound::Upper => f.write_str("upper"),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub(crate) fn check_probability(name: &str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} = {value} is not in [0, 1]")))
    }
}
