//! Versioned JSON reports and plot-data CSV files.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dependent::ReferenceMode;
use crate::error::{Error, Result};
use crate::exact::{BiasRow, SummaryStats};
use crate::io::config::RunConfig;
use crate::sota::{BootstrapSummary, Metric, SotaEstimate};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

impl ToolInfo {
    pub fn current() -> Self {
        Self {
            name: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputInfo {
    /// File path or `competition/snapshot`.
    pub source: String,
    /// SHA-256 of the input bytes, lowercase hex.
    pub sha256: String,
    pub rows: usize,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactAnalysis {
    pub m: u64,
    pub n: u64,
    pub theta: f64,
    pub summary: SummaryStats,
    /// Clopper–Pearson interval of one classifier scoring `theta`.
    pub single_classifier_ci: (f64, f64),
    /// Chance that one more classifier, with true accuracy at the upper end of
    /// `single_classifier_ci`, scores at least the upper interval bound of the maximum.
    pub next_above_upper_ci: f64,
    /// The same chance for reaching the expected maximum.
    pub next_above_expectation: f64,
    pub sweep: Option<Vec<BiasRow>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateAnalysis {
    pub m: usize,
    pub n: u64,
    pub theta_min: f64,
    pub theta_max: f64,
    pub rho0: f64,
    pub theta0: f64,
    pub reference_mode: ReferenceMode,
    pub summary: SummaryStats,
    /// Closed-form result for the same vector without dependence.
    pub independent_exact: SummaryStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UncroppedMax {
    pub summary: SummaryStats,
    pub excluded_infeasible: usize,
    pub bootstrap: Option<BootstrapSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateAnalysis {
    pub metric: Metric,
    pub teams_in_file: usize,
    pub removed_below_chance: usize,
    pub teams: usize,
    pub raw_max: f64,
    /// Exact binomial interval of the top score (accuracy only).
    pub single_classifier_ci: Option<(f64, f64)>,
    pub uncropped: UncroppedMax,
    pub estimates: Vec<SotaEstimate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AucAnalysis {
    pub m: usize,
    pub n: u64,
    pub pi: f64,
    pub auc: f64,
    pub summary: SummaryStats,
    /// Spread of one team's empirical AUC.
    pub single_classifier: SummaryStats,
    pub redrawn: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Analysis {
    Exact(ExactAnalysis),
    Simulate(SimulateAnalysis),
    Estimate(EstimateAnalysis),
    Auc(AucAnalysis),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub tool: ToolInfo,
    pub config: RunConfig,
    pub input: Option<InputInfo>,
    pub analysis: Analysis,
}

impl AnalysisReport {
    pub fn new(config: RunConfig, input: Option<InputInfo>, analysis: Analysis) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool: ToolInfo::current(),
            config,
            input,
            analysis,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let report: Self = serde_json::from_str(text)?;
        if report.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "report schema version {} is not supported (expected {SCHEMA_VERSION})",
                report.schema_version
            )));
        }
        Ok(report)
    }
}

/// Columns of numbers destined for one plot-data CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotTable {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl PlotTable {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| v.to_string()))?;
        }
        w.into_inner()
            .map_err(|e| Error::Config(format!("CSV buffer: {e}")))
    }
}

/// Writes `report.json` and one `<name>.csv` per plot table into `dir`,
/// returning the paths written.
pub fn write_report(
    report: &AnalysisReport,
    plots: &[PlotTable],
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::with_capacity(plots.len() + 1);
    let path = dir.join("report.json");
    std::fs::write(&path, report.to_json()?).map_err(|e| Error::io(&path, e))?;
    written.push(path);
    for plot in plots {
        let path = dir.join(format!("{}.csv", plot.name));
        std::fs::write(&path, plot.to_csv()?).map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_stable() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn plot_csv_layout() {
        let mut t = PlotTable::new("cdf", &["z", "cdf"]);
        t.push(vec![0.0, 0.25]);
        t.push(vec![1.0, 1.0]);
        assert_eq!(
            String::from_utf8(t.to_csv().unwrap()).unwrap(),
            "z,cdf\n0,0.25\n1,1\n"
        );
    }
}
