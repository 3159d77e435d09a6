//! Reads a leaderboard CSV, runs the full analysis with a small budget and
//! writes report.json plus plot CSVs.
//!
//! cargo run --release --example leaderboard_report -- board.csv 13840 out/

use std::path::PathBuf;

use sota_bias::io::config::ConfigLayer;
use sota_bias::io::report::{Analysis, AnalysisReport, InputInfo, sha256_hex};
use sota_bias::io::{Design, Fixture, read_leaderboard, write_report};
use sota_bias::pipeline::estimate_analysis;
use sota_bias::sota::Metric;

fn main() -> sota_bias::Result<()> {
    let mut args = std::env::args().skip(1);
    let input = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| Fixture::Obesity.source_path());
    let n = args.next().and_then(|a| a.parse().ok()).unwrap_or(13_840);
    let out = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("sota-bias-report"));

    let config = ConfigLayer {
        n: Some(n),
        chance_level: Some(1.0 / 7.0),
        replications: Some(500),
        bootstrap: Some(20),
        bootstrap_replications: Some(50),
        ..Default::default()
    }
    .resolve()?;
    let design = Design {
        n,
        metric: Metric::Accuracy,
        class_balance: None,
        chance_level: config.chance_level,
    };
    let sample = read_leaderboard(&input, &design)?;
    let bytes = std::fs::read(&input).map_err(|e| sota_bias::Error::io(&input, e))?;
    let info = InputInfo {
        source: input.display().to_string(),
        sha256: sha256_hex(&bytes),
        rows: sample.len(),
    };

    let (analysis, plots) = estimate_analysis(&sample, &config)?;
    let report = AnalysisReport::new(config, Some(info), Analysis::Estimate(analysis));
    for path in write_report(&report, &plots, &out)? {
        println!("{}", path.display());
    }
    Ok(())
}
