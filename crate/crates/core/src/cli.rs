//! Command-line front end.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::dependent::ReferenceMode;
use crate::error::{Error, Result};
use crate::exact::SweepGrid;
use crate::io::config::{ConfigLayer, RunConfig};
use crate::io::fetch::{Credentials, KaggleSource, Provenance, fetch_leaderboard};
use crate::io::fixtures::Fixture;
use crate::io::leaderboard::parse_leaderboard;
use crate::io::report::{Analysis, AnalysisReport, InputInfo, PlotTable, sha256_hex, write_report};
use crate::pipeline::{auc_analysis, estimate_analysis, exact_analysis, simulate_analysis};
use crate::sota::{CropMode, LeaderboardSample, Metric};

#[derive(Debug, Parser)]
#[command(
    name = "sota-bias",
    version,
    about = "Multiplicity bias of leaderboard maxima"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Seed of every random stream.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Configuration file (`key = value` lines or JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory for report.json and plot-data CSVs; the report goes to stdout otherwise.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub replications: Option<u64>,
    /// Bootstrap resamples (0 disables).
    #[arg(long, global = true)]
    pub bootstrap: Option<u64>,
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Correlation of each classifier with the reference classifier.
    #[arg(long, global = true)]
    pub rho0: Option<f64>,
    /// Cropping criterion; both are run when omitted.
    #[arg(long, global = true, value_enum)]
    pub mode: Option<ModeArg>,
    /// Worker threads (does not change results).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    MatchExpectation,
    MatchUpperCi,
}

impl From<ModeArg> for CropMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::MatchExpectation => CropMode::MatchExpectation,
            ModeArg::MatchUpperCi => CropMode::MatchUpperCi,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SweepArg {
    Classifiers,
    TestSize,
    Theta,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FixtureArg {
    Obesity,
    Cassava,
    Melanoma,
}

impl From<FixtureArg> for Fixture {
    fn from(f: FixtureArg) -> Self {
        match f {
            FixtureArg::Obesity => Fixture::Obesity,
            FixtureArg::Cassava => Fixture::Cassava,
            FixtureArg::Melanoma => Fixture::Melanoma,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form distribution of the maximum of identical classifiers.
    Exact(ExactArgs),
    /// Monte-Carlo maximum of dependent, non-identical classifiers.
    Simulate(SimulateArgs),
    /// Crop a leaderboard of accuracies to a debiased SOTA estimate.
    Estimate(EstimateArgs),
    /// Simulated maximum AUC, or the cropping pipeline for an AUC leaderboard.
    Auc(AucArgs),
    /// Download a leaderboard snapshot into the local cache.
    Fetch(FetchArgs),
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub theta: Option<f64>,
    /// Parameter to sweep while holding the others fixed.
    #[arg(long, value_enum, requires = "grid")]
    pub sweep: Option<SweepArg>,
    /// Comma-separated sweep values.
    #[arg(long, value_delimiter = ',')]
    pub grid: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long)]
    pub n: Option<u64>,
    /// Largest (SOTA) success probability.
    #[arg(long)]
    pub theta: Option<f64>,
    /// Smallest success probability; classifiers are equally spaced.
    #[arg(long)]
    pub theta_min: Option<f64>,
    /// Reference accuracy; defaults to `theta`.
    #[arg(long)]
    pub theta0: Option<f64>,
    /// Hold the number of reference successes fixed.
    #[arg(long)]
    pub fixed_reference: bool,
}

#[derive(Debug, Args)]
pub struct LeaderboardArgs {
    /// Leaderboard CSV with `team` and `score` columns.
    #[arg(long, conflicts_with = "fixture")]
    pub input: Option<PathBuf>,
    /// One of the bundled synthetic leaderboards.
    #[arg(long, value_enum)]
    pub fixture: Option<FixtureArg>,
    /// Test-set size.
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub chance_level: Option<f64>,
    #[arg(long)]
    pub bootstrap_replications: Option<u64>,
    /// Accepted distance between the matched statistic and the observed maximum.
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub board: LeaderboardArgs,
}

#[derive(Debug, Args)]
pub struct AucArgs {
    #[command(flatten)]
    pub board: LeaderboardArgs,
    /// Class balance (share of positives).
    #[arg(long)]
    pub pi: Option<f64>,
    /// Number of teams, for the simulation without a leaderboard.
    #[arg(long)]
    pub m: Option<u64>,
    /// True AUC of every team, for the simulation without a leaderboard.
    #[arg(long)]
    pub theta: Option<f64>,
}

#[derive(Debug, Args)]
pub struct FetchArgs {
    #[arg(long)]
    pub competition: Option<String>,
    /// Label of the snapshot, e.g. the download date.
    #[arg(long)]
    pub snapshot: Option<String>,
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
    /// Download again even if the snapshot is cached.
    #[arg(long)]
    pub refresh: bool,
}

impl GlobalArgs {
    fn layer(&self) -> ConfigLayer {
        ConfigLayer {
            seed: self.seed,
            out: self.out.clone(),
            replications: self.replications,
            bootstrap: self.bootstrap,
            alpha: self.alpha,
            rho0: self.rho0,
            mode: self.mode.map(Into::into),
            workers: self.workers,
            ..Default::default()
        }
    }
}

impl LeaderboardArgs {
    fn layer(&self) -> ConfigLayer {
        let fixture = self.fixture.map(Fixture::from);
        let design = fixture.map(|f| f.design());
        ConfigLayer {
            input: self.input.clone(),
            n: self.n.or(design.map(|d| d.n)),
            chance_level: self.chance_level.or(design.map(|d| d.chance_level)),
            pi: design.and_then(|d| d.class_balance),
            bootstrap_replications: self.bootstrap_replications,
            tolerance: self.tolerance,
            ..Default::default()
        }
    }
}

fn resolve(global: &GlobalArgs, command: ConfigLayer) -> Result<RunConfig> {
    let file = match &global.config {
        Some(path) => ConfigLayer::load(path)?,
        None => ConfigLayer::default(),
    };
    file.overlay(command).overlay(global.layer()).resolve()
}

fn load_board(
    args: &LeaderboardArgs,
    config: &RunConfig,
) -> Result<(LeaderboardSample, InputInfo)> {
    let design = config.design()?;
    let (bytes, source) = match (args.fixture, &config.input) {
        (Some(f), _) => {
            let f = Fixture::from(f);
            f.load()?;
            (f.bytes().to_vec(), format!("fixture:{}", f.name()))
        }
        (None, Some(path)) => (
            std::fs::read(path).map_err(|e| Error::io(path, e))?,
            path.display().to_string(),
        ),
        (None, None) => {
            return Err(Error::Config(
                "pass --input <csv> or --fixture <name>".into(),
            ));
        }
    };
    let sample = parse_leaderboard(bytes.as_slice(), std::path::Path::new(&source), &design)?;
    let info = InputInfo {
        source,
        sha256: sha256_hex(&bytes),
        rows: sample.len(),
    };
    Ok((sample, info))
}

fn emit(report: &AnalysisReport, plots: &[PlotTable], out: Option<&std::path::Path>) -> Result<()> {
    match out {
        Some(dir) => {
            for path in write_report(report, plots, dir)? {
                eprintln!("wrote {}", path.display());
            }
        }
        None => print!("{}", report.to_json()?),
    }
    Ok(())
}

fn summarize_analysis(analysis: &Analysis) {
    match analysis {
        Analysis::Exact(a) => eprintln!(
            "E(max) = {:.6}  sd = {:.7}  CI = ({:.6}, {:.6})",
            a.summary.expectation, a.summary.sd, a.summary.ci_low, a.summary.ci_high
        ),
        Analysis::Simulate(a) => eprintln!(
            "E(max) = {:.6}  sd = {:.7}  CI = ({:.6}, {:.6})  [independent exact E = {:.6}]",
            a.summary.expectation,
            a.summary.sd,
            a.summary.ci_low,
            a.summary.ci_high,
            a.independent_exact.expectation
        ),
        Analysis::Auc(a) => eprintln!(
            "E(max AUC) = {:.4}  sd = {:.5}  CI = ({:.4}, {:.4})  single-team CI = ({:.4}, {:.4})",
            a.summary.expectation,
            a.summary.sd,
            a.summary.ci_low,
            a.summary.ci_high,
            a.single_classifier.ci_low,
            a.single_classifier.ci_high
        ),
        Analysis::Estimate(a) => {
            eprintln!(
                "{} teams ({} below chance removed), max = {:.5}, uncropped E(max) = {:.5}",
                a.teams, a.removed_below_chance, a.raw_max, a.uncropped.summary.expectation
            );
            for e in &a.estimates {
                if e.cropped {
                    eprintln!(
                        "{:?}: crop at {:.5}, {} teams above, achieved {:.5}",
                        e.mode, e.crop_threshold, e.teams_above, e.achieved
                    );
                } else {
                    eprintln!(
                        "{:?}: no cropping needed (achieved {:.5})",
                        e.mode, e.achieved
                    );
                }
            }
        }
    }
}

pub fn run(cli: Cli) -> Result<()> {
    let g = &cli.global;
    let (config, input, analysis, plots) = match &cli.command {
        Command::Exact(a) => {
            let config = resolve(
                g,
                ConfigLayer {
                    m: a.m,
                    n: a.n,
                    theta: a.theta,
                    ..Default::default()
                },
            )?;
            let grid = a.sweep.map(|s| match s {
                SweepArg::Classifiers => {
                    SweepGrid::Classifiers(a.grid.iter().map(|&v| v as u64).collect())
                }
                SweepArg::TestSize => {
                    SweepGrid::TestSize(a.grid.iter().map(|&v| v as u64).collect())
                }
                SweepArg::Theta => SweepGrid::Theta(a.grid.clone()),
            });
            let (analysis, plots) = exact_analysis(&config, grid.as_ref())?;
            (config, None, Analysis::Exact(analysis), plots)
        }
        Command::Simulate(a) => {
            let config = resolve(
                g,
                ConfigLayer {
                    m: a.m,
                    n: a.n,
                    theta: a.theta,
                    theta_min: a.theta_min,
                    theta0: a.theta0,
                    reference_mode: a.fixed_reference.then_some(ReferenceMode::Fixed),
                    ..Default::default()
                },
            )?;
            let (analysis, plots) = simulate_analysis(&config)?;
            (config, None, Analysis::Simulate(analysis), plots)
        }
        Command::Estimate(a) => {
            let layer = ConfigLayer {
                metric: Some(Metric::Accuracy),
                ..a.board.layer()
            };
            let config = resolve(g, layer)?;
            let (sample, info) = load_board(&a.board, &config)?;
            let (analysis, plots) = estimate_analysis(&sample, &config)?;
            (config, Some(info), Analysis::Estimate(analysis), plots)
        }
        Command::Auc(a) => {
            let board = a.board.layer();
            let layer = ConfigLayer {
                metric: Some(Metric::Auc),
                pi: a.pi.or(board.pi),
                m: a.m,
                theta: a.theta,
                ..board
            };
            let config = resolve(g, layer)?;
            if a.board.input.is_some() || a.board.fixture.is_some() || config.input.is_some() {
                let (sample, info) = load_board(&a.board, &config)?;
                let (analysis, plots) = estimate_analysis(&sample, &config)?;
                (config, Some(info), Analysis::Estimate(analysis), plots)
            } else {
                let (analysis, plots) = auc_analysis(&config)?;
                (config, None, Analysis::Auc(analysis), plots)
            }
        }
        Command::Fetch(a) => {
            let config = resolve(
                g,
                ConfigLayer {
                    competition: a.competition.clone(),
                    snapshot: a.snapshot.clone(),
                    cache_dir: a.cache_dir.clone(),
                    ..Default::default()
                },
            )?;
            let competition = config
                .competition
                .as_deref()
                .ok_or_else(|| Error::Config("`competition` is required".into()))?;
            let snapshot = config.snapshot.as_deref().ok_or_else(|| {
                Error::Config("`snapshot` is required (e.g. the download date)".into())
            })?;
            let cache = config
                .cache_dir
                .clone()
                .unwrap_or_else(|| PathBuf::from("leaderboards"));
            let cached = crate::io::fetch::cache_path(&cache, competition, snapshot)?;
            let fetched = if cached.exists() && !a.refresh {
                fetch_leaderboard(&NoNetwork, competition, snapshot, &cache, false)?
            } else {
                let source = KaggleSource::new(Credentials::from_env()?);
                fetch_leaderboard(&source, competition, snapshot, &cache, a.refresh)?
            };
            let how = match fetched.provenance {
                Provenance::Cache => "cached",
                Provenance::Network => "downloaded",
            };
            println!("{how} {}", fetched.path.display());
            return Ok(());
        }
    };
    summarize_analysis(&analysis);
    let report = AnalysisReport::new(config.clone(), input, analysis);
    emit(&report, &plots, config.out.as_deref())
}

struct NoNetwork;

impl crate::io::fetch::LeaderboardSource for NoNetwork {
    fn download(&self, competition: &str) -> Result<Vec<u8>> {
        Err(Error::Fetch(format!("{competition} is not cached")))
    }
}

/// Parses the process arguments, runs, and maps errors to exit code 2.
pub fn main() -> std::process::ExitCode {
    match run(Cli::parse()) {
        Ok(()) => std::process::ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::ExitCode::from(2)
        }
    }
}
