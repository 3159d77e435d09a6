//! Leaderboard files, run configuration, reports and downloads.

pub mod config;
pub mod fetch;
pub mod fixtures;
pub mod leaderboard;
pub mod report;

pub use config::{ConfigLayer, RunConfig};
pub use fixtures::Fixture;
pub use leaderboard::{Design, read_leaderboard, write_leaderboard};
pub use report::{AnalysisReport, PlotTable, write_report};
