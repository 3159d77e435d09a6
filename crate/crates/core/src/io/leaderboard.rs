//! Leaderboard CSV files.
//!
//! The canonical format is UTF-8 with a `team,score` header and one team per
//! row. Readers also accept extra columns (rank, dates, ...) and the Kaggle
//! export column names `TeamName` and `Score`.

use std::collections::HashSet;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sota::{LeaderboardSample, Metric};

/// Test-set design that accompanies a list of scores.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Design {
    pub n: u64,
    pub metric: Metric,
    pub class_balance: Option<f64>,
    pub chance_level: f64,
}

const TEAM_COLUMNS: &[&str] = &["team", "teamname", "team_name"];
const SCORE_COLUMNS: &[&str] = &["score"];

fn find_column(headers: &csv::StringRecord, names: &[&str]) -> Option<usize> {
    headers
        .iter()
        .position(|h| names.contains(&h.trim().to_ascii_lowercase().as_str()))
}

/// Parses leaderboard CSV text; `source` names the input in error messages.
pub fn parse_leaderboard(
    reader: impl Read,
    source: &Path,
    design: &Design,
) -> Result<LeaderboardSample> {
    let parse_err = |line: u64, message: String| Error::Parse {
        path: source.to_path_buf(),
        line,
        message,
    };
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| parse_err(1, e.to_string()))?
        .clone();
    if headers.is_empty() || headers.iter().all(|h| h.trim().is_empty()) {
        return Err(parse_err(1, "empty file".into()));
    }
    let team_col = find_column(&headers, TEAM_COLUMNS)
        .ok_or_else(|| parse_err(1, "missing `team` column".into()))?;
    let score_col = find_column(&headers, SCORE_COLUMNS)
        .ok_or_else(|| parse_err(1, "missing `score` column".into()))?;

    let mut teams = Vec::new();
    let mut scores = Vec::new();
    let mut seen = HashSet::new();
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let team = record.get(team_col).unwrap_or("").trim().to_string();
        if team.is_empty() {
            return Err(parse_err(line, "empty team identifier".into()));
        }
        let raw = record.get(score_col).unwrap_or("").trim();
        let score: f64 = raw
            .parse()
            .map_err(|_| parse_err(line, format!("score `{raw}` is not a number")))?;
        if !(0.0..=1.0).contains(&score) {
            return Err(parse_err(line, format!("score {score} is not in [0, 1]")));
        }
        if !seen.insert(team.clone()) {
            return Err(parse_err(line, format!("duplicate team `{team}`")));
        }
        teams.push(team);
        scores.push(score);
    }
    if scores.is_empty() {
        return Err(parse_err(1, "no leaderboard rows".into()));
    }
    LeaderboardSample::new(
        teams,
        scores,
        design.n,
        design.metric,
        design.class_balance,
        design.chance_level,
    )
}

pub fn read_leaderboard(path: &Path, design: &Design) -> Result<LeaderboardSample> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_leaderboard(file, path, design)
}

/// Canonical CSV text of a sample. Scores use the shortest representation
/// that reads back to the same `f64`.
pub fn leaderboard_csv(sample: &LeaderboardSample) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["team", "score"])?;
    for (team, score) in sample.teams().iter().zip(sample.scores()) {
        w.write_record([team.as_str(), &score.to_string()])?;
    }
    w.into_inner()
        .map_err(|e| Error::Config(format!("CSV buffer: {e}")))
}

pub fn write_leaderboard(path: &Path, sample: &LeaderboardSample) -> Result<()> {
    let bytes = leaderboard_csv(sample)?;
    let mut file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(&bytes).map_err(|e| Error::io(path, e))
}
