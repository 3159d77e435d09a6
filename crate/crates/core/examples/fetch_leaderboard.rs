//! Downloads and caches a competition leaderboard. Needs Kaggle credentials
//! in $KAGGLE_CONFIG_DIR/kaggle.json or ~/.kaggle/kaggle.json.
//!
//! cargo run --example fetch_leaderboard -- <competition> <snapshot-label>

use std::path::Path;

use sota_bias::io::fetch::{Credentials, KaggleSource, fetch_leaderboard};

fn main() -> sota_bias::Result<()> {
    let mut args = std::env::args().skip(1);
    let (Some(competition), Some(snapshot)) = (args.next(), args.next()) else {
        eprintln!("usage: fetch_leaderboard <competition> <snapshot-label>");
        std::process::exit(2);
    };
    let source = KaggleSource::new(Credentials::from_env()?);
    let fetched = fetch_leaderboard(
        &source,
        &competition,
        &snapshot,
        Path::new("leaderboards"),
        false,
    )?;
    println!("{:?}: {}", fetched.provenance, fetched.path.display());
    Ok(())
}
