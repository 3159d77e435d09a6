//! Cropping an imbalanced AUC leaderboard (1.7% positives). AUC simulation
//! is expensive, so the default replication count is small.

use sota_bias::dependent::SimulationConfig;
use sota_bias::io::Fixture;
use sota_bias::sota::{CropMode, SolverOptions, auc_sota_crop, exclude_below_chance};

fn main() -> sota_bias::Result<()> {
    let replications = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(100);
    let excl = exclude_below_chance(&Fixture::Melanoma.load()?)?;
    println!("{} teams below AUC 0.5 removed", excl.removed);
    let sample = excl.sample;
    let est = auc_sota_crop(
        &sample,
        CropMode::MatchExpectation,
        &SimulationConfig::new(replications, 1),
        &SolverOptions::default(),
    )?;
    println!(
        "observed max {:.4}, crop at {:.4} with {} teams above, E(max) {:.4}",
        sample.max_score(),
        est.crop_threshold,
        est.teams_above,
        est.achieved
    );
    Ok(())
}
