//! A leaderboard where the top few teams are far ahead: the uncropped
//! population already explains the observed maximum.

use sota_bias::dependent::SimulationConfig;
use sota_bias::io::Fixture;
use sota_bias::sota::{
    CohortDependence, CropMode, SolverOptions, exclude_below_chance, solve_crop_threshold,
};

fn main() -> sota_bias::Result<()> {
    let sample = exclude_below_chance(&Fixture::Cassava.load()?)?.sample;
    let config = SimulationConfig::new(2000, 1);
    let est = solve_crop_threshold(
        &sample,
        sample.max_score(),
        CropMode::MatchExpectation,
        &CohortDependence::default(),
        &config,
        &SolverOptions::default(),
    )?;
    println!("observed max {:.4}", sample.max_score());
    println!(
        "cropped: {}, E(max) = {:.5}, SOTA estimate {:.4}",
        est.cropped, est.achieved, est.sota
    );
    Ok(())
}
