//! The cropping estimator on the bundled accuracy leaderboard of a
//! seven-class problem. Pass a replication count to trade speed for noise.

use sota_bias::dependent::SimulationConfig;
use sota_bias::io::Fixture;
use sota_bias::sota::{
    CohortDependence, CropMode, SolverOptions, exclude_below_chance, expected_max,
    solve_crop_threshold,
};

fn main() -> sota_bias::Result<()> {
    let replications = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(2000);
    let board = exclude_below_chance(&Fixture::Obesity.load()?)?;
    let sample = board.sample;
    let config = SimulationConfig::new(replications, 1);
    let dep = CohortDependence::default();

    let raw = expected_max(sample.scores(), &sample, &dep, &config)?;
    println!(
        "{} teams, observed max {:.5}, E(max) if scores were true accuracies {:.5}",
        sample.len(),
        sample.max_score(),
        raw.summary.expectation
    );
    for mode in [CropMode::MatchExpectation, CropMode::MatchUpperCi] {
        let est = solve_crop_threshold(
            &sample,
            sample.max_score(),
            mode,
            &dep,
            &config,
            &SolverOptions::default(),
        )?;
        println!(
            "{mode:?}: SOTA estimate {:.4} ({} teams above), E(max) at crop {:.5}",
            est.sota, est.teams_above, est.summary.expectation
        );
    }
    Ok(())
}
