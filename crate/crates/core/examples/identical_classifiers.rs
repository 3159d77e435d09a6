//! Distribution of the best of m identical, independent classifiers and how
//! it compares with the interval of a single classifier.

use sota_bias::binomial::accuracy_interval;
use sota_bias::exact::{
    CohortSpec, TrialModel, max_cdf, max_distribution, score_exceedance, summarize,
};

fn main() -> sota_bias::Result<()> {
    let (m, n, theta) = (5000, 10_000, 0.9);
    let model = TrialModel::new(n, theta)?;
    let cohort = CohortSpec::new(m)?;
    let dist = max_distribution(&cohort, &model);
    let s = summarize(&dist, 0.05)?;
    let (lo, hi) = accuracy_interval(theta, n, 0.05)?;

    println!("m = {m}, n = {n}, theta = {theta}");
    println!(
        "E(max) = {:.4}, sd = {:.5}, CI = ({:.4}, {:.4})",
        s.expectation, s.sd, s.ci_low, s.ci_high
    );
    println!("single classifier CI = ({lo:.4}, {hi:.4})");

    // Chance that a new classifier at the single-classifier upper bound
    // actually beats the reported SOTA.
    let next = TrialModel::new(n, hi)?;
    println!(
        "P(new classifier with theta = {hi:.4} scores above E(max)) = {:.3}",
        score_exceedance(s.expectation, &next)
    );
    for z in [850, 890, 900] {
        println!(
            "P(min failures <= {z}) = {:.4}",
            max_cdf(z, &cohort, &model)?
        );
    }
    Ok(())
}
