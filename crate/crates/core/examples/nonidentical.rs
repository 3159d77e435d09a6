//! Independent classifiers whose accuracies are spread below the best one.
//! A wider spread leaves fewer serious contenders and less bias.

use sota_bias::exact::summarize;
use sota_bias::poisson_binomial::{
    equally_spaced_theta, nonidentical_max_distribution, theta_min_bias_sweep,
};

fn main() -> sota_bias::Result<()> {
    let (m, n) = (5000, 10_000);
    let thetas = equally_spaced_theta(0.85, 0.9, m)?;
    let s = summarize(&nonidentical_max_distribution(n, &thetas)?, 0.05)?;
    println!(
        "theta in [0.85, 0.9]: E(max) = {:.4}, CI = ({:.4}, {:.4})",
        s.expectation, s.ci_low, s.ci_high
    );

    println!("{:>10} {:>10}", "theta_min", "bias");
    for row in theta_min_bias_sweep(0.9, &[0.9, 0.89, 0.88, 0.86, 0.8, 0.7, 0.5], m, n)? {
        println!("{:>10} {:>10.5}", row.value, row.bias);
    }
    Ok(())
}
