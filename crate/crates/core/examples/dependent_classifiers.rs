//! Classifiers that are correlated through a shared reference classifier.
//! Positive dependence shrinks the bias of the maximum.

use sota_bias::dependent::{
    DependenceSpec, ReferenceMode, SimulationConfig, conditional_probs, rho_bias_sweep, similarity,
    simulate_max,
};
use sota_bias::poisson_binomial::equally_spaced_theta;

fn main() -> sota_bias::Result<()> {
    let (m, n) = (5000, 10_000);
    let thetas = equally_spaced_theta(0.85, 0.9, m)?;
    let config = SimulationConfig::new(5000, 7);

    let spec = DependenceSpec::new(0.6, 0.9, ReferenceMode::Random)?;
    let p = conditional_probs(0.9, &spec)?;
    println!(
        "theta_j = 0.9: P(correct | ref correct) = {:.3}, P(correct | ref wrong) = {:.3}",
        p.given_success, p.given_failure
    );
    println!(
        "similarity of two such classifiers = {:.3}",
        similarity(0.9, 0.9, 0.36)?
    );

    for mode in [ReferenceMode::Random, ReferenceMode::Fixed] {
        let spec = DependenceSpec::new(0.6, 0.9, mode)?;
        let s = simulate_max(&thetas, n, &spec, &config)?.summary;
        println!(
            "{mode:?} reference: E(max) = {:.4}, sd = {:.5}",
            s.expectation, s.sd
        );
    }

    println!("{:>6} {:>10}", "rho0", "bias");
    let rows = rho_bias_sweep(&thetas, n, &spec, &[0.0, 0.2, 0.4, 0.6, 0.8, 0.95], &config)?;
    for row in rows {
        match row.bias {
            Some(b) => println!("{:>6} {:>10.5}", row.rho0, b),
            None => println!("{:>6} {:>10}", row.rho0, "infeasible"),
        }
    }
    Ok(())
}
