use proptest::prelude::*;
use sota_bias::dependent::{
    DependenceSpec, DependentCohort, ReferenceMode, SimulationConfig, conditional_probs,
    feasible_theta_max, feasible_theta_min, rho_bias_sweep, simulate_max,
};
use sota_bias::exact::summarize;
use sota_bias::poisson_binomial::{
    ThetaVector, equally_spaced_theta, nonidentical_max_distribution,
};

proptest! {
    #[test]
    fn conditionals_preserve_marginal_and_correlation(
        theta0 in 0.02f64..0.98,
        rho0 in 0.0f64..=1.0,
        u in 0.0f64..=1.0,
    ) {
        let spec = DependenceSpec::new(rho0, theta0, ReferenceMode::Random).unwrap();
        let (lo, hi) = (feasible_theta_min(&spec), feasible_theta_max(&spec));
        let theta = (lo + u * (hi - lo)).clamp(1e-6, 1.0 - 1e-6);
        prop_assume!(theta >= lo && theta <= hi);
        let p = conditional_probs(theta, &spec).unwrap();
        prop_assert!((theta0 * p.given_success + (1.0 - theta0) * p.given_failure - theta).abs() < 1e-12);
        let cov = theta0 * (p.given_success - theta);
        let want = rho0 * (theta * (1.0 - theta) * theta0 * (1.0 - theta0)).sqrt();
        prop_assert!((cov - want).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&p.given_success) && (0.0..=1.0).contains(&p.given_failure));
    }

    #[test]
    fn feasibility_boundary_is_exact(theta0 in 0.02f64..0.98, rho0 in 0.05f64..=1.0) {
        let spec = DependenceSpec::new(rho0, theta0, ReferenceMode::Random).unwrap();
        let lo = feasible_theta_min(&spec);
        let hi = feasible_theta_max(&spec);
        prop_assert!(conditional_probs(lo, &spec).unwrap().given_failure.abs() < 1e-12);
        prop_assert!((conditional_probs(hi, &spec).unwrap().given_success - 1.0).abs() < 1e-12);
        if lo > 1e-6 {
            prop_assert!(conditional_probs(lo - 1e-6, &spec).is_err());
        }
        if hi < 1.0 - 1e-6 {
            prop_assert!(conditional_probs(hi + 1e-6, &spec).is_err());
        }
    }
}

#[test]
fn worked_example_conditionals() {
    let spec = DependenceSpec::new(0.6, 0.9, ReferenceMode::Random).unwrap();
    let p = conditional_probs(0.9, &spec).unwrap();
    assert!((p.given_success - 0.96).abs() < 1e-12);
    assert!((p.given_failure - 0.36).abs() < 1e-12);
    assert!((feasible_theta_min(&spec) - 0.36 * 9.0 / (1.0 + 0.36 * 9.0)).abs() < 1e-12);
    let half = DependenceSpec::new(1.0, 0.5, ReferenceMode::Random).unwrap();
    assert!((feasible_theta_min(&half) - 0.5).abs() < 1e-12);
}

fn corr(a: &[bool], b: &[bool]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().filter(|&&x| x).count() as f64 / n;
    let mb = b.iter().filter(|&&x| x).count() as f64 / n;
    let mab = a.iter().zip(b).filter(|(x, y)| **x && **y).count() as f64 / n;
    (mab - ma * mb) / (ma * (1.0 - ma) * mb * (1.0 - mb)).sqrt()
}

#[test]
fn per_item_outcomes_recover_marginals_and_correlations() {
    let thetas = ThetaVector::new(vec![0.8, 0.85, 0.9]).unwrap();
    let n = 40_000;
    let spec = DependenceSpec::new(0.6, 0.9, ReferenceMode::Random).unwrap();
    let cohort = DependentCohort::new(&thetas, n, spec).unwrap();
    let out = cohort.outcomes(&SimulationConfig::new(1, 11).key(), 0);
    for (j, &t) in thetas.as_slice().iter().enumerate() {
        let rate = out.classifiers[j].iter().filter(|&&x| x).count() as f64 / n as f64;
        let se = (t * (1.0 - t) / n as f64).sqrt();
        assert!((rate - t).abs() < 4.0 * se, "marginal {j}: {rate} vs {t}");
        let r0 = corr(&out.classifiers[j], &out.reference);
        assert!((r0 - 0.6).abs() < 0.03, "corr with reference {r0}");
    }
    let r12 = corr(&out.classifiers[1], &out.classifiers[2]);
    assert!((r12 - 0.36).abs() < 0.03, "pairwise corr {r12}");
}

#[test]
fn fixed_reference_places_exact_count() {
    let thetas = ThetaVector::identical(0.9, 2).unwrap();
    let spec = DependenceSpec::new(0.6, 0.9, ReferenceMode::Fixed).unwrap();
    let cohort = DependentCohort::new(&thetas, 3000, spec).unwrap();
    let key = SimulationConfig::new(1, 3).key();
    for r in 0..5 {
        let out = cohort.outcomes(&key, r);
        assert_eq!(out.reference.iter().filter(|&&x| x).count(), 2700);
        assert_eq!(cohort.reference_successes(&key, r), 2700);
    }
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let thetas = equally_spaced_theta(0.85, 0.9, 300).unwrap();
    let spec = DependenceSpec::new(0.6, 0.9, ReferenceMode::Random).unwrap();
    let base = SimulationConfig::new(3000, 99);
    let one = simulate_max(&thetas, 5000, &spec, &base.with_workers(1)).unwrap();
    for w in [2, 3, 8] {
        let other = simulate_max(&thetas, 5000, &spec, &base.with_workers(w)).unwrap();
        assert_eq!(one.distribution.cdf(), other.distribution.cdf());
        assert_eq!(one.summary, other.summary);
    }
}

#[test]
fn independence_reproduces_closed_form() {
    let thetas = equally_spaced_theta(0.85, 0.9, 1000).unwrap();
    let n = 10_000;
    let config = SimulationConfig::new(20_000, 5);
    let sim = simulate_max(&thetas, n, &DependenceSpec::independent(), &config).unwrap();
    let exact = summarize(&nonidentical_max_distribution(n, &thetas).unwrap(), 0.05).unwrap();
    let se = exact.sd / (config.replications as f64).sqrt();
    assert!((sim.summary.expectation - exact.expectation).abs() < 4.0 * se);
    assert!((sim.summary.sd / exact.sd - 1.0).abs() < 0.05);
}

#[test]
fn bias_shrinks_as_dependence_grows() {
    let thetas = equally_spaced_theta(0.88, 0.9, 500).unwrap();
    let spec = DependenceSpec::new(0.5, 0.9, ReferenceMode::Random).unwrap();
    let rows = rho_bias_sweep(
        &thetas,
        10_000,
        &spec,
        &[0.0, 0.3, 0.5, 0.7],
        &SimulationConfig::new(4000, 2),
    )
    .unwrap();
    let bias: Vec<f64> = rows.iter().map(|r| r.bias.unwrap()).collect();
    for w in bias.windows(2) {
        assert!(w[1] < w[0], "{bias:?}");
    }
}

#[test]
fn random_reference_inflates_variance() {
    let thetas = ThetaVector::identical(0.9, 500).unwrap();
    let config = SimulationConfig::new(4000, 8);
    let sd = |mode| {
        let spec = DependenceSpec::new(0.6, 0.9, mode).unwrap();
        simulate_max(&thetas, 10_000, &spec, &config)
            .unwrap()
            .summary
            .sd
    };
    let (random, fixed) = (sd(ReferenceMode::Random), sd(ReferenceMode::Fixed));
    assert!(random > 1.5 * fixed, "{random} vs {fixed}");
}

#[test]
fn infeasible_theta_is_rejected() {
    let thetas = ThetaVector::new(vec![0.3, 0.9]).unwrap();
    let spec = DependenceSpec::new(0.9, 0.9, ReferenceMode::Random).unwrap();
    assert!(DependentCohort::new(&thetas, 100, spec).is_err());
    let rows = rho_bias_sweep(&thetas, 100, &spec, &[0.9], &SimulationConfig::new(10, 1)).unwrap();
    assert!(rows[0].truncated && rows[0].bias.is_none());
}
