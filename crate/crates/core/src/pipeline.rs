//! End-to-end analyses that turn a [`RunConfig`] into report sections and
//! plot-data tables.

use crate::auc::{AucCohort, simulate_max_auc};
use crate::binomial::accuracy_interval;
use crate::dependent::{DependenceSpec, simulate_max};
use crate::error::{Error, Result};
use crate::exact::{
    CohortSpec, MaxDistribution, SweepBase, SweepGrid, TrialModel, bias_sweep, max_distribution,
    score_exceedance, summarize,
};
use crate::io::config::RunConfig;
use crate::io::report::{
    AucAnalysis, EstimateAnalysis, ExactAnalysis, PlotTable, SimulateAnalysis, UncroppedMax,
};
use crate::poisson_binomial::{equally_spaced_theta, nonidentical_max_distribution};
use crate::sota::{
    BootstrapStatistic, LeaderboardSample, Metric, bootstrap_ci, crop, exclude_below_chance,
    expected_max, realize, solve_crop_threshold,
};

fn required<T>(value: Option<T>, key: &str) -> Result<T> {
    value.ok_or_else(|| Error::Config(format!("`{key}` is required for this analysis")))
}

/// `z`, accuracy, pmf and cdf of a max distribution.
pub fn distribution_table(name: &str, dist: &MaxDistribution) -> PlotTable {
    let mut t = PlotTable::new(name, &["failures", "accuracy", "pmf", "cdf"]);
    for (z, (p, c)) in dist.pmf().iter().zip(dist.cdf()).enumerate() {
        t.push(vec![z as f64, dist.accuracy(z as u64), *p, *c]);
    }
    t
}

/// Closed-form analysis of `m` identical independent classifiers.
pub fn exact_analysis(
    config: &RunConfig,
    sweep: Option<&SweepGrid>,
) -> Result<(ExactAnalysis, Vec<PlotTable>)> {
    let m = required(config.m, "m")?;
    let n = required(config.n, "n")?;
    let theta = required(config.theta, "theta")?;
    let model = TrialModel::new(n, theta)?;
    let dist = max_distribution(&CohortSpec::new(m)?, &model);
    let summary = summarize(&dist, config.alpha)?;
    let single_classifier_ci = accuracy_interval(theta, n, config.alpha)?;
    let next = TrialModel::new(n, single_classifier_ci.1)?;

    let mut plots = vec![distribution_table("max_distribution", &dist)];
    let single = max_distribution(&CohortSpec::new(1)?, &model);
    plots.push(distribution_table("single_distribution", &single));

    let rows = match sweep {
        Some(grid) => {
            let rows = bias_sweep(grid, SweepBase { m, n, theta })?;
            let mut t = PlotTable::new("bias_sweep", &["value", "expectation", "bias"]);
            for r in &rows {
                t.push(vec![r.value, r.expectation, r.bias]);
            }
            plots.push(t);
            Some(rows)
        }
        None => None,
    };
    Ok((
        ExactAnalysis {
            m,
            n,
            theta,
            summary,
            single_classifier_ci,
            next_above_upper_ci: score_exceedance(summary.ci_high, &next),
            next_above_expectation: score_exceedance(summary.expectation, &next),
            sweep: rows,
        },
        plots,
    ))
}

/// Monte-Carlo analysis of `m` classifiers equally spaced on
/// `[theta_min, theta]` under the configured dependence.
pub fn simulate_analysis(config: &RunConfig) -> Result<(SimulateAnalysis, Vec<PlotTable>)> {
    let m = required(config.m, "m")? as usize;
    let n = required(config.n, "n")?;
    let theta_max = required(config.theta, "theta")?;
    let theta_min = config.theta_min.unwrap_or(theta_max);
    let thetas = equally_spaced_theta(theta_min, theta_max, m)?;
    let theta0 = config.theta0.unwrap_or(theta_max);
    let spec = if config.rho0 == 0.0 {
        DependenceSpec::independent()
    } else {
        DependenceSpec::new(config.rho0, theta0, config.reference_mode)?
    };
    let sim = simulate_max(&thetas, n, &spec, &config.simulation())?;
    let exact = nonidentical_max_distribution(n, &thetas)?;
    let plots = vec![
        distribution_table("simulated_distribution", &sim.distribution),
        distribution_table("independent_distribution", &exact),
    ];
    Ok((
        SimulateAnalysis {
            m,
            n,
            theta_min,
            theta_max,
            rho0: config.rho0,
            theta0,
            reference_mode: config.reference_mode,
            summary: sim.summary,
            independent_exact: summarize(&exact, config.alpha)?,
        },
        plots,
    ))
}

/// Sample-maximum AUC of `m` independent teams sharing the AUC `theta`.
pub fn auc_analysis(config: &RunConfig) -> Result<(AucAnalysis, Vec<PlotTable>)> {
    let m = required(config.m, "m")? as usize;
    let n = required(config.n, "n")?;
    let pi = required(config.pi, "pi")?;
    let auc = required(config.theta, "theta")?;
    let sim = config.simulation();
    let many = simulate_max_auc(&AucCohort::identical(auc, m, n, pi)?, &sim)?;
    let one = simulate_max_auc(&AucCohort::identical(auc, 1, n, pi)?, &sim)?;
    let plots = vec![histogram(
        "max_auc_histogram",
        &[
            ("max", many.maxima.as_slice()),
            ("single", one.maxima.as_slice()),
        ],
        100,
    )];
    Ok((
        AucAnalysis {
            m,
            n,
            pi,
            auc,
            summary: many.summary,
            single_classifier: one.summary,
            redrawn: many.redrawn + one.redrawn,
        },
        plots,
    ))
}

/// Shared-bin histogram of several series.
pub fn histogram(name: &str, series: &[(&str, &[f64])], bins: usize) -> PlotTable {
    let mut columns = vec!["bin_low", "bin_high"];
    columns.extend(series.iter().map(|(n, _)| *n));
    let mut t = PlotTable::new(name, &columns);
    let all = series.iter().flat_map(|(_, v)| v.iter().copied());
    let (lo, hi) = all.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
        (a.min(v), b.max(v))
    });
    if !lo.is_finite() || bins == 0 {
        return t;
    }
    let width = if hi > lo {
        (hi - lo) / bins as f64
    } else {
        1.0
    };
    let mut counts = vec![vec![0.0; series.len()]; bins];
    for (k, (_, values)) in series.iter().enumerate() {
        for &v in *values {
            let b = (((v - lo) / width) as usize).min(bins - 1);
            counts[b][k] += 1.0;
        }
    }
    for (b, row) in counts.into_iter().enumerate() {
        let mut r = vec![lo + b as f64 * width, lo + (b + 1) as f64 * width];
        r.extend(row);
        t.push(r);
    }
    t
}

/// The full cropping pipeline on a leaderboard: chance exclusion, the
/// uncropped simulation, one solve per configured mode, and bootstraps.
pub fn estimate_analysis(
    input: &LeaderboardSample,
    config: &RunConfig,
) -> Result<(EstimateAnalysis, Vec<PlotTable>)> {
    let excl = exclude_below_chance(input)?;
    let sample = excl.sample;
    let dependence = config.dependence();
    let sim = config.simulation();
    let solver = config.solver();
    let raw_max = sample.max_score();
    let single_classifier_ci = match sample.metric() {
        Metric::Accuracy => Some(accuracy_interval(raw_max, sample.n(), config.alpha)?),
        Metric::Auc => None,
    };

    let uncropped = expected_max(sample.scores(), &sample, &dependence, &sim)?;
    let want_bootstrap = config.bootstrap >= 2;
    let bootstrap_at = |c: f64| {
        bootstrap_ci(
            &sample,
            BootstrapStatistic::ExpectedMaxAt { crop: c },
            &config.bootstrap_config(),
            &dependence,
            &sim,
            &solver,
        )
    };
    let uncropped = UncroppedMax {
        summary: uncropped.summary,
        excluded_infeasible: uncropped.excluded,
        bootstrap: if want_bootstrap {
            Some(bootstrap_at(1.0)?)
        } else {
            None
        },
    };

    let mut estimates = Vec::new();
    let mut series: Vec<(String, Vec<f64>)> = vec![("observed".into(), sample.scores().to_vec())];
    for mode in config.modes() {
        let mut est = solve_crop_threshold(&sample, raw_max, mode, &dependence, &sim, &solver)?;
        if want_bootstrap {
            est.bootstrap = Some(bootstrap_at(est.crop_threshold)?);
        }
        let cropped = crop(sample.scores(), est.crop_threshold);
        let realized = realize(&cropped, &sample, &dependence, &sim.key(), 0)?;
        let tag = match mode {
            crate::sota::CropMode::MatchExpectation => "expectation",
            crate::sota::CropMode::MatchUpperCi => "upper_ci",
        };
        series.push((format!("cropped_{tag}"), cropped));
        series.push((format!("realized_{tag}"), realized));
        estimates.push(est);
    }
    let refs: Vec<(&str, &[f64])> = series
        .iter()
        .map(|(n, v)| (n.as_str(), v.as_slice()))
        .collect();
    let plots = vec![histogram("score_histogram", &refs, 100)];
    Ok((
        EstimateAnalysis {
            metric: sample.metric(),
            teams_in_file: input.len(),
            removed_below_chance: excl.removed,
            teams: sample.len(),
            raw_max,
            single_classifier_ci,
            uncropped,
            estimates,
        },
        plots,
    ))
}
