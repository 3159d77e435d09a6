//! Debiased state-of-the-art estimates from a leaderboard.
//!
//! Observed scores are cropped (clipped from above) at a threshold `c` and the
//! cohort is re-simulated; `c` is chosen so that the simulated sample maximum
//! matches the observed one, either in expectation or at the upper end of its
//! interval. Every probe of one solve reuses the same random substreams.

use serde::{Deserialize, Serialize};

use crate::auc::{AucCohort, ScoreModel, replicate_max_auc};
use crate::dependent::{
    DependenceSpec, DependentCohort, ReferenceMode, SimulationConfig, feasible_theta_min,
};
use crate::error::{Error, Result, check_probability};
use crate::exact::{SummaryStats, empirical_quantile};
use crate::poisson_binomial::ThetaVector;
use crate::stream::{Purpose, StreamKey};

use rand::RngExt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Accuracy,
    Auc,
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "accuracy" => Ok(Self::Accuracy),
            "auc" => Ok(Self::Auc),
            other => Err(Error::Config(format!(
                "unknown metric `{other}` (accuracy | auc)"
            ))),
        }
    }
}

/// Observed per-team scores together with the test-set design.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeaderboardSample {
    teams: Vec<String>,
    scores: Vec<f64>,
    n: u64,
    metric: Metric,
    class_balance: Option<f64>,
    chance_level: f64,
}

impl LeaderboardSample {
    pub fn new(
        teams: Vec<String>,
        scores: Vec<f64>,
        n: u64,
        metric: Metric,
        class_balance: Option<f64>,
        chance_level: f64,
    ) -> Result<Self> {
        if teams.len() != scores.len() {
            return Err(Error::Domain(format!(
                "{} team names but {} scores",
                teams.len(),
                scores.len()
            )));
        }
        if scores.is_empty() {
            return Err(Error::EmptySample {
                removed: 0,
                chance_level,
            });
        }
        for &s in &scores {
            check_probability("score", s)?;
        }
        check_probability("chance_level", chance_level)?;
        if n == 0 {
            return Err(Error::Domain("test-set size n must be at least 1".into()));
        }
        if metric == Metric::Auc {
            match class_balance {
                Some(pi) if pi > 0.0 && pi < 1.0 => {}
                Some(pi) => {
                    return Err(Error::Domain(format!(
                        "class balance {pi} is not in (0, 1)"
                    )));
                }
                None => {
                    return Err(Error::Domain(
                        "AUC leaderboards need a class balance".into(),
                    ));
                }
            }
        }
        Ok(Self {
            teams,
            scores,
            n,
            metric,
            class_balance,
            chance_level,
        })
    }

    /// Sample with generated team names `team-1`, `team-2`, ...
    pub fn from_scores(
        scores: Vec<f64>,
        n: u64,
        metric: Metric,
        class_balance: Option<f64>,
        chance_level: f64,
    ) -> Result<Self> {
        let teams = (1..=scores.len()).map(|i| format!("team-{i}")).collect();
        Self::new(teams, scores, n, metric, class_balance, chance_level)
    }

    pub fn teams(&self) -> &[String] {
        &self.teams
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn class_balance(&self) -> Option<f64> {
        self.class_balance
    }

    pub fn chance_level(&self) -> f64 {
        self.chance_level
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn max_score(&self) -> f64 {
        self.scores
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Same design, different scores (team names are regenerated).
    pub fn with_scores(&self, scores: Vec<f64>) -> Result<Self> {
        Self::from_scores(
            scores,
            self.n,
            self.metric,
            self.class_balance,
            self.chance_level,
        )
    }

    /// `|{j : score_j > level}|`.
    pub fn teams_above(&self, level: f64) -> usize {
        self.scores.iter().filter(|&&s| s > level).count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Exclusion {
    pub sample: LeaderboardSample,
    pub removed: usize,
}

/// Drops teams scoring strictly below the chance level.
pub fn exclude_below_chance(sample: &LeaderboardSample) -> Result<Exclusion> {
    let chance = sample.chance_level;
    let (teams, scores): (Vec<String>, Vec<f64>) = sample
        .teams
        .iter()
        .zip(&sample.scores)
        .filter(|&(_, &s)| s >= chance)
        .map(|(t, &s)| (t.clone(), s))
        .unzip();
    let removed = sample.len() - scores.len();
    if scores.is_empty() {
        return Err(Error::EmptySample {
            removed,
            chance_level: chance,
        });
    }
    Ok(Exclusion {
        sample: LeaderboardSample {
            teams,
            scores,
            ..sample.clone()
        },
        removed,
    })
}

/// `min(score, c)` for every score.
pub fn crop(scores: &[f64], c: f64) -> Vec<f64> {
    scores.iter().map(|&s| s.min(c)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CropMode {
    /// `E(max)` of the cropped cohort equals the observed maximum.
    #[default]
    MatchExpectation,
    /// Upper interval bound of the simulated maximum equals the observed maximum.
    MatchUpperCi,
}

impl std::str::FromStr for CropMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "match-expectation" | "expectation" => Ok(Self::MatchExpectation),
            "match-upper-ci" | "upper-ci" => Ok(Self::MatchUpperCi),
            other => Err(Error::Config(format!(
                "unknown mode `{other}` (match-expectation | match-upper-ci)"
            ))),
        }
    }
}

/// Dependence used when re-simulating a leaderboard; the reference accuracy
/// is always the largest entry of the simulated vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CohortDependence {
    pub rho0: f64,
    pub reference_mode: ReferenceMode,
}

impl CohortDependence {
    pub const DEFAULT_RHO0: f64 = 0.6;

    pub fn new(rho0: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho0) {
            return Err(Error::Domain(format!("rho0 = {rho0} is not in [0, 1]")));
        }
        Ok(Self {
            rho0,
            reference_mode: ReferenceMode::Random,
        })
    }

    pub fn independent() -> Self {
        Self {
            rho0: 0.0,
            reference_mode: ReferenceMode::Random,
        }
    }

    fn spec_for(&self, theta0: f64) -> Result<DependenceSpec> {
        // A reference that is always right (or always wrong) is constant and
        // cannot correlate with anything.
        if self.rho0 == 0.0 || theta0 <= 0.0 || theta0 >= 1.0 {
            Ok(DependenceSpec::independent())
        } else {
            DependenceSpec::new(self.rho0, theta0, self.reference_mode)
        }
    }
}

impl Default for CohortDependence {
    fn default() -> Self {
        Self {
            rho0: Self::DEFAULT_RHO0,
            reference_mode: ReferenceMode::Random,
        }
    }
}

/// Simulated maxima of a candidate population vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxEstimate {
    pub summary: SummaryStats,
    /// Teams left out because they are infeasible under the dependence model.
    pub excluded: usize,
    #[serde(skip)]
    pub maxima: Vec<f64>,
}

/// Maximum scores of `values` simulated on the design of `sample`, one per replicate.
fn simulate_maxima(
    values: &[f64],
    sample: &LeaderboardSample,
    dependence: &CohortDependence,
    config: &SimulationConfig,
    key: &StreamKey,
) -> Result<(Vec<f64>, usize)> {
    config.validate()?;
    match sample.metric {
        Metric::Accuracy => {
            let theta0 = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let spec = dependence.spec_for(theta0)?;
            let floor = if spec.is_independent() {
                0.0
            } else {
                feasible_theta_min(&spec)
            };
            let kept: Vec<f64> = values.iter().copied().filter(|&t| t >= floor).collect();
            let excluded = values.len() - kept.len();
            let cohort = DependentCohort::new(&ThetaVector::new(kept)?, sample.n, spec)?;
            let n = sample.n as f64;
            let maxima = config.run_replicates(|r| (n - cohort.min_failures(key, r) as f64) / n);
            Ok((maxima, excluded))
        }
        Metric::Auc => {
            if dependence.rho0 != 0.0 {
                return Err(Error::Usage(
                    "AUC leaderboards are simulated with independent teams only; use rho0 = 0"
                        .into(),
                ));
            }
            let pi = sample.class_balance.expect("validated for AUC samples");
            // AUC 0 or 1 has no Normal model; nudge inside the open interval.
            let aucs: Vec<f64> = values.iter().map(|&a| a.clamp(1e-9, 1.0 - 1e-9)).collect();
            let cohort = AucCohort::new(aucs, sample.n, pi)?;
            let models: Vec<ScoreModel> = cohort.models();
            let maxima = config.run_replicates(|r| replicate_max_auc(&models, &cohort, key, r).0);
            Ok((maxima, 0))
        }
    }
}

/// One simulated leaderboard from the population vector `values`: every
/// feasible team's observed score in replicate `replicate`.
pub fn realize(
    values: &[f64],
    sample: &LeaderboardSample,
    dependence: &CohortDependence,
    key: &StreamKey,
    replicate: u64,
) -> Result<Vec<f64>> {
    match sample.metric {
        Metric::Accuracy => {
            let theta0 = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let spec = dependence.spec_for(theta0)?;
            let floor = if spec.is_independent() {
                0.0
            } else {
                feasible_theta_min(&spec)
            };
            let kept: Vec<f64> = values.iter().copied().filter(|&t| t >= floor).collect();
            let cohort = DependentCohort::new(&ThetaVector::new(kept)?, sample.n, spec)?;
            let n = sample.n as f64;
            Ok(cohort
                .success_counts(key, replicate)
                .into_iter()
                .map(|s| s as f64 / n)
                .collect())
        }
        Metric::Auc => {
            let pi = sample.class_balance.expect("validated for AUC samples");
            Ok(values
                .iter()
                .enumerate()
                .map(|(j, &a)| {
                    let model =
                        ScoreModel::standard(a.clamp(1e-9, 1.0 - 1e-9)).expect("AUC in (0, 1)");
                    let mut rng = key.rng(Purpose::Scores, replicate, j as u64);
                    crate::auc::sample_empirical_auc(&model, sample.n, pi, &mut rng).0
                })
                .collect())
        }
    }
}

/// Expectation, spread and interval of the simulated sample maximum of `values`.
pub fn expected_max(
    values: &[f64],
    sample: &LeaderboardSample,
    dependence: &CohortDependence,
    config: &SimulationConfig,
) -> Result<MaxEstimate> {
    let (maxima, excluded) = simulate_maxima(values, sample, dependence, config, &config.key())?;
    Ok(MaxEstimate {
        summary: SummaryStats::from_values(&maxima, config.alpha)?,
        excluded,
        maxima,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Accepted distance between the matched statistic and the target.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tolerance: 2e-4,
            max_iterations: 60,
        }
    }
}

/// Result of one cropping solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SotaEstimate {
    pub mode: CropMode,
    pub target: f64,
    /// Crop threshold `c`; equals the observed maximum when no cropping is needed.
    pub crop_threshold: f64,
    /// `max(crop(scores, c))`, the debiased estimate.
    pub sota: f64,
    pub cropped: bool,
    /// Matched statistic at `c`.
    pub achieved: f64,
    pub summary: SummaryStats,
    pub teams_above: usize,
    pub excluded_infeasible: usize,
    pub replications: u64,
    pub iterations: usize,
    pub bootstrap: Option<BootstrapSummary>,
}

fn matched_statistic(maxima: &[f64], mode: CropMode, alpha: f64) -> f64 {
    match mode {
        CropMode::MatchExpectation => maxima.iter().sum::<f64>() / maxima.len() as f64,
        CropMode::MatchUpperCi => {
            let mut sorted = maxima.to_vec();
            sorted.sort_by(f64::total_cmp);
            empirical_quantile(&sorted, 1.0 - alpha / 2.0)
        }
    }
}

struct Probe {
    c: f64,
    value: f64,
    maxima: Vec<f64>,
    excluded: usize,
}

/// Finds the crop threshold whose simulated statistic matches `target`.
///
/// The bracket is `[chance_level, max(scores)]`; if the uncropped cohort
/// already does not exceed the target, no cropping is applied. The root is
/// located by Illinois-modified regula falsi, which keeps a bracket at all
/// times.
pub fn solve_crop_threshold(
    sample: &LeaderboardSample,
    target: f64,
    mode: CropMode,
    dependence: &CohortDependence,
    config: &SimulationConfig,
    options: &SolverOptions,
) -> Result<SotaEstimate> {
    if options.tolerance.is_nan() || options.tolerance <= 0.0 {
        return Err(Error::Domain("solver tolerance must be positive".into()));
    }
    let key = config.key();
    let probe = |c: f64| -> Result<Probe> {
        let (maxima, excluded) =
            simulate_maxima(&crop(sample.scores(), c), sample, dependence, config, &key)?;
        Ok(Probe {
            c,
            value: matched_statistic(&maxima, mode, config.alpha),
            maxima,
            excluded,
        })
    };
    let top = sample.max_score();
    let finish = |p: Probe, cropped: bool, iterations: usize| -> Result<SotaEstimate> {
        let sota = if cropped { p.c } else { top };
        Ok(SotaEstimate {
            mode,
            target,
            crop_threshold: p.c,
            sota,
            cropped,
            achieved: p.value,
            summary: SummaryStats::from_values(&p.maxima, config.alpha)?,
            teams_above: sample.teams_above(sota),
            excluded_infeasible: p.excluded,
            replications: config.replications,
            iterations,
            bootstrap: None,
        })
    };

    let mut hi = probe(top)?;
    if hi.value <= target + options.tolerance {
        return finish(hi, false, 1);
    }
    let floor = sample.chance_level.min(top);
    let mut lo = probe(floor)?;
    if lo.value >= target - options.tolerance {
        // Even the most aggressive crop does not bring the statistic down.
        return finish(lo, true, 2);
    }
    let mut iterations = 2;
    let mut side = 0_i8;
    let (mut f_lo, mut f_hi) = (lo.value - target, hi.value - target);
    while iterations < options.max_iterations {
        let width = hi.c - lo.c;
        let mut c = hi.c - f_hi * width / (f_hi - f_lo);
        // Stay strictly inside; fall back to bisection on degenerate steps.
        if !(c > lo.c && c < hi.c) {
            c = 0.5 * (lo.c + hi.c);
        }
        if c <= lo.c || c >= hi.c {
            break;
        }
        let p = probe(c)?;
        iterations += 1;
        let f = p.value - target;
        if f.abs() <= options.tolerance {
            return finish(p, true, iterations);
        }
        if f > 0.0 {
            hi = p;
            f_hi = f;
            if side == 1 {
                f_lo /= 2.0;
            }
            side = 1;
        } else {
            lo = p;
            f_lo = f;
            if side == -1 {
                f_hi /= 2.0;
            }
            side = -1;
        }
    }
    let best = if (hi.value - target).abs() <= (lo.value - target).abs() {
        hi
    } else {
        lo
    };
    finish(best, true, iterations)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BootstrapStatistic {
    /// Simulated maximum of each resample cropped at a fixed threshold.
    ExpectedMaxAt { crop: f64 },
    /// Crop threshold re-solved on each resample against its own maximum.
    CropThreshold { mode: CropMode },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapConfig {
    /// Number of bootstrap resamples `B`.
    pub samples: u64,
    /// Simulation replications per resample.
    pub replications: u64,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        Self {
            samples: 1000,
            replications: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapSummary {
    pub statistic: BootstrapStatistic,
    pub samples: u64,
    pub replications: u64,
    /// Equal-tailed interval. For `ExpectedMaxAt` it is taken over the
    /// simulated maxima pooled across resamples, so it covers both resampling
    /// and test-set noise; for `CropThreshold` over the per-resample thresholds.
    pub low: f64,
    pub high: f64,
    /// Mean of the per-resample estimates.
    pub mean: f64,
    /// Standard deviation of the per-resample estimates.
    pub sd: f64,
    pub estimates: Vec<f64>,
}

/// Bootstrap over teams: `B` resamples of size `m` drawn with replacement.
///
/// Infeasible teams are excluded after resampling.
pub fn bootstrap_ci(
    sample: &LeaderboardSample,
    statistic: BootstrapStatistic,
    bootstrap: &BootstrapConfig,
    dependence: &CohortDependence,
    config: &SimulationConfig,
    options: &SolverOptions,
) -> Result<BootstrapSummary> {
    if bootstrap.samples < 2 {
        return Err(Error::Domain("bootstrap needs at least 2 resamples".into()));
    }
    config.validate()?;
    let root = config.key();
    let m = sample.len();
    let mut estimates = Vec::with_capacity(bootstrap.samples as usize);
    let mut pooled = Vec::new();
    for b in 0..bootstrap.samples {
        let mut rng = root.rng(Purpose::Bootstrap, b, 0);
        let scores: Vec<f64> = (0..m)
            .map(|_| sample.scores[rng.random_range(0..m)])
            .collect();
        let inner = SimulationConfig {
            replications: bootstrap.replications,
            seed: root.derive(Purpose::BootstrapSimulation, b).seed(),
            ..*config
        };
        match statistic {
            BootstrapStatistic::ExpectedMaxAt { crop: c } => {
                let resample = sample.with_scores(crop(&scores, c))?;
                let (maxima, _) = simulate_maxima(
                    resample.scores(),
                    &resample,
                    dependence,
                    &inner,
                    &inner.key(),
                )?;
                estimates.push(maxima.iter().sum::<f64>() / maxima.len() as f64);
                pooled.extend(maxima);
            }
            BootstrapStatistic::CropThreshold { mode } => {
                let resample = sample.with_scores(scores)?;
                let est = solve_crop_threshold(
                    &resample,
                    resample.max_score(),
                    mode,
                    dependence,
                    &inner,
                    options,
                )?;
                estimates.push(est.sota);
            }
        }
    }
    let b = estimates.len() as f64;
    let mean = estimates.iter().sum::<f64>() / b;
    let sd = (estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (b - 1.0)).sqrt();
    let interval_of = |values: &[f64]| {
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        (
            empirical_quantile(&sorted, config.alpha / 2.0),
            empirical_quantile(&sorted, 1.0 - config.alpha / 2.0),
        )
    };
    let (low, high) = if pooled.is_empty() {
        interval_of(&estimates)
    } else {
        interval_of(&pooled)
    };
    Ok(BootstrapSummary {
        statistic,
        samples: bootstrap.samples,
        replications: bootstrap.replications,
        low,
        high,
        mean,
        sd,
        estimates,
    })
}

/// Cropping solve for an AUC leaderboard, with independent teams.
pub fn auc_sota_crop(
    sample: &LeaderboardSample,
    mode: CropMode,
    config: &SimulationConfig,
    options: &SolverOptions,
) -> Result<SotaEstimate> {
    if sample.metric != Metric::Auc {
        return Err(Error::Usage(
            "auc_sota_crop needs an AUC leaderboard".into(),
        ));
    }
    solve_crop_threshold(
        sample,
        sample.max_score(),
        mode,
        &CohortDependence::independent(),
        config,
        options,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn acc(scores: Vec<f64>, n: u64) -> LeaderboardSample {
        LeaderboardSample::from_scores(scores, n, Metric::Accuracy, None, 0.5).unwrap()
    }

    #[test]
    fn cropping_clips_from_above() {
        assert_eq!(crop(&[0.8, 0.9, 0.95], 0.9), vec![0.8, 0.9, 0.9]);
        assert_eq!(crop(&[0.8, 0.9, 0.95], 1.0), vec![0.8, 0.9, 0.95]);
    }

    #[test]
    fn chance_exclusion() {
        let s = acc(vec![0.4, 0.6, 0.5, 0.9], 100);
        let e = exclude_below_chance(&s).unwrap();
        assert_eq!(e.removed, 1);
        assert_eq!(e.sample.scores(), &[0.6, 0.5, 0.9]);
        assert_eq!(e.sample.teams(), &["team-2", "team-3", "team-4"]);
        let none = exclude_below_chance(&e.sample).unwrap();
        assert_eq!(none.removed, 0);
        assert_eq!(none.sample, e.sample);
        let all = acc(vec![0.1, 0.2], 100);
        assert!(matches!(
            exclude_below_chance(&all),
            Err(Error::EmptySample { removed: 2, .. })
        ));
    }

    #[test]
    fn sample_validation() {
        assert!(
            LeaderboardSample::from_scores(vec![1.2], 10, Metric::Accuracy, None, 0.5).is_err()
        );
        assert!(LeaderboardSample::from_scores(vec![0.7], 10, Metric::Auc, None, 0.5).is_err());
        assert!(
            LeaderboardSample::from_scores(vec![0.7], 10, Metric::Auc, Some(1.0), 0.5).is_err()
        );
        assert!(LeaderboardSample::from_scores(vec![0.7], 0, Metric::Accuracy, None, 0.5).is_err());
    }

    #[test]
    fn teams_above_is_strict() {
        let s = acc(vec![0.9, 0.91, 0.92, 0.91], 100);
        assert_eq!(s.teams_above(0.91), 1);
        assert_eq!(s.teams_above(0.5), 4);
    }

    #[test]
    fn single_team_is_unbiased() {
        let s = acc(vec![0.9], 3000);
        let e = expected_max(
            &[0.9],
            &s,
            &CohortDependence::independent(),
            &SimulationConfig::new(4000, 3),
        )
        .unwrap();
        // sd of one accuracy is sqrt(0.09 / 3000) ~ 0.0055; 4 MC errors ~ 3.5e-4.
        assert!(
            (e.summary.expectation - 0.9).abs() < 3.5e-4,
            "{:?}",
            e.summary
        );
    }

    #[test]
    fn no_crop_when_max_is_not_inflated() {
        // One clear leader: the simulated max sits on the leader, below its score.
        let mut scores = vec![0.80; 50];
        scores.push(0.95);
        let s = acc(scores, 2000);
        let est = solve_crop_threshold(
            &s,
            0.95,
            CropMode::MatchExpectation,
            &CohortDependence::independent(),
            &SimulationConfig::new(500, 1),
            &SolverOptions::default(),
        )
        .unwrap();
        assert!(!est.cropped);
        assert_eq!(est.sota, 0.95);
        assert_eq!(est.teams_above, 0);
    }

    #[test]
    fn mode_parsing() {
        assert_eq!(
            "match-upper-ci".parse::<CropMode>().unwrap(),
            CropMode::MatchUpperCi
        );
        assert_eq!(
            "match-expectation".parse::<CropMode>().unwrap(),
            CropMode::MatchExpectation
        );
        assert!("median".parse::<CropMode>().is_err());
        assert_eq!("auc".parse::<Metric>().unwrap(), Metric::Auc);
    }

    #[test]
    fn bootstrap_needs_two_samples() {
        let s = acc(vec![0.9, 0.8], 100);
        let r = bootstrap_ci(
            &s,
            BootstrapStatistic::ExpectedMaxAt { crop: 1.0 },
            &BootstrapConfig {
                samples: 1,
                replications: 10,
            },
            &CohortDependence::independent(),
            &SimulationConfig::new(10, 1),
            &SolverOptions::default(),
        );
        assert!(r.is_err());
    }
}
