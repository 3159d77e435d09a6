//! Closed-form distribution of the sample-maximum accuracy for `m`
//! independent classifiers sharing one success probability.
//!
//! Everything is phrased on the failure scale: `Z` is the smallest failure
//! count among the `m` classifiers, and the sample-maximum accuracy is
//! `(n - Z) / n`.

use serde::{Deserialize, Serialize};

use crate::binomial::BinomialTails;
use crate::error::{Error, Result, check_probability};

/// One classifier's Bernoulli setting: `n` test items, success probability `theta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialModel {
    n: u64,
    theta: f64,
}

impl TrialModel {
    pub fn new(n: u64, theta: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("test-set size n must be at least 1".into()));
        }
        check_probability("theta", theta)?;
        Ok(Self { n, theta })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Tails of the failure count `X ~ B(n, 1 - theta)`.
    pub fn failure_tails(&self) -> BinomialTails {
        BinomialTails::new(self.n, 1.0 - self.theta).expect("theta validated at construction")
    }
}

/// Number of classifiers in the cohort.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohortSpec {
    m: u64,
}

impl CohortSpec {
    pub fn new(m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("cohort size m must be at least 1".into()));
        }
        Ok(Self { m })
    }

    pub fn m(&self) -> u64 {
        self.m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Origin {
    Exact,
    Simulated { replications: u64 },
}

/// Distribution of the minimum failure count `Z` over `z = 0..=n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxDistribution {
    n: u64,
    cdf: Vec<f64>,
    pmf: Vec<f64>,
    origin: Origin,
}

impl MaxDistribution {
    /// Builds an exact distribution from its cdf; the pmf is obtained by differencing.
    pub(crate) fn from_cdf(n: u64, mut cdf: Vec<f64>) -> Self {
        debug_assert_eq!(cdf.len(), n as usize + 1);
        // Guard monotonicity against last-ulp rounding.
        for z in 1..cdf.len() {
            if cdf[z] < cdf[z - 1] {
                cdf[z] = cdf[z - 1];
            }
        }
        let mut pmf = Vec::with_capacity(cdf.len());
        let mut prev = 0.0;
        for &f in &cdf {
            pmf.push(f - prev);
            prev = f;
        }
        Self {
            n,
            cdf,
            pmf,
            origin: Origin::Exact,
        }
    }

    /// Empirical distribution from per-replicate minimum failure counts.
    pub fn from_counts(n: u64, counts: &[u64]) -> Self {
        debug_assert_eq!(counts.len(), n as usize + 1);
        let total: u64 = counts.iter().sum();
        let r = total as f64;
        let pmf = counts.iter().map(|&c| c as f64 / r).collect();
        let mut running = 0_u64;
        let cdf = counts
            .iter()
            .map(|&c| {
                running += c;
                running as f64 / r
            })
            .collect();
        Self {
            n,
            cdf,
            pmf,
            origin: Origin::Simulated {
                replications: total,
            },
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn origin(&self) -> Origin {
        self.origin
    }

    /// `F(z) = P(Z <= z)`.
    pub fn cdf(&self) -> &[f64] {
        &self.cdf
    }

    /// `f(z) = P(Z = z)`.
    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    /// Sample-maximum accuracy corresponding to failure count `z`.
    pub fn accuracy(&self, z: u64) -> f64 {
        (self.n - z) as f64 / self.n as f64
    }

    pub fn expectation(&self) -> f64 {
        self.pmf
            .iter()
            .enumerate()
            .map(|(z, &p)| p * self.accuracy(z as u64))
            .sum()
    }

    pub fn sd(&self) -> f64 {
        let mean = self.expectation();
        let var: f64 = self
            .pmf
            .iter()
            .enumerate()
            .map(|(z, &p)| {
                let d = self.accuracy(z as u64) - mean;
                p * d * d
            })
            .sum();
        var.max(0.0).sqrt()
    }

    /// Smallest `z` with `F(z) >= prob`.
    pub fn failure_quantile(&self, prob: f64) -> u64 {
        self.cdf
            .iter()
            .position(|&f| f >= prob)
            .unwrap_or(self.n as usize) as u64
    }
}

/// Mean, spread and equal-tailed interval of a sample-maximum statistic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub expectation: f64,
    pub sd: f64,
    pub alpha: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl SummaryStats {
    /// Summary of a list of continuous values (e.g. simulated maximum AUCs).
    ///
    /// The interval uses the same "smallest value whose empirical cdf reaches
    /// the level" convention as the discrete case.
    pub fn from_values(values: &[f64], alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if values.is_empty() {
            return Err(Error::Usage("no values to summarise".into()));
        }
        let r = values.len() as f64;
        let mean = values.iter().sum::<f64>() / r;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / r;
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(Self {
            expectation: mean,
            sd: var.sqrt(),
            alpha,
            ci_low: empirical_quantile(&sorted, alpha / 2.0),
            ci_high: empirical_quantile(&sorted, 1.0 - alpha / 2.0),
        })
    }
}

/// Smallest order statistic whose empirical cdf is at least `prob`.
pub(crate) fn empirical_quantile(sorted: &[f64], prob: f64) -> f64 {
    let r = sorted.len();
    let k = ((prob * r as f64).ceil() as usize).clamp(1, r);
    sorted[k - 1]
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("alpha = {alpha} is not in (0, 1)")))
    }
}

/// `P_x = P(X <= x)` for the failure count `X ~ B(n, 1 - theta)` of one classifier.
pub fn binomial_tail(x: u64, model: &TrialModel) -> Result<f64> {
    if x > model.n {
        return Err(Error::Domain(format!(
            "failure count {x} exceeds n = {}",
            model.n
        )));
    }
    Ok(model.failure_tails().cdf(x))
}

/// `1 - (1 - P)^m` from `ln(1 - P)`, without cancellation.
pub(crate) fn at_least_one(m: f64, ln_complement: f64) -> f64 {
    if ln_complement == f64::NEG_INFINITY {
        1.0
    } else {
        -(m * ln_complement).exp_m1()
    }
}

/// `F(z) = 1 - (1 - P_z)^m`: probability that at least one of `m` classifiers
/// makes at most `z` errors.
pub fn max_cdf(z: u64, cohort: &CohortSpec, model: &TrialModel) -> Result<f64> {
    if z > model.n {
        return Err(Error::Domain(format!(
            "failure count {z} exceeds n = {}",
            model.n
        )));
    }
    let tails = model.failure_tails();
    if cohort.m == 1 {
        return Ok(tails.cdf(z));
    }
    Ok(at_least_one(cohort.m as f64, tails.ln_sf(z)))
}

/// Exact distribution of the minimum failure count over the whole support.
pub fn max_distribution(cohort: &CohortSpec, model: &TrialModel) -> MaxDistribution {
    let tails = model.failure_tails();
    let n = model.n;
    let cdf = (0..=n)
        .map(|z| {
            if cohort.m == 1 {
                tails.cdf(z)
            } else {
                at_least_one(cohort.m as f64, tails.ln_sf(z))
            }
        })
        .collect();
    MaxDistribution::from_cdf(n, cdf)
}

/// Expectation, sd and equal-tailed `1 - alpha` interval on the accuracy scale.
///
/// `ci_high` comes from the lower failure quantile and `ci_low` from the upper
/// one, since accuracy decreases in `z`.
pub fn summarize(dist: &MaxDistribution, alpha: f64) -> Result<SummaryStats> {
    check_alpha(alpha)?;
    let z_lo = dist.failure_quantile(alpha / 2.0);
    let z_hi = dist.failure_quantile(1.0 - alpha / 2.0);
    Ok(SummaryStats {
        expectation: dist.expectation(),
        sd: dist.sd(),
        alpha,
        ci_low: dist.accuracy(z_hi),
        ci_high: dist.accuracy(z_lo),
    })
}

/// `P(theta_hat >= level)` for one classifier: the chance that its observed
/// accuracy reaches `level`, i.e. at least `ceil(level * n)` successes.
pub fn score_exceedance(level: f64, model: &TrialModel) -> f64 {
    let n = model.n as f64;
    let k = (level * n - 1e-9).ceil();
    if k <= 0.0 {
        return 1.0;
    }
    if k > n {
        return 0.0;
    }
    model.failure_tails().cdf(model.n - k as u64)
}

/// The parameter varied by [`bias_sweep`], with its grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "parameter", content = "grid", rename_all = "snake_case")]
pub enum SweepGrid {
    Classifiers(Vec<u64>),
    TestSize(Vec<u64>),
    Theta(Vec<f64>),
}

impl SweepGrid {
    pub fn len(&self) -> usize {
        match self {
            SweepGrid::Classifiers(g) | SweepGrid::TestSize(g) => g.len(),
            SweepGrid::Theta(g) => g.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn name(&self) -> &'static str {
        match self {
            SweepGrid::Classifiers(_) => "m",
            SweepGrid::TestSize(_) => "n",
            SweepGrid::Theta(_) => "theta",
        }
    }
}

/// Values held fixed while one parameter is swept.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepBase {
    pub m: u64,
    pub n: u64,
    pub theta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiasRow {
    pub value: f64,
    pub expectation: f64,
    pub bias: f64,
}

/// `E(max) - theta` along a grid of one parameter.
pub fn bias_sweep(grid: &SweepGrid, base: SweepBase) -> Result<Vec<BiasRow>> {
    if grid.is_empty() {
        return Err(Error::Usage(format!("empty {} grid", grid.name())));
    }
    let row = |m: u64, n: u64, theta: f64, value: f64| -> Result<BiasRow> {
        let dist = max_distribution(&CohortSpec::new(m)?, &TrialModel::new(n, theta)?);
        let expectation = dist.expectation();
        Ok(BiasRow {
            value,
            expectation,
            bias: expectation - theta,
        })
    };
    match grid {
        SweepGrid::Classifiers(g) => g
            .iter()
            .map(|&m| row(m, base.n, base.theta, m as f64))
            .collect(),
        SweepGrid::TestSize(g) => g
            .iter()
            .map(|&n| row(base.m, n, base.theta, n as f64))
            .collect(),
        SweepGrid::Theta(g) => g.iter().map(|&t| row(base.m, base.n, t, t)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(n: u64, theta: f64) -> TrialModel {
        TrialModel::new(n, theta).unwrap()
    }

    #[test]
    fn coin_flip_tail() {
        let p = binomial_tail(2, &model(20, 0.5)).unwrap();
        // 211 / 2^20
        assert!((p - 211.0 / 1_048_576.0).abs() < 1e-15);
    }

    #[test]
    fn full_support_is_certain() {
        let m = model(17, 0.3);
        assert_eq!(binomial_tail(17, &m).unwrap(), 1.0);
        assert_eq!(max_cdf(17, &CohortSpec::new(40).unwrap(), &m).unwrap(), 1.0);
    }

    #[test]
    fn zero_failures_is_power() {
        let p = binomial_tail(0, &model(5, 0.9)).unwrap();
        assert!((p - 0.59049).abs() < 1e-14);
    }

    #[test]
    fn out_of_range_failure_count() {
        assert!(binomial_tail(6, &model(5, 0.9)).is_err());
        assert!(max_cdf(6, &CohortSpec::new(2).unwrap(), &model(5, 0.9)).is_err());
    }

    #[test]
    fn invalid_parameters() {
        assert!(TrialModel::new(0, 0.5).is_err());
        assert!(TrialModel::new(10, -0.1).is_err());
        assert!(CohortSpec::new(0).is_err());
    }

    #[test]
    fn single_classifier_reduces_to_binomial() {
        let m = model(40, 0.8);
        let one = CohortSpec::new(1).unwrap();
        let tails = m.failure_tails();
        let dist = max_distribution(&one, &m);
        for z in 0..=40 {
            assert_eq!(max_cdf(z, &one, &m).unwrap(), binomial_tail(z, &m).unwrap());
            assert!((dist.pmf()[z as usize] - tails.pmf(z)).abs() < 1e-14);
        }
    }

    #[test]
    fn degenerate_theta() {
        let perfect = max_distribution(&CohortSpec::new(1).unwrap(), &model(10, 1.0));
        let s = summarize(&perfect, 0.05).unwrap();
        assert_eq!(s.expectation, 1.0);
        assert_eq!(s.sd, 0.0);
        assert_eq!(perfect.pmf()[0], 1.0);

        let hopeless = max_distribution(&CohortSpec::new(9).unwrap(), &model(10, 0.0));
        assert_eq!(hopeless.pmf()[10], 1.0);
        assert_eq!(hopeless.expectation(), 0.0);
    }

    #[test]
    fn summary_interval_contains_mean() {
        let dist = max_distribution(&CohortSpec::new(1000).unwrap(), &model(3000, 0.9));
        let s = summarize(&dist, 0.05).unwrap();
        assert!(s.ci_low <= s.expectation && s.expectation <= s.ci_high);
        assert!(summarize(&dist, 1.0).is_err());
    }

    #[test]
    fn empty_sweep_is_usage_error() {
        let base = SweepBase {
            m: 10,
            n: 100,
            theta: 0.9,
        };
        assert!(matches!(
            bias_sweep(&SweepGrid::Theta(vec![]), base),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn empirical_quantile_convention() {
        let sorted = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(empirical_quantile(&sorted, 0.25), 1.0);
        assert_eq!(empirical_quantile(&sorted, 0.26), 2.0);
        assert_eq!(empirical_quantile(&sorted, 1.0), 4.0);
        assert_eq!(empirical_quantile(&sorted, 0.0), 1.0);
    }
}
