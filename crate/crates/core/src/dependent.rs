//! Conditionally independent classifiers (Boland model).
//!
//! A latent reference indicator `Y0 ~ Bern(theta0)` is drawn per test item and
//! every classifier's success indicator is independent given `Y0`, with
//! `corr(Y0, Y_j) = rho0`. Given the number `n1` of reference successes on a
//! test set, classifier `j`'s success count is
//! `Bin(n1, P(Y_j | Y0 = 1)) + Bin(n - n1, P(Y_j | Y0 = 0))`, which is what the
//! replicate engine draws; [`DependentCohort::outcomes`] draws the same model
//! item by item.

use rand::RngExt;
use rand::seq::SliceRandom;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, FeasibilityBound, Result, check_probability};
use crate::exact::{MaxDistribution, SummaryStats, check_alpha, summarize};
use crate::poisson_binomial::ThetaVector;
use crate::stream::{Purpose, StreamKey, StreamRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceMode {
    /// Reference outcomes are Bernoulli draws, fresh in every replicate.
    #[default]
    Random,
    /// Exactly `round(n * theta0)` reference successes in every replicate.
    Fixed,
}

/// Correlation structure shared by all classifiers of a cohort.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DependenceSpec {
    rho0: f64,
    theta0: f64,
    reference_mode: ReferenceMode,
}

impl DependenceSpec {
    pub fn new(rho0: f64, theta0: f64, reference_mode: ReferenceMode) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho0) {
            return Err(Error::Domain(format!("rho0 = {rho0} is not in [0, 1]")));
        }
        if !(theta0 > 0.0 && theta0 < 1.0) {
            return Err(Error::Domain(format!("theta0 = {theta0} is not in (0, 1)")));
        }
        Ok(Self {
            rho0,
            theta0,
            reference_mode,
        })
    }

    /// No dependence; `theta0` is irrelevant and set to one half.
    pub fn independent() -> Self {
        Self {
            rho0: 0.0,
            theta0: 0.5,
            reference_mode: ReferenceMode::Random,
        }
    }

    pub fn rho0(&self) -> f64 {
        self.rho0
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    pub fn reference_mode(&self) -> ReferenceMode {
        self.reference_mode
    }

    pub fn with_rho0(&self, rho0: f64) -> Result<Self> {
        Self::new(rho0, self.theta0, self.reference_mode)
    }

    pub fn is_independent(&self) -> bool {
        self.rho0 == 0.0
    }
}

/// Replication settings of a Monte-Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub replications: u64,
    pub seed: u64,
    /// Significance level of the reported equal-tailed interval.
    pub alpha: f64,
    /// Number of worker threads; never changes results.
    pub worker_hint: Option<usize>,
}

impl SimulationConfig {
    pub const DEFAULT_REPLICATIONS: u64 = 100_000;

    pub fn new(replications: u64, seed: u64) -> Self {
        Self {
            replications,
            seed,
            alpha: 0.05,
            worker_hint: None,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.worker_hint = Some(workers);
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::Domain("replications must be at least 1".into()));
        }
        if self.worker_hint == Some(0) {
            return Err(Error::Domain("worker_hint must be at least 1".into()));
        }
        check_alpha(self.alpha)
    }

    pub fn key(&self) -> StreamKey {
        StreamKey::new(self.seed)
    }

    /// Runs `f(r)` for every replicate, in parallel, returning results in
    /// replicate order.
    pub(crate) fn run_replicates<T, F>(&self, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        run_indexed(self.replications, self.worker_hint, f)
    }
}

/// Ordered parallel map over `0..count`, optionally on a sized pool.
pub(crate) fn run_indexed<T, F>(count: u64, workers: Option<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    let job = || (0..count).into_par_iter().map(&f).collect::<Vec<T>>();
    match workers {
        Some(w) => match rayon::ThreadPoolBuilder::new().num_threads(w).build() {
            Ok(pool) => pool.install(job),
            Err(_) => job(),
        },
        None => job(),
    }
}

/// `P(Y_j = 1 | Y0 = 1)` and `P(Y_j = 1 | Y0 = 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionalProbs {
    pub given_success: f64,
    pub given_failure: f64,
}

const BOUND_SLACK: f64 = 1e-12;

/// Smallest `theta_j` for which `P(Y_j = 1 | Y0 = 0)` is non-negative.
pub fn feasible_theta_min(spec: &DependenceSpec) -> f64 {
    let odds = spec.theta0 / (1.0 - spec.theta0);
    let k = spec.rho0 * spec.rho0 * odds;
    k / (1.0 + k)
}

/// Largest `theta_j` for which `P(Y_j = 1 | Y0 = 1)` does not exceed one.
pub fn feasible_theta_max(spec: &DependenceSpec) -> f64 {
    let rho2 = spec.rho0 * spec.rho0;
    spec.theta0 / (spec.theta0 + rho2 * (1.0 - spec.theta0))
}

/// `theta_j` may overshoot a feasibility bound by `1e-12` (rounding in
/// callers that compute the bound themselves); such values are treated as
/// lying on the bound.
pub fn conditional_probs(theta_j: f64, spec: &DependenceSpec) -> Result<ConditionalProbs> {
    check_probability("theta_j", theta_j)?;
    let infeasible = |bound, limit| Error::Infeasible {
        theta: theta_j,
        rho0: spec.rho0,
        theta0: spec.theta0,
        bound,
        limit,
    };
    let lo = feasible_theta_min(spec);
    if theta_j < lo - BOUND_SLACK {
        return Err(infeasible(FeasibilityBound::Lower, lo));
    }
    let hi = feasible_theta_max(spec);
    if theta_j > hi + BOUND_SLACK {
        return Err(infeasible(FeasibilityBound::Upper, hi));
    }
    let t0 = spec.theta0;
    let shared = spec.rho0 * (theta_j * (1.0 - theta_j) * t0 * (1.0 - t0)).sqrt();
    let given_success = (shared + theta_j * t0) / t0;
    let given_failure = (theta_j * (1.0 - t0) - shared) / (1.0 - t0);
    Ok(ConditionalProbs {
        given_success: given_success.clamp(0.0, 1.0),
        given_failure: given_failure.clamp(0.0, 1.0),
    })
}

/// Probability that two classifiers give the same output.
pub fn similarity(theta_j: f64, theta_k: f64, rho_jk: f64) -> Result<f64> {
    check_probability("theta_j", theta_j)?;
    check_probability("theta_k", theta_k)?;
    if !(-1.0..=1.0).contains(&rho_jk) {
        return Err(Error::Domain(format!(
            "rho_jk = {rho_jk} is not in [-1, 1]"
        )));
    }
    let s = (1.0 - theta_j) * (1.0 - theta_k)
        + theta_j * theta_k
        + 2.0 * rho_jk * (theta_j * theta_k * (1.0 - theta_j) * (1.0 - theta_k)).sqrt();
    const SLACK: f64 = 1e-12;
    if !(-SLACK..=1.0 + SLACK).contains(&s) {
        return Err(Error::Domain(format!(
            "similarity {s} is outside [0, 1]; the correlation is incoherent with the accuracies"
        )));
    }
    Ok(s.clamp(0.0, 1.0))
}

/// Inverts [`similarity`] for two classifiers with common accuracy `theta`,
/// returning `rho0 = sqrt(rho_jk)` (pairwise correlation is `rho0^2`).
pub fn rho0_from_similarity(theta: f64, similarity: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::Domain(format!("theta = {theta} is not in (0, 1)")));
    }
    check_probability("similarity", similarity)?;
    let independent = theta * theta + (1.0 - theta) * (1.0 - theta);
    let rho_jk = (similarity - independent) / (2.0 * theta * (1.0 - theta));
    if rho_jk < -1e-12 {
        return Err(Error::Domain(format!(
            "similarity {similarity} is below the independence level {independent}"
        )));
    }
    if rho_jk > 1.0 + 1e-12 {
        return Err(Error::Domain(format!(
            "similarity {similarity} implies a correlation above one"
        )));
    }
    Ok(rho_jk.clamp(0.0, 1.0).sqrt())
}

/// Per-item outcomes of one replicate.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcomes {
    pub reference: Vec<bool>,
    /// `classifiers[j][i]` is classifier `j`'s success on item `i`.
    pub classifiers: Vec<Vec<bool>>,
}

/// A feasibility-checked cohort ready for simulation.
#[derive(Debug, Clone)]
pub struct DependentCohort {
    n: u64,
    spec: DependenceSpec,
    thetas: Vec<f64>,
    probs: Vec<ConditionalProbs>,
    /// Distinct conditional-probability pairs; classifiers index into this.
    groups: Vec<ConditionalProbs>,
    group_of: Vec<usize>,
}

impl DependentCohort {
    pub fn new(thetas: &ThetaVector, n: u64, spec: DependenceSpec) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("test-set size n must be at least 1".into()));
        }
        let mut probs = Vec::with_capacity(thetas.len());
        for &t in thetas.as_slice() {
            probs.push(if spec.is_independent() {
                ConditionalProbs {
                    given_success: t,
                    given_failure: t,
                }
            } else {
                conditional_probs(t, &spec)?
            });
        }
        let mut groups: Vec<ConditionalProbs> = Vec::new();
        let mut group_of = Vec::with_capacity(probs.len());
        let mut index = std::collections::HashMap::new();
        for p in &probs {
            let key = (p.given_success.to_bits(), p.given_failure.to_bits());
            let g = *index.entry(key).or_insert_with(|| {
                groups.push(*p);
                groups.len() - 1
            });
            group_of.push(g);
        }
        Ok(Self {
            n,
            spec,
            thetas: thetas.as_slice().to_vec(),
            probs,
            groups,
            group_of,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn spec(&self) -> &DependenceSpec {
        &self.spec
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn probs(&self) -> &[ConditionalProbs] {
        &self.probs
    }

    fn fixed_reference_successes(&self) -> u64 {
        ((self.n as f64 * self.spec.theta0).round() as u64).min(self.n)
    }

    /// Number of reference successes on the test set of replicate `r`.
    pub fn reference_successes(&self, key: &StreamKey, r: u64) -> u64 {
        match self.spec.reference_mode {
            ReferenceMode::Fixed => self.fixed_reference_successes(),
            ReferenceMode::Random => {
                let mut rng = key.rng(Purpose::Reference, r, 0);
                binomial(self.n, self.spec.theta0).sample(&mut rng)
            }
        }
    }

    fn for_each_count(&self, key: &StreamKey, r: u64, mut f: impl FnMut(usize, u64)) {
        if self.spec.is_independent() {
            let dists: Vec<Binomial> = self
                .groups
                .iter()
                .map(|g| binomial(self.n, g.given_success))
                .collect();
            for (j, &g) in self.group_of.iter().enumerate() {
                let mut rng = key.rng(Purpose::Classifier, r, j as u64);
                f(j, dists[g].sample(&mut rng));
            }
            return;
        }
        let n1 = self.reference_successes(key, r);
        let n0 = self.n - n1;
        let dists: Vec<(Binomial, Binomial)> = self
            .groups
            .iter()
            .map(|g| (binomial(n1, g.given_success), binomial(n0, g.given_failure)))
            .collect();
        for (j, &g) in self.group_of.iter().enumerate() {
            let mut rng = key.rng(Purpose::Classifier, r, j as u64);
            let (on_success, on_failure) = &dists[g];
            f(j, on_success.sample(&mut rng) + on_failure.sample(&mut rng));
        }
    }

    /// Success count of every classifier in replicate `r`.
    pub fn success_counts(&self, key: &StreamKey, r: u64) -> Vec<u64> {
        let mut out = vec![0; self.len()];
        self.for_each_count(key, r, |j, s| out[j] = s);
        out
    }

    /// Smallest failure count among the classifiers in replicate `r`.
    pub fn min_failures(&self, key: &StreamKey, r: u64) -> u64 {
        let mut best = 0_u64;
        self.for_each_count(key, r, |_, s| best = best.max(s));
        self.n - best
    }

    /// Item-level outcomes of replicate `r`, drawn independently of the
    /// aggregated path but from the same model.
    pub fn outcomes(&self, key: &StreamKey, r: u64) -> Outcomes {
        let n = self.n as usize;
        let reference: Vec<bool> = match self.spec.reference_mode {
            ReferenceMode::Random => {
                let mut rng = key.rng(Purpose::Reference, r, 1);
                (0..n)
                    .map(|_| rng.random::<f64>() < self.spec.theta0)
                    .collect()
            }
            ReferenceMode::Fixed => {
                let k = self.fixed_reference_successes() as usize;
                let mut v: Vec<bool> = (0..n).map(|i| i < k).collect();
                let mut rng = key.rng(Purpose::Placement, r, 0);
                v.shuffle(&mut rng);
                v
            }
        };
        let classifiers = self
            .probs
            .iter()
            .enumerate()
            .map(|(j, p)| {
                let mut rng = key.rng(Purpose::Classifier, r, (1 << 40) + j as u64);
                reference
                    .iter()
                    .map(|&y0| {
                        let q = if y0 { p.given_success } else { p.given_failure };
                        rng.random::<f64>() < q
                    })
                    .collect()
            })
            .collect();
        Outcomes {
            reference,
            classifiers,
        }
    }
}

fn binomial(n: u64, p: f64) -> Binomial {
    Binomial::new(n, p).expect("probability validated upstream")
}

/// Draws from `rng` a binomial variate; exposed for samplers built on the
/// same substreams.
pub(crate) fn sample_binomial(rng: &mut StreamRng, n: u64, p: f64) -> u64 {
    binomial(n, p).sample(rng)
}

/// Per-replicate minimum failure counts, in replicate order.
pub fn simulate_min_failures(
    cohort: &DependentCohort,
    config: &SimulationConfig,
) -> Result<Vec<u64>> {
    config.validate()?;
    let key = config.key();
    Ok(config.run_replicates(|r| cohort.min_failures(&key, r)))
}

/// Empirical distribution of the sample-maximum accuracy under dependence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulatedMax {
    pub distribution: MaxDistribution,
    pub summary: SummaryStats,
}

pub fn simulate_max(
    thetas: &ThetaVector,
    n: u64,
    spec: &DependenceSpec,
    config: &SimulationConfig,
) -> Result<SimulatedMax> {
    let cohort = DependentCohort::new(thetas, n, *spec)?;
    let mins = simulate_min_failures(&cohort, config)?;
    let mut counts = vec![0_u64; n as usize + 1];
    for z in mins {
        counts[z as usize] += 1;
    }
    let distribution = MaxDistribution::from_counts(n, &counts);
    let summary = summarize(&distribution, config.alpha)?;
    Ok(SimulatedMax {
        distribution,
        summary,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RhoRow {
    pub rho0: f64,
    /// `None` when some classifier is infeasible at this correlation.
    pub expectation: Option<f64>,
    pub bias: Option<f64>,
    pub truncated: bool,
}

/// Bias of the simulated sample maximum along a grid of `rho0` values.
///
/// Grid points at which some `theta_j` violates the feasibility bounds are
/// reported as truncated.
pub fn rho_bias_sweep(
    thetas: &ThetaVector,
    n: u64,
    base: &DependenceSpec,
    rho_grid: &[f64],
    config: &SimulationConfig,
) -> Result<Vec<RhoRow>> {
    if rho_grid.is_empty() {
        return Err(Error::Usage("empty rho0 grid".into()));
    }
    let truth = thetas.max();
    rho_grid
        .iter()
        .map(|&rho0| {
            let spec = base.with_rho0(rho0)?;
            match simulate_max(thetas, n, &spec, config) {
                Ok(sim) => Ok(RhoRow {
                    rho0,
                    expectation: Some(sim.summary.expectation),
                    bias: Some(sim.summary.expectation - truth),
                    truncated: false,
                }),
                Err(Error::Infeasible { .. }) => Ok(RhoRow {
                    rho0,
                    expectation: None,
                    bias: None,
                    truncated: true,
                }),
                Err(e) => Err(e),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(rho0: f64, theta0: f64) -> DependenceSpec {
        DependenceSpec::new(rho0, theta0, ReferenceMode::Random).unwrap()
    }

    #[test]
    fn independence_leaves_theta() {
        let p = conditional_probs(0.73, &spec(0.0, 0.9)).unwrap();
        assert_eq!(p.given_success, 0.73);
        assert_eq!(p.given_failure, 0.73);
    }

    #[test]
    fn perfect_correlation_copies_reference() {
        let p = conditional_probs(0.9, &spec(1.0, 0.9)).unwrap();
        assert!((p.given_success - 1.0).abs() < 1e-12);
        assert!(p.given_failure.abs() < 1e-12);
    }

    #[test]
    fn hand_computed_conditionals() {
        // shared = 0.6 * sqrt(0.09 * 0.09) = 0.054
        // p1 = (0.054 + 0.81) / 0.9, p0 = (0.09 - 0.054) / 0.1
        let p = conditional_probs(0.9, &spec(0.6, 0.9)).unwrap();
        assert!((p.given_success - 0.96).abs() < 1e-12);
        assert!((p.given_failure - 0.36).abs() < 1e-12);
    }

    #[test]
    fn feasibility_bounds() {
        assert_eq!(feasible_theta_min(&spec(0.0, 0.9)), 0.0);
        // 0.36 * 9 / (1 + 0.36 * 9)
        assert!((feasible_theta_min(&spec(0.6, 0.9)) - 3.24 / 4.24).abs() < 1e-15);
        assert!((feasible_theta_min(&spec(1.0, 0.5)) - 0.5).abs() < 1e-15);

        let err = conditional_probs(0.7, &spec(0.6, 0.9)).unwrap_err();
        assert!(matches!(
            err,
            Error::Infeasible {
                bound: FeasibilityBound::Lower,
                ..
            }
        ));
        // theta_j above theta0 / (theta0 + rho^2 (1 - theta0)) with rho0 = 1, theta0 = 0.5
        let err = conditional_probs(0.6, &spec(1.0, 0.5)).unwrap_err();
        assert!(matches!(
            err,
            Error::Infeasible {
                bound: FeasibilityBound::Upper,
                ..
            }
        ));
    }

    #[test]
    fn similarity_values() {
        assert!((similarity(0.9, 0.9, 0.0).unwrap() - 0.82).abs() < 1e-12);
        assert!((similarity(0.9, 0.9, 1.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((similarity(0.9, 0.1, 1.0).unwrap() - 0.36).abs() < 1e-12);
        assert!(similarity(0.9, 0.9, 1.5).is_err());
    }

    #[test]
    fn rho0_inversion() {
        assert!(rho0_from_similarity(0.3, 0.09 + 0.49).unwrap().abs() < 1e-6);
        assert!((rho0_from_similarity(0.9, 1.0).unwrap() - 1.0).abs() < 1e-12);
        // rho_jk = (0.85 - 0.631072) / (2 * 0.184464) = 0.593419...
        let rho0 = rho0_from_similarity(0.756, 0.85).unwrap();
        assert!((rho0 * rho0 - 0.593_419).abs() < 1e-5, "{rho0}");
        assert!(rho0_from_similarity(0.9, 0.5).is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(DependenceSpec::new(1.2, 0.9, ReferenceMode::Random).is_err());
        assert!(DependenceSpec::new(0.5, 1.0, ReferenceMode::Random).is_err());
        assert!(DependenceSpec::new(0.5, 0.0, ReferenceMode::Fixed).is_err());
    }

    #[test]
    fn infeasible_cohort_fails_before_sampling() {
        let thetas = ThetaVector::new(vec![0.9, 0.5]).unwrap();
        let err = simulate_max(&thetas, 100, &spec(0.6, 0.9), &SimulationConfig::new(10, 1));
        assert!(matches!(err, Err(Error::Infeasible { .. })));
    }

    #[test]
    fn fixed_reference_count() {
        let thetas = ThetaVector::identical(0.9, 3).unwrap();
        let s = DependenceSpec::new(0.6, 0.9, ReferenceMode::Fixed).unwrap();
        let cohort = DependentCohort::new(&thetas, 3000, s).unwrap();
        let key = StreamKey::new(5);
        for r in 0..5 {
            assert_eq!(cohort.reference_successes(&key, r), 2700);
            let o = cohort.outcomes(&key, r);
            assert_eq!(o.reference.iter().filter(|&&y| y).count(), 2700);
        }
        // Placement differs between replicates.
        assert_ne!(
            cohort.outcomes(&key, 0).reference,
            cohort.outcomes(&key, 1).reference
        );
    }

    #[test]
    fn zero_replications_rejected() {
        let thetas = ThetaVector::identical(0.9, 3).unwrap();
        let r = simulate_max(
            &thetas,
            10,
            &DependenceSpec::independent(),
            &SimulationConfig::new(0, 1),
        );
        assert!(r.is_err());
    }
}
