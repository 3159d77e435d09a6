//! Binormal score model for AUC and the sample maximum of empirical AUCs.
//!
//! Positive-class scores are `N(mu_plus, sigma_plus^2)`, negative-class scores
//! `N(mu_minus, sigma_minus^2)`, and each test item is positive with
//! probability `pi`.

use rand::RngExt;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use statrs::function::erf::{erfc, erfc_inv};

use crate::dependent::{SimulationConfig, sample_binomial};
use crate::error::{Error, Result, check_probability};
use crate::exact::SummaryStats;
use crate::stream::{Purpose, StreamKey, StreamRng};

/// Standard Normal cdf.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Standard Normal upper tail `1 - Phi(x)`, accurate far into the tail.
pub fn normal_sf(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// Standard Normal quantile.
pub fn normal_quantile(p: f64) -> f64 {
    -std::f64::consts::SQRT_2 * erfc_inv(2.0 * p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreModel {
    pub mu_plus: f64,
    pub sigma_plus: f64,
    pub mu_minus: f64,
    pub sigma_minus: f64,
}

impl ScoreModel {
    pub fn new(mu_plus: f64, sigma_plus: f64, mu_minus: f64, sigma_minus: f64) -> Result<Self> {
        if !(mu_plus.is_finite() && mu_minus.is_finite()) {
            return Err(Error::Domain("score means must be finite".into()));
        }
        if !(sigma_plus > 0.0
            && sigma_plus.is_finite()
            && sigma_minus > 0.0
            && sigma_minus.is_finite())
        {
            return Err(Error::Domain(format!(
                "score standard deviations must be positive (got {sigma_plus}, {sigma_minus})"
            )));
        }
        Ok(Self {
            mu_plus,
            sigma_plus,
            mu_minus,
            sigma_minus,
        })
    }

    /// Model with `mu_minus = 0`, unit variances and the given AUC.
    pub fn standard(auc: f64) -> Result<Self> {
        let mu_plus = solve_mu_plus(auc, 0.0, 1.0, 1.0)?;
        Self::new(mu_plus, 1.0, 0.0, 1.0)
    }
}

pub fn auc_from_model(model: &ScoreModel) -> f64 {
    let scale = model.sigma_minus.hypot(model.sigma_plus);
    normal_cdf((model.mu_plus - model.mu_minus) / scale)
}

/// `mu_plus` giving the target AUC `a`, in closed form.
pub fn solve_mu_plus(a: f64, mu_minus: f64, sigma_minus: f64, sigma_plus: f64) -> Result<f64> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::Domain(format!("AUC = {a} is not in (0, 1)")));
    }
    if !(sigma_minus > 0.0 && sigma_plus > 0.0) {
        return Err(Error::Domain(
            "score standard deviations must be positive".into(),
        ));
    }
    Ok(mu_minus + sigma_minus.hypot(sigma_plus) * normal_quantile(a))
}

/// Mean and variance of the pooled score.
pub fn mixture_moments(model: &ScoreModel, pi: f64) -> Result<(f64, f64)> {
    check_probability("pi", pi)?;
    let mean = pi * model.mu_plus + (1.0 - pi) * model.mu_minus;
    let second = pi * (model.sigma_plus.powi(2) + model.mu_plus.powi(2))
        + (1.0 - pi) * (model.sigma_minus.powi(2) + model.mu_minus.powi(2));
    Ok((mean, second - mean * mean))
}

/// Scores with their class labels (`true` = positive).
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct LabeledSample {
    pub scores: Vec<f64>,
    pub labels: Vec<bool>,
}

impl LabeledSample {
    pub fn new(scores: Vec<f64>, labels: Vec<bool>) -> Result<Self> {
        if scores.len() != labels.len() {
            return Err(Error::Domain(format!(
                "{} scores but {} labels",
                scores.len(),
                labels.len()
            )));
        }
        Ok(Self { scores, labels })
    }

    pub fn from_classes(negatives: &[f64], positives: &[f64]) -> Self {
        let mut scores = negatives.to_vec();
        scores.extend_from_slice(positives);
        let mut labels = vec![false; negatives.len()];
        labels.resize(scores.len(), true);
        Self { scores, labels }
    }

    pub fn positives(&self) -> usize {
        self.labels.iter().filter(|&&l| l).count()
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

/// `n` items with Bernoulli(`pi`) labels and Normal scores.
pub fn simulate_scores(
    model: &ScoreModel,
    n: usize,
    pi: f64,
    rng: &mut StreamRng,
) -> Result<LabeledSample> {
    check_probability("pi", pi)?;
    let mut scores = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let positive = rng.random::<f64>() < pi;
        let z: f64 = rng.sample(StandardNormal);
        scores.push(if positive {
            model.mu_plus + model.sigma_plus * z
        } else {
            model.mu_minus + model.sigma_minus * z
        });
        labels.push(positive);
    }
    Ok(LabeledSample { scores, labels })
}

/// Mann–Whitney estimate of `P(S+ > S-)`, ties counted one half.
pub fn empirical_auc(sample: &LabeledSample) -> Result<f64> {
    let positives = sample.positives();
    let negatives = sample.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::SingleClass {
            positives,
            negatives,
        });
    }
    if sample.scores.iter().any(|s| s.is_nan()) {
        return Err(Error::Domain("scores must not be NaN".into()));
    }
    let mut order: Vec<usize> = (0..sample.len()).collect();
    order.sort_by(|&a, &b| sample.scores[a].total_cmp(&sample.scores[b]));
    // Sum of midranks (1-based) of the positives.
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && sample.scores[order[j]] == sample.scores[order[i]] {
            j += 1;
        }
        let midrank = (i + j + 1) as f64 / 2.0;
        let tied_pos = order[i..j].iter().filter(|&&k| sample.labels[k]).count();
        rank_sum += midrank * tied_pos as f64;
        i = j;
    }
    let p = positives as f64;
    let u = rank_sum - p * (p + 1.0) / 2.0;
    Ok(u / (p * negatives as f64))
}

/// Teams with known true AUCs evaluated on a common test-set design.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AucCohort {
    aucs: Vec<f64>,
    n: u64,
    pi: f64,
}

impl AucCohort {
    pub fn new(aucs: Vec<f64>, n: u64, pi: f64) -> Result<Self> {
        if aucs.is_empty() {
            return Err(Error::Domain("AUC cohort must not be empty".into()));
        }
        if let Some(a) = aucs.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
            return Err(Error::Domain(format!("AUC = {a} is not in (0, 1)")));
        }
        if n < 2 {
            return Err(Error::Domain("test-set size n must be at least 2".into()));
        }
        if !(pi > 0.0 && pi < 1.0) {
            return Err(Error::Domain(format!("pi = {pi} is not in (0, 1)")));
        }
        Ok(Self { aucs, n, pi })
    }

    pub fn identical(auc: f64, m: usize, n: u64, pi: f64) -> Result<Self> {
        Self::new(vec![auc; m], n, pi)
    }

    pub fn aucs(&self) -> &[f64] {
        &self.aucs
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn pi(&self) -> f64 {
        self.pi
    }

    pub fn len(&self) -> usize {
        self.aucs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.aucs.is_empty()
    }

    /// Standard score model of every team.
    pub fn models(&self) -> Vec<ScoreModel> {
        self.aucs
            .iter()
            .map(|&a| ScoreModel::standard(a).expect("AUC validated at construction"))
            .collect()
    }
}

/// One empirical AUC drawn in `O(P log P)` for `P` positives.
///
/// The positive count is `Bin(n, pi)`, redrawn while the sample would be
/// single-class; the number of redraws is returned alongside the AUC. Given
/// the sorted positive scores, the negatives fall into the `P + 1` gaps
/// multinomially, and a negative in gap `k` is beaten by `P - k` positives,
/// which gives the Mann–Whitney count without drawing negative scores.
pub fn sample_empirical_auc(
    model: &ScoreModel,
    n: u64,
    pi: f64,
    rng: &mut StreamRng,
) -> (f64, u64) {
    let mut redraws = 0;
    let positives = loop {
        let p = sample_binomial(rng, n, pi);
        if p > 0 && p < n {
            break p;
        }
        redraws += 1;
    };
    let negatives = n - positives;
    let mut pos: Vec<f64> = (0..positives)
        .map(|_| {
            let z: f64 = rng.sample(StandardNormal);
            (model.mu_plus + model.sigma_plus * z - model.mu_minus) / model.sigma_minus
        })
        .collect();
    pos.sort_by(f64::total_cmp);

    let mut remaining = negatives;
    let mut tail_mass = 1.0; // P(S- > previous positive), standardized.
    let mut u = 0_u64;
    for (k, &s) in pos.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        let next_tail = normal_sf(s);
        let cond = if tail_mass > 0.0 {
            ((tail_mass - next_tail) / tail_mass).clamp(0.0, 1.0)
        } else {
            1.0
        };
        let in_gap = sample_binomial(rng, remaining, cond);
        u += (positives - k as u64) * in_gap;
        remaining -= in_gap;
        tail_mass = next_tail;
    }
    (u as f64 / (positives * negatives) as f64, redraws)
}

/// Maxima of simulated empirical AUCs over replicates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AucMaxSimulation {
    pub summary: SummaryStats,
    pub maxima: Vec<f64>,
    /// Single-class test sets that were redrawn.
    pub redrawn: u64,
}

/// Per-replicate maximum empirical AUC of a cohort of independent teams.
pub fn simulate_max_auc(cohort: &AucCohort, config: &SimulationConfig) -> Result<AucMaxSimulation> {
    config.validate()?;
    let models = cohort.models();
    let key = config.key();
    let per_rep = config.run_replicates(|r| replicate_max_auc(&models, cohort, &key, r));
    let redrawn = per_rep.iter().map(|&(_, d)| d).sum();
    let maxima: Vec<f64> = per_rep.into_iter().map(|(m, _)| m).collect();
    let summary = SummaryStats::from_values(&maxima, config.alpha)?;
    Ok(AucMaxSimulation {
        summary,
        maxima,
        redrawn,
    })
}

pub(crate) fn replicate_max_auc(
    models: &[ScoreModel],
    cohort: &AucCohort,
    key: &StreamKey,
    r: u64,
) -> (f64, u64) {
    let mut best = f64::NEG_INFINITY;
    let mut redrawn = 0;
    for (j, model) in models.iter().enumerate() {
        let mut rng = key.rng(Purpose::Scores, r, j as u64);
        let (auc, d) = sample_empirical_auc(model, cohort.n, cohort.pi, &mut rng);
        best = best.max(auc);
        redrawn += d;
    }
    (best, redrawn)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn auc_of_model() {
        let m = ScoreModel::new(0.3, 2.0, 0.3, 0.5).unwrap();
        assert!((auc_from_model(&m) - 0.5).abs() < 1e-15);
        let m = ScoreModel::new(1.8124, 1.0, 0.0, 1.0).unwrap();
        assert!((auc_from_model(&m) - 0.90).abs() < 1e-4);
        let m = ScoreModel::new(40.0, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(auc_from_model(&m), 1.0);
        assert!(ScoreModel::new(0.0, 0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn mu_plus_inversion() {
        let mu = solve_mu_plus(0.90, 0.0, 1.0, 1.0).unwrap();
        // sqrt(2) * 1.2815515655446004
        assert!((mu - 1.812_387_605_9).abs() < 1e-8, "{mu}");
        assert!(solve_mu_plus(0.5, 0.0, 1.0, 1.0).unwrap().abs() < 1e-12);
        for a in [0.6, 0.75, 0.99] {
            let m = ScoreModel::standard(a).unwrap();
            assert!((auc_from_model(&m) - a).abs() < 1e-10);
        }
        assert!(solve_mu_plus(1.0, 0.0, 1.0, 1.0).is_err());
        assert!(solve_mu_plus(0.0, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn moments() {
        let m = ScoreModel::new(1.0, 1.0, -1.0, 1.0).unwrap();
        let (mean, var) = mixture_moments(&m, 0.5).unwrap();
        assert!(mean.abs() < 1e-15);
        assert!((var - 2.0).abs() < 1e-15);
        let m = ScoreModel::new(2.0, 3.0, -1.0, 0.5).unwrap();
        let (mean, var) = mixture_moments(&m, 1.0).unwrap();
        assert!((mean - 2.0).abs() < 1e-15 && (var - 9.0).abs() < 1e-12);
        let (mean, var) = mixture_moments(&m, 0.0).unwrap();
        assert!((mean + 1.0).abs() < 1e-15 && (var - 0.25).abs() < 1e-12);
    }

    #[test]
    fn empirical_auc_small_cases() {
        let s = LabeledSample::from_classes(&[1.0, 2.0], &[1.5, 3.0]);
        assert_eq!(empirical_auc(&s).unwrap(), 0.75);
        let s = LabeledSample::from_classes(&[0.1, 0.2], &[0.3, 0.9]);
        assert_eq!(empirical_auc(&s).unwrap(), 1.0);
        let s = LabeledSample::from_classes(&[0.4; 3], &[0.4; 2]);
        assert_eq!(empirical_auc(&s).unwrap(), 0.5);
        let s = LabeledSample::from_classes(&[], &[0.4; 2]);
        assert!(matches!(empirical_auc(&s), Err(Error::SingleClass { .. })));
    }

    #[test]
    fn all_positive_when_pi_is_one() {
        let m = ScoreModel::standard(0.8).unwrap();
        let mut rng = StreamKey::new(1).rng(Purpose::Scores, 0, 0);
        let s = simulate_scores(&m, 100, 1.0, &mut rng).unwrap();
        assert_eq!(s.positives(), 100);
    }

    #[test]
    fn cohort_validation() {
        assert!(AucCohort::new(vec![], 100, 0.1).is_err());
        assert!(AucCohort::new(vec![1.0], 100, 0.1).is_err());
        assert!(AucCohort::new(vec![0.9], 100, 1.0).is_err());
        assert!(AucCohort::new(vec![0.9], 1, 0.5).is_err());
    }

    #[test]
    fn tiny_test_sets_redraw_single_class_samples() {
        let m = ScoreModel::standard(0.8).unwrap();
        let mut rng = StreamKey::new(3).rng(Purpose::Scores, 0, 0);
        let mut redraws = 0;
        for _ in 0..200 {
            let (auc, d) = sample_empirical_auc(&m, 2, 0.5, &mut rng);
            assert!(auc == 0.0 || auc == 1.0);
            redraws += d;
        }
        assert!(redraws > 0);
    }
}
