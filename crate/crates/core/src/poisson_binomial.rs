//! Independent classifiers with heterogeneous success probabilities.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, check_probability};
use crate::exact::{BiasRow, MaxDistribution, TrialModel, at_least_one};

/// Population success probabilities of a cohort of classifiers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ThetaVector(Vec<f64>);

impl ThetaVector {
    pub fn new(thetas: Vec<f64>) -> Result<Self> {
        if thetas.is_empty() {
            return Err(Error::Domain("theta vector must not be empty".into()));
        }
        for &t in &thetas {
            check_probability("theta_j", t)?;
        }
        Ok(Self(thetas))
    }

    /// `m` copies of `theta`.
    pub fn identical(theta: f64, m: usize) -> Result<Self> {
        Self::new(vec![theta; m])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `theta_SOTA`, the largest population success probability.
    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Distinct values in ascending order with their multiplicities.
    pub(crate) fn grouped(&self) -> Vec<(f64, usize)> {
        let mut sorted = self.0.clone();
        sorted.sort_by(f64::total_cmp);
        let mut groups: Vec<(f64, usize)> = Vec::new();
        for t in sorted {
            match groups.last_mut() {
                Some((v, c)) if *v == t => *c += 1,
                _ => groups.push((t, 1)),
            }
        }
        groups
    }
}

impl TryFrom<Vec<f64>> for ThetaVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<ThetaVector> for Vec<f64> {
    fn from(t: ThetaVector) -> Self {
        t.0
    }
}

/// `P(K = k)` for the number of successes among independent Bernoulli trials.
///
/// Standard O(m k) dynamic programme over the trials.
pub fn poisson_binomial_pmf(k: usize, probs: &[f64]) -> Result<f64> {
    if k > probs.len() {
        return Err(Error::Domain(format!(
            "success count {k} exceeds the number of trials {}",
            probs.len()
        )));
    }
    for &p in probs {
        check_probability("p", p)?;
    }
    // dist[j] = P(j successes so far), truncated at k.
    let mut dist = vec![0.0; k + 1];
    dist[0] = 1.0;
    for (i, &p) in probs.iter().enumerate() {
        let top = (i + 1).min(k);
        for j in (1..=top).rev() {
            dist[j] = dist[j] * (1.0 - p) + dist[j - 1] * p;
        }
        dist[0] *= 1.0 - p;
    }
    Ok(dist[k])
}

/// `sum_j ln(1 - P_zj)` for every `z`, grouped over repeated thetas so the
/// result does not depend on the order of `thetas`.
fn ln_none_at_most(n: u64, thetas: &ThetaVector) -> Result<Vec<f64>> {
    let mut acc = vec![0.0; n as usize + 1];
    for (theta, count) in thetas.grouped() {
        let tails = TrialModel::new(n, theta)?.failure_tails();
        let c = count as f64;
        for (z, a) in acc.iter_mut().enumerate() {
            *a += c * tails.ln_sf(z as u64);
        }
    }
    Ok(acc)
}

/// `F(z | Theta) = 1 - prod_j (1 - P_zj)`.
pub fn nonidentical_max_cdf(z: u64, n: u64, thetas: &ThetaVector) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("test-set size n must be at least 1".into()));
    }
    if z > n {
        return Err(Error::Domain(format!("failure count {z} exceeds n = {n}")));
    }
    let mut ln_none = 0.0;
    for (theta, count) in thetas.grouped() {
        let tails = TrialModel::new(n, theta)?.failure_tails();
        ln_none += count as f64 * tails.ln_sf(z);
    }
    Ok(if thetas.len() == 1 {
        TrialModel::new(n, thetas.as_slice()[0])?
            .failure_tails()
            .cdf(z)
    } else {
        at_least_one(1.0, ln_none)
    })
}

/// Exact distribution of the minimum failure count for heterogeneous thetas.
pub fn nonidentical_max_distribution(n: u64, thetas: &ThetaVector) -> Result<MaxDistribution> {
    if n == 0 {
        return Err(Error::Domain("test-set size n must be at least 1".into()));
    }
    let groups = thetas.grouped();
    let cdf = if groups.len() == 1 {
        // Same arithmetic as the identical-classifier path.
        let (theta, count) = groups[0];
        let tails = TrialModel::new(n, theta)?.failure_tails();
        (0..=n)
            .map(|z| {
                if count == 1 {
                    tails.cdf(z)
                } else {
                    at_least_one(count as f64, tails.ln_sf(z))
                }
            })
            .collect()
    } else {
        ln_none_at_most(n, thetas)?
            .into_iter()
            .map(|l| at_least_one(1.0, l))
            .collect()
    };
    Ok(MaxDistribution::from_cdf(n, cdf))
}

/// `m` equally spaced probabilities from `theta_min` to `theta_max`.
pub fn equally_spaced_theta(theta_min: f64, theta_max: f64, m: usize) -> Result<ThetaVector> {
    check_probability("theta_min", theta_min)?;
    check_probability("theta_max", theta_max)?;
    if theta_min > theta_max {
        return Err(Error::Domain(format!(
            "theta_min = {theta_min} exceeds theta_max = {theta_max}"
        )));
    }
    if m == 0 {
        return Err(Error::Domain("m must be at least 1".into()));
    }
    if m == 1 {
        return ThetaVector::new(vec![theta_max]);
    }
    let step = (theta_max - theta_min) / (m - 1) as f64;
    let mut v: Vec<f64> = (0..m).map(|i| theta_min + step * i as f64).collect();
    v[m - 1] = theta_max;
    ThetaVector::new(v)
}

/// Bias of the sample maximum as the spread of an equally spaced Theta grows.
pub fn theta_min_bias_sweep(
    theta_max: f64,
    theta_mins: &[f64],
    m: usize,
    n: u64,
) -> Result<Vec<BiasRow>> {
    if theta_mins.is_empty() {
        return Err(Error::Usage("empty theta_min grid".into()));
    }
    theta_mins
        .iter()
        .map(|&lo| {
            let thetas = equally_spaced_theta(lo, theta_max, m)?;
            let expectation = nonidentical_max_distribution(n, &thetas)?.expectation();
            Ok(BiasRow {
                value: lo,
                expectation,
                bias: expectation - theta_max,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pmf_small_cases() {
        assert!((poisson_binomial_pmf(0, &[0.5, 0.5]).unwrap() - 0.25).abs() < 1e-15);
        assert!((poisson_binomial_pmf(1, &[0.2, 0.7]).unwrap() - 0.62).abs() < 1e-15);
        // 0.1*0.2*0.7 + 0.1*0.8*0.3 + 0.9*0.2*0.3
        assert!((poisson_binomial_pmf(2, &[0.1, 0.2, 0.3]).unwrap() - 0.092).abs() < 1e-15);
    }

    #[test]
    fn pmf_out_of_range() {
        assert!(poisson_binomial_pmf(3, &[0.5, 0.5]).is_err());
        assert!(poisson_binomial_pmf(0, &[1.2]).is_err());
    }

    #[test]
    fn spacing() {
        let v = equally_spaced_theta(0.0, 1.0, 3).unwrap();
        assert_eq!(v.as_slice(), &[0.0, 0.5, 1.0]);
        let v = equally_spaced_theta(0.9, 0.9, 5).unwrap();
        assert_eq!(v.as_slice(), &[0.9; 5]);
        let v = equally_spaced_theta(0.875, 0.90, 1000).unwrap();
        assert_eq!(v.as_slice()[0], 0.875);
        assert_eq!(v.as_slice()[999], 0.90);
        assert_eq!(
            equally_spaced_theta(0.2, 0.7, 1).unwrap().as_slice(),
            &[0.7]
        );
        assert!(equally_spaced_theta(0.9, 0.8, 3).is_err());
    }

    #[test]
    fn theta_vector_validation() {
        assert!(ThetaVector::new(vec![]).is_err());
        assert!(ThetaVector::new(vec![0.5, 1.01]).is_err());
        let v: ThetaVector = serde_json::from_str("[0.1, 0.9]").unwrap();
        assert_eq!(v.max(), 0.9);
        assert!(serde_json::from_str::<ThetaVector>("[]").is_err());
    }

    #[test]
    fn grouping_counts_duplicates() {
        let v = ThetaVector::new(vec![0.9, 0.5, 0.9, 0.5, 0.7]).unwrap();
        assert_eq!(v.grouped(), vec![(0.5, 2), (0.7, 1), (0.9, 2)]);
    }
}
