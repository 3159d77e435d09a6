//! Binomial tail probabilities in log space.
//!
//! The pmf is built by the ratio recurrence outward from the mode and
//! normalised by its own log-sum, so no gamma function is involved and
//! nothing underflows even when `n` is in the tens of thousands. Both tails
//! are accumulated separately, which keeps `P(X <= x)` and `P(X > x)` accurate
//! to full relative precision on either side of the mode.

use crate::error::{Error, Result, check_probability};

/// `ln(exp(a) + exp(b))`, tolerant of `-inf` operands.
pub(crate) fn ln_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Log-domain pmf and both tails of `X ~ B(n, p)`.
#[derive(Debug, Clone)]
pub struct BinomialTails {
    n: u64,
    ln_pmf: Vec<f64>,
    /// `ln P(X <= x)` for `x = 0..=n`.
    ln_lower: Vec<f64>,
    /// `ln P(X >= x)` for `x = 0..=n+1`; the last entry is `-inf`.
    ln_upper: Vec<f64>,
}

impl BinomialTails {
    pub fn new(n: u64, p: f64) -> Result<Self> {
        check_probability("p", p)?;
        let len = n as usize + 1;
        let mut ln_pmf = vec![f64::NEG_INFINITY; len];
        if p == 0.0 {
            ln_pmf[0] = 0.0;
        } else if p == 1.0 {
            ln_pmf[n as usize] = 0.0;
        } else {
            let ln_odds = p.ln() - (-p).ln_1p();
            let mode = (((n + 1) as f64 * p).floor() as usize).min(n as usize);
            ln_pmf[mode] = 0.0;
            let nf = n as f64;
            for x in mode + 1..len {
                let xf = x as f64;
                ln_pmf[x] = ln_pmf[x - 1] + (nf - xf + 1.0).ln() - xf.ln() + ln_odds;
            }
            for x in (0..mode).rev() {
                let xf = x as f64;
                ln_pmf[x] = ln_pmf[x + 1] + (xf + 1.0).ln() - (nf - xf).ln() - ln_odds;
            }
        }

        let mut ln_lower = vec![f64::NEG_INFINITY; len];
        let mut acc = f64::NEG_INFINITY;
        for (x, &lp) in ln_pmf.iter().enumerate() {
            acc = ln_add_exp(acc, lp);
            ln_lower[x] = acc;
        }
        let ln_total = acc;
        for v in ln_pmf.iter_mut() {
            *v -= ln_total;
        }
        for v in ln_lower.iter_mut() {
            *v -= ln_total;
        }
        ln_lower[len - 1] = 0.0;

        let mut ln_upper = vec![f64::NEG_INFINITY; len + 1];
        let mut acc = f64::NEG_INFINITY;
        for x in (0..len).rev() {
            acc = ln_add_exp(acc, ln_pmf[x]);
            ln_upper[x] = acc;
        }

        Ok(Self {
            n,
            ln_pmf,
            ln_lower,
            ln_upper,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn ln_pmf(&self, x: u64) -> f64 {
        self.ln_pmf
            .get(x as usize)
            .copied()
            .unwrap_or(f64::NEG_INFINITY)
    }

    pub fn pmf(&self, x: u64) -> f64 {
        self.ln_pmf(x).exp()
    }

    /// `ln P(X <= x)`.
    pub fn ln_cdf(&self, x: u64) -> f64 {
        self.ln_lower[(x as usize).min(self.n as usize)]
    }

    /// `ln P(X > x)`, i.e. `ln(1 - P(X <= x))` without cancellation.
    pub fn ln_sf(&self, x: u64) -> f64 {
        self.ln_upper[(x as usize + 1).min(self.n as usize + 1)]
    }

    /// `P(X <= x)`, taken from whichever tail is smaller.
    pub fn cdf(&self, x: u64) -> f64 {
        let lower = self.ln_cdf(x);
        let upper = self.ln_sf(x);
        if lower <= upper {
            lower.exp()
        } else {
            -upper.exp_m1()
        }
    }

    /// `P(X > x)`.
    pub fn sf(&self, x: u64) -> f64 {
        let lower = self.ln_cdf(x);
        let upper = self.ln_sf(x);
        if upper <= lower {
            upper.exp()
        } else {
            -lower.exp_m1()
        }
    }

    /// `P(X >= x)`.
    pub fn sf_inclusive(&self, x: u64) -> f64 {
        if x == 0 { 1.0 } else { self.sf(x - 1) }
    }
}

/// Exact (Clopper–Pearson) two-sided `1 - alpha` interval for a binomial
/// proportion with `successes` out of `n` trials.
///
/// Bounds are found by bisection on the binomial tails; the lower bound is the
/// `p` with `P(X >= k | p) = alpha/2`, the upper bound the `p` with
/// `P(X <= k | p) = alpha/2`.
pub fn clopper_pearson(successes: u64, n: u64, alpha: f64) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    if successes > n {
        return Err(Error::Domain(format!(
            "successes {successes} exceed n = {n}"
        )));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha = {alpha} is not in (0, 1)")));
    }
    let half = alpha / 2.0;
    let low = if successes == 0 {
        0.0
    } else {
        // P(X >= k | p) increases with p.
        bisect_probability(|p| BinomialTails::new(n, p).map(|t| t.sf_inclusive(successes) - half))?
    };
    let high = if successes == n {
        1.0
    } else {
        // P(X <= k | p) decreases with p.
        bisect_probability(|p| BinomialTails::new(n, p).map(|t| half - t.cdf(successes)))?
    };
    Ok((low, high))
}

/// Root of an increasing function of `p` on `[0, 1]`.
fn bisect_probability(mut f: impl FnMut(f64) -> Result<f64>) -> Result<f64> {
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Clopper–Pearson interval for an observed accuracy `score` on `n` items,
/// with the success count taken as `round(score * n)`.
pub fn accuracy_interval(score: f64, n: u64, alpha: f64) -> Result<(f64, f64)> {
    check_probability("score", score)?;
    let successes = (score * n as f64).round() as u64;
    clopper_pearson(successes.min(n), n, alpha)
}
