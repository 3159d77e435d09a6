use proptest::prelude::*;
use sota_bias::binomial::{BinomialTails, clopper_pearson};
use sota_bias::exact::{
    CohortSpec, TrialModel, binomial_tail, max_cdf, max_distribution, summarize,
};
use statrs::distribution::{Beta, Binomial, ContinuousCDF, DiscreteCDF};

/// Distribution of the smallest failure count over every 2^(m n) outcome
/// table, for theta = k / 100. Weights are exact integers over 100^(m n).
fn enumerate_min_failures(m: usize, n: usize, k: u128) -> Vec<f64> {
    let mut counts = vec![0u128; n + 1];
    for table in 0u64..(1 << (m * n)) {
        let mut weight = 1u128;
        let mut min = n;
        for j in 0..m {
            let s = ((table >> (j * n)) & ((1 << n) - 1)).count_ones() as usize;
            weight *= k.pow(s as u32) * (100 - k).pow((n - s) as u32);
            min = min.min(n - s);
        }
        counts[min] += weight;
    }
    let total = 100u128.pow((m * n) as u32) as f64;
    counts.into_iter().map(|c| c as f64 / total).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn matches_outcome_table_enumeration(m in 1usize..=3, n in 1usize..=6, k in 1u128..100) {
        let pmf = enumerate_min_failures(m, n, k);
        let theta = k as f64 / 100.0;
        let model = TrialModel::new(n as u64, theta).unwrap();
        let cohort = CohortSpec::new(m as u64).unwrap();
        let dist = max_distribution(&cohort, &model);
        let mut cdf = 0.0;
        for (z, &p) in pmf.iter().enumerate() {
            cdf += p;
            prop_assert!((max_cdf(z as u64, &cohort, &model).unwrap() - cdf).abs() < 1e-12);
            prop_assert!((dist.pmf()[z] - p).abs() < 1e-12);
        }
    }

    #[test]
    fn binomial_tail_matches_statrs(n in 1u64..2000, theta in 0.001f64..0.999, frac in 0.0f64..1.0) {
        let x = ((n as f64) * frac) as u64;
        let ours = binomial_tail(x, &TrialModel::new(n, theta).unwrap()).unwrap();
        let oracle = Binomial::new(1.0 - theta, n).unwrap().cdf(x);
        prop_assert!((ours - oracle).abs() <= 1e-10 * oracle.max(1e-300) + 1e-14, "{ours} vs {oracle}");
    }

    #[test]
    fn tails_are_complementary(n in 1u64..5000, p in 0.0f64..=1.0, frac in 0.0f64..1.0) {
        let t = BinomialTails::new(n, p).unwrap();
        let x = ((n as f64) * frac) as u64;
        prop_assert!((t.cdf(x) + t.sf(x) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pmf_sums_to_one(m in 1u64..5000, n in 1u64..3000, theta in 0.05f64..0.99) {
        let dist = max_distribution(&CohortSpec::new(m).unwrap(), &TrialModel::new(n, theta).unwrap());
        prop_assert!((dist.pmf().iter().sum::<f64>() - 1.0).abs() < 1e-9);
        prop_assert!((dist.cdf()[n as usize] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn more_classifiers_never_lower_the_expectation(m in 1u64..2000, n in 10u64..2000, theta in 0.05f64..0.95) {
        let model = TrialModel::new(n, theta).unwrap();
        let a = max_distribution(&CohortSpec::new(m).unwrap(), &model).expectation();
        let b = max_distribution(&CohortSpec::new(m + 1).unwrap(), &model).expectation();
        prop_assert!(b >= a - 1e-12);
    }

    #[test]
    fn clopper_pearson_matches_beta_quantiles(n in 1u64..500, frac in 0.0f64..=1.0) {
        let x = ((n as f64) * frac).round() as u64;
        let (lo, hi) = clopper_pearson(x, n, 0.05).unwrap();
        let xf = x as f64;
        let nf = n as f64;
        let lo_oracle = if x == 0 { 0.0 } else { Beta::new(xf, nf - xf + 1.0).unwrap().inverse_cdf(0.025) };
        let hi_oracle = if x == n { 1.0 } else { Beta::new(xf + 1.0, nf - xf).unwrap().inverse_cdf(0.975) };
        prop_assert!((lo - lo_oracle).abs() < 1e-7, "{lo} vs {lo_oracle}");
        prop_assert!((hi - hi_oracle).abs() < 1e-7, "{hi} vs {hi_oracle}");
    }
}

#[test]
fn hand_checked_values() {
    let tail = binomial_tail(0, &TrialModel::new(5, 0.9).unwrap()).unwrap();
    assert!((tail - 0.59049).abs() < 1e-12);

    let z1 = max_cdf(
        1,
        &CohortSpec::new(3).unwrap(),
        &TrialModel::new(4, 0.5).unwrap(),
    )
    .unwrap();
    assert!((z1 - (1.0 - (1.0f64 - 5.0 / 16.0).powi(3))).abs() < 1e-12);

    // m = 2, n = 3, theta = 0.5: P(min failures <= z) = 1 - (1 - P_z)^2 with P_z = {1, 4, 7, 8}/8.
    let dist = max_distribution(
        &CohortSpec::new(2).unwrap(),
        &TrialModel::new(3, 0.5).unwrap(),
    );
    let expected = [15.0 / 64.0, 33.0 / 64.0, 15.0 / 64.0, 1.0 / 64.0];
    for (got, want) in dist.pmf().iter().zip(expected) {
        assert!((got - want).abs() < 1e-15);
    }
}

#[test]
fn median_of_max_lies_after_248_failures() {
    let dist = max_distribution(
        &CohortSpec::new(1000).unwrap(),
        &TrialModel::new(3000, 0.9).unwrap(),
    );
    assert!(dist.cdf()[248] < 0.5 && dist.cdf()[249] >= 0.5);
    let s = summarize(&dist, 0.05).unwrap();
    assert!(s.ci_low < dist.accuracy(248) && dist.accuracy(248) < s.ci_high);
}
