use proptest::prelude::*;
use sota_bias::exact::{CohortSpec, TrialModel, max_cdf};
use sota_bias::poisson_binomial::{
    ThetaVector, equally_spaced_theta, nonidentical_max_cdf, nonidentical_max_distribution,
    poisson_binomial_pmf,
};

fn subset_enumeration(k: usize, probs: &[f64]) -> f64 {
    (0u32..1 << probs.len())
        .filter(|s| s.count_ones() as usize == k)
        .map(|s| {
            probs
                .iter()
                .enumerate()
                .map(|(i, &p)| if s >> i & 1 == 1 { p } else { 1.0 - p })
                .product::<f64>()
        })
        .sum()
}

proptest! {
    #[test]
    fn pmf_matches_subset_enumeration(probs in prop::collection::vec(0.0f64..=1.0, 1..12), k in 0usize..12) {
        let k = k.min(probs.len());
        let got = poisson_binomial_pmf(k, &probs).unwrap();
        prop_assert!((got - subset_enumeration(k, &probs)).abs() < 1e-12);
    }

    #[test]
    fn nonidentical_matches_table_enumeration(thetas in prop::collection::vec(0.01f64..0.99, 1..=3), n in 1usize..=5) {
        let m = thetas.len();
        let mut cdf = vec![0.0; n + 1];
        for table in 0u64..(1 << (m * n)) {
            let mut p = 1.0;
            let mut min = n;
            for (j, &t) in thetas.iter().enumerate() {
                let s = ((table >> (j * n)) & ((1 << n) - 1)).count_ones() as usize;
                p *= t.powi(s as i32) * (1.0 - t).powi((n - s) as i32);
                min = min.min(n - s);
            }
            for c in cdf.iter_mut().skip(min) {
                *c += p;
            }
        }
        let tv = ThetaVector::new(thetas.clone()).unwrap();
        for (z, want) in cdf.iter().enumerate() {
            let got = nonidentical_max_cdf(z as u64, n as u64, &tv).unwrap();
            prop_assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn order_of_theta_is_irrelevant(mut thetas in prop::collection::vec(0.5f64..0.99, 2..40), n in 50u64..500) {
        let a = nonidentical_max_distribution(n, &ThetaVector::new(thetas.clone()).unwrap()).unwrap();
        thetas.reverse();
        let b = nonidentical_max_distribution(n, &ThetaVector::new(thetas).unwrap()).unwrap();
        prop_assert_eq!(a.cdf(), b.cdf());
    }
}

#[test]
fn hand_checked_pmf() {
    assert!((poisson_binomial_pmf(1, &[0.2, 0.7]).unwrap() - 0.62).abs() < 1e-15);
    assert!((poisson_binomial_pmf(2, &[0.1, 0.2, 0.3]).unwrap() - 0.092).abs() < 1e-15);
}

#[test]
fn two_classifier_example() {
    let p1 = |t: f64| t.powi(4) + 4.0 * t.powi(3) * (1.0 - t);
    let want = 1.0 - (1.0 - p1(0.25)) * (1.0 - p1(0.9));
    let got = nonidentical_max_cdf(1, 4, &ThetaVector::new(vec![0.25, 0.9]).unwrap()).unwrap();
    assert!((got - want).abs() < 1e-12);
}

#[test]
fn identical_vector_reduces_to_closed_form() {
    let tv = ThetaVector::identical(0.9, 500).unwrap();
    let model = TrialModel::new(1000, 0.9).unwrap();
    let cohort = CohortSpec::new(500).unwrap();
    for z in [60, 80, 100, 120] {
        let a = nonidentical_max_cdf(z, 1000, &tv).unwrap();
        let b = max_cdf(z, &cohort, &model).unwrap();
        assert!((a - b).abs() < 1e-12);
    }
    let spaced = equally_spaced_theta(0.9, 0.9, 500).unwrap();
    assert_eq!(spaced.as_slice(), tv.as_slice());
}
