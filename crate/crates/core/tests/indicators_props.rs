mod common;

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use ion_zeno::indicators::*;
use proptest::prelude::*;

proptest! {
    #[test]
    fn large_chi_bounds(chi in 2.0..1e3f64) {
        let c2 = chi * chi;
        prop_assert!(min_survival(chi) >= 1.0 - 4.0 / c2);
        prop_assert!(mean_survival(chi) >= 1.0 - 2.0 / c2);
    }

    #[test]
    fn mean_exceeds_minimum(chi in 1e-6..1e3f64) {
        prop_assert!(mean_survival(chi) > min_survival(chi));
    }

    #[test]
    fn minimum_is_monotone_above_one(a in 1.0..100.0f64, b in 1.0..100.0f64) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(min_survival(lo) <= min_survival(hi));
    }

    #[test]
    fn level_means_match_quadrature(chi in 0.0..20.0f64) {
        let c2 = chi * chi;
        let s = 1.0 + c2;
        let p2 = common::period_average(|th| th.sin().powi(2) / s, 4096);
        let p3 = common::period_average(|th| c2 * (1.0 - th.cos()).powi(2) / (s * s), 4096);
        let p1 = common::period_average(|th| common::survival_curve(chi, th), 4096);
        let [m1, m2, m3] = mean_level_probabilities(chi);
        prop_assert!((m1 - p1).abs() <= 1e-12);
        prop_assert!((m2 - p2).abs() <= 1e-12);
        prop_assert!((m3 - p3).abs() <= 1e-12);
        prop_assert!((m1 + m2 + m3 - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn survival_stays_above_minimum(chi in 0.0..20.0f64, phase in 0.0..(2.0 * PI)) {
        prop_assert!(common::survival_curve(chi, phase) >= min_survival(chi) - 1e-15);
    }

    #[test]
    fn time_of_min_reaches_minimum(chi in 0.0..20.0f64, alpha in 0.1..5.0f64) {
        let t = time_of_min(alpha, chi).unwrap();
        let p = common::survival_curve(chi, rabi_frequency(alpha, chi) * t);
        prop_assert!((p - min_survival(chi)).abs() <= 1e-12);
        prop_assert!(t <= poincare_time(alpha, chi).unwrap() / 2.0 + 1e-12);
    }

    #[test]
    fn times_scale_inversely_with_alpha(chi in 0.0..20.0f64, alpha in 0.1..5.0f64) {
        let base = indicator_report(chi, 0.01, 1.0, DEFAULT_ORDER_THRESHOLD).unwrap();
        let other = indicator_report(chi, 0.01, alpha, DEFAULT_ORDER_THRESHOLD).unwrap();
        let rel = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs());
        prop_assert!(rel(base.scaled(base.poincare_time), other.scaled(other.poincare_time)));
        prop_assert!(rel(base.scaled(base.time_of_min), other.scaled(other.time_of_min)));
        prop_assert!(rel(base.scaled(base.sub_threshold), other.scaled(other.sub_threshold)));
    }

    #[test]
    fn sub_threshold_matches_grid(chi in 0.0..10.0f64, eps in 0.001..0.3f64) {
        let period = poincare_time(1.0, chi).unwrap();
        let closed = sub_threshold_measure(chi, eps, 1.0).unwrap() / period;
        let grid = common::grid_fraction_below(chi, mean_survival(chi) - eps, 100_000);
        prop_assert!((closed - grid).abs() <= 1e-4);
    }

    #[test]
    fn crossing_ends_the_advantage(chi in 0.05..30.0f64) {
        let z = gqze_interval(chi, 1.0, DEFAULT_ORDER_THRESHOLD).unwrap().unwrap();
        let omega = rabi_frequency(1.0, chi);
        let before = z.t_chi * (1.0 - 1e-6);
        let after = z.t_chi * (1.0 + 1e-6);
        let naive = |t: f64| common::survival_curve(chi, omega * t) - common::survival_curve(0.0, t);
        prop_assert!(naive(before) > 0.0);
        prop_assert!(naive(after) < 0.0);
        prop_assert!(z.t_chi <= PI + 1e-12);
    }
}

#[test]
fn sweep_locates_threshold_and_mean_minimum() {
    let chis = chi_grid(3.0, 0.01).unwrap();
    let reports = chi_sweep(&chis, 0.01, 1.0).unwrap();
    let first_positive = reports.iter().find(|r| r.min_survival > 0.0).unwrap();
    assert!((first_positive.chi - 1.01).abs() < 1e-12);
    let argmin = reports
        .iter()
        .min_by(|a, b| a.mean_survival.total_cmp(&b.mean_survival))
        .unwrap();
    assert!((argmin.chi - FRAC_1_SQRT_2).abs() <= 0.01);
}

#[test]
fn zeno_present_at_moderate_chi() {
    for chi in [2.0, 5.0, 10.0] {
        let z = gqze_interval(chi, 1.0, DEFAULT_ORDER_THRESHOLD)
            .unwrap()
            .unwrap();
        assert!(z.present && z.ratio >= 0.5, "chi {chi}: {z:?}");
    }
    assert_eq!(gqze_interval(0.0, 1.0, 0.5).unwrap(), None);
}

#[test]
fn advantage_is_quartic_near_zero() {
    for chi in [0.1, 1.0, 7.0] {
        for t in [1e-3, 1e-4, 1e-5] {
            let d = survival_advantage(chi, 1.0, t);
            let lead = chi * chi * t.powi(4) / 12.0;
            assert!(
                (d / lead - 1.0).abs() < 1e-3,
                "chi {chi} t {t}: {d} vs {lead}"
            );
        }
    }
}

#[test]
fn sweep_is_parallel_safe_and_ordered() {
    let chis: Vec<f64> = (0..200).map(|k| 0.05 * k as f64).collect();
    let a = chi_sweep(&chis, 0.02, 1.3).unwrap();
    let b: Vec<_> = chis
        .iter()
        .map(|&c| indicator_report(c, 0.02, 1.3, DEFAULT_ORDER_THRESHOLD).unwrap())
        .collect();
    assert_eq!(a, b);
}
