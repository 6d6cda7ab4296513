mod common;

use common::{bessel_integral, bessel_series, reference_model};
use floquet_hhg::perturbation::bessel_j_orders;
use floquet_hhg::{bessel_j, open_channels, perturbative_eigenvalue, BesselWeightTable, ChannelWindow};
use proptest::prelude::*;

#[test]
fn series_and_integral_oracles_agree() {
    for n in -6..=6 {
        for x in [0.1, 1.0, 2.0, 2.4, 5.0, 8.0] {
            let s = bessel_series(n, x);
            let i = bessel_integral(n, x);
            assert!((s - i).abs() < 1e-12, "n = {n}, x = {x}: {s} vs {i}");
        }
    }
}

#[test]
fn miller_recurrence_matches_oracles() {
    for n in -12..=12 {
        for x in [0.05, 0.5, 1.0, 2.0, 3.7, 7.5, 12.0] {
            let j = bessel_j(n, x);
            assert!((j - bessel_series(n, x)).abs() < 1e-12, "n = {n}, x = {x}");
            assert!((j - bessel_integral(n, x)).abs() < 1e-12, "n = {n}, x = {x}");
        }
    }
}

#[test]
fn reference_value_at_two() {
    assert!((bessel_j(0, 2.0f64) - 0.223_890_779_141_235_67).abs() < 1e-15);
    assert_eq!(bessel_j(-1, 2.0f64), -bessel_j(1, 2.0f64));
}

#[test]
fn high_orders_stay_small_and_positive() {
    let v = bessel_j_orders(40, 2.0f64);
    for w in v[3..].windows(2) {
        assert!(w[1] < w[0] && w[1] > 0.0);
    }
    assert!((v[30] - bessel_series(30, 2.0)).abs() < 1e-30);
}

#[test]
fn perturbative_imaginary_part_is_the_golden_rule_sum() {
    let p = reference_model(0.1);
    let z = perturbative_eigenvalue(&p, ChannelWindow::default()).unwrap();
    let open = open_channels(&p, ChannelWindow::default());
    assert_eq!(open.open, vec![0, -1, -2, -3, -4]);
    let rate: f64 = open
        .open
        .iter()
        .map(|&n| 4.0 * (1.0 - 1.2 * n as f64) * bessel_series(n, 2.0).powi(2))
        .sum();
    assert!((z.im + 0.01 * std::f64::consts::PI * rate).abs() < 1e-13);
}

#[test]
fn perturbative_imaginary_part_is_never_positive() {
    for eps in [-3.0, -0.5, 0.4, 1.0, 2.7, 9.0] {
        for ratio in [0.0, 0.7, 2.0, 3.3] {
            let Ok(p) = floquet_hhg::ModelParams::with_drive_ratio(eps, ratio, 1.1, 0.1, std::f64::consts::TAU) else {
                continue;
            };
            if let Ok(z) = perturbative_eigenvalue(&p, ChannelWindow::default()) {
                let open = open_channels(&p, ChannelWindow::default());
                assert!(z.im <= 0.0);
                // the rate vanishes only through closed channels or a Bessel zero
                if open.is_empty() {
                    assert_eq!(z.im, 0.0);
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn closure_identity(x in 0.0f64..25.0) {
        let n = x.ceil() as i32 + 40;
        let t = BesselWeightTable::new(x, ChannelWindow::symmetric(n));
        prop_assert!((t.closure() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn agrees_with_series(n in -10i32..10, x in 0.0f64..10.0) {
        prop_assert!((bessel_j(n, x) - bessel_series(n, x)).abs() < 1e-12);
    }

    #[test]
    fn three_term_recurrence(n in 1i32..15, x in 0.1f64..15.0) {
        let lhs = bessel_j(n - 1, x) + bessel_j(n + 1, x);
        let rhs = 2.0 * n as f64 / x * bessel_j(n, x);
        prop_assert!((lhs - rhs).abs() < 1e-12 * (1.0 + rhs.abs() + 2.0 * n as f64 / x));
    }
}
