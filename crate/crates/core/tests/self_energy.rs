mod common;

use std::f64::consts::{PI, TAU};

use common::{c, reference_model, quad, sigma_by_quadrature, C};
use floquet_hhg::self_energy::SelfEnergy;
use floquet_hhg::{select_sheet, sigma, sigma_prime, spectral_density, Error, Sheet};
use proptest::prelude::*;
use rand_like::Lcg;

mod rand_like {
    /// Tiny deterministic generator so the sample set is fixed.
    pub struct Lcg(pub u64);

    impl Lcg {
        pub fn next_f64(&mut self) -> f64 {
            self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (self.0 >> 11) as f64 / (1u64 << 53) as f64
        }
    }
}

#[test]
fn closed_form_matches_quadrature_at_sampled_points() {
    let p = reference_model(0.1);
    let mut rng = Lcg(12345);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let re = -2.0 + 12.0 * rng.next_f64();
        let mag = 10f64.powf(-3.0 + 4.0 * rng.next_f64());
        let im = if rng.next_f64() < 0.5 { -mag } else { mag };
        let z = c(re, im);
        let closed = sigma(&p, 0, z, Sheet::First).unwrap();
        let oracle = sigma_by_quadrature(z, TAU);
        worst = worst.max(common::rel(closed, oracle));
    }
    assert!(worst < 1e-8, "worst relative error {worst:e}");
}

#[test]
fn quadrature_reference_point() {
    let p = reference_model(0.1);
    let z = c(1.0, 0.5);
    let closed = sigma(&p, 0, z, Sheet::First).unwrap();
    assert!(common::rel(closed, sigma_by_quadrature(z, TAU)) < 1e-8);
}

#[test]
fn large_argument_asymptote() {
    let p = reference_model(0.1);
    let z = c(0.0, 100.0);
    let s = sigma(&p, 0, z, Sheet::First).unwrap();
    let lead = C::new(8.0 * PI * PI, 0.0) / z;
    assert!(common::rel(s, lead) < 0.05);
}

#[test]
fn derivative_matches_finite_differences() {
    let p = reference_model(0.1);
    for (z, sheet) in [(c(1.0, 0.5), Sheet::First), (c(1.0, -0.2), Sheet::Second)] {
        let h = 1e-5;
        let fd = (sigma(&p, 0, z + h, sheet).unwrap() - sigma(&p, 0, z - h, sheet).unwrap()) / (2.0 * h);
        let exact = sigma_prime(&p, 0, z, sheet).unwrap();
        assert!(common::rel(exact, fd) < 1e-8);
    }
    let first = sigma_prime(&p, 0, c(1.0, -0.2), Sheet::First).unwrap();
    let second = sigma_prime(&p, 0, c(1.0, -0.2), Sheet::Second).unwrap();
    assert!((second - first - c(0.0, -8.0 * PI)).norm() < 1e-13);
}

#[test]
fn continuity_across_the_cut() {
    let p = reference_model(0.1);
    for e in [0.3, 1.0, 3.5, 6.0] {
        let gaps: Vec<f64> = [1e-3, 1e-5, 1e-7]
            .iter()
            .map(|&d| {
                let above = sigma(&p, 0, c(e, d), Sheet::First).unwrap();
                let below = sigma(&p, 0, c(e, -d), Sheet::Second).unwrap();
                (above - below).norm()
            })
            .collect();
        // the jump closes linearly in delta
        assert!(gaps[1] < gaps[0] * 0.05 && gaps[2] < gaps[1] * 0.05, "E = {e}: {gaps:?}");
        // Richardson: 2 f(d) - f(2d) removes the linear term
        let d = 1e-4;
        let jump = |d: f64| sigma(&p, 0, c(e, d), Sheet::First).unwrap() - sigma(&p, 0, c(e, -d), Sheet::Second).unwrap();
        assert!((jump(d) * 2.0 - jump(2.0 * d)).norm() < 1e-6);
    }
}

#[test]
fn first_sheet_jumps_across_the_cut() {
    let p = reference_model(0.1);
    let above = sigma(&p, 0, c(1.0, 1e-9), Sheet::First).unwrap();
    let below = sigma(&p, 0, c(1.0, -1e-9), Sheet::First).unwrap();
    // the discontinuity is 2 pi rho(E) = 8 pi E
    assert!(((above - below).im + 8.0 * PI).abs() < 1e-6);
}

#[test]
fn plemelj_limit() {
    let p = reference_model(0.1);
    let e = 1.0;
    let values: Vec<f64> = [1e-3, 1e-5, 1e-7]
        .iter()
        .map(|&d| sigma(&p, 0, c(e, d), Sheet::First).unwrap().im)
        .collect();
    let target = -4.0 * PI * e;
    let extrapolated = values[2] - (values[1] - values[2]) * 1e-7 / (1e-5 - 1e-7);
    assert!((extrapolated - target).abs() < 1e-4);
    assert!((values[2] - target).abs() < (values[0] - target).abs());
    assert!((values[0] - target).abs() < 1e-2);
}

#[test]
fn boundary_value_matches_plemelj_split() {
    let p = reference_model(0.1);
    let se = SelfEnergy::new(&p);
    let e: f64 = 1.0;
    // principal value from quadrature, excising a symmetric gap
    let f = |x: f64| C::new(4.0 * x / (e - x), 0.0);
    let g = 1e-6;
    let pv = quad(&f, 0.0, e - g, 1e-12) + quad(&f, e + g, TAU, 1e-12);
    let bv = se.boundary_value(0, e).unwrap();
    assert!((bv.re - pv.re).abs() < 1e-4);
    assert!((bv.im + PI * spectral_density(&p, e)).abs() < 1e-12);
}

#[test]
fn spectral_density_values() {
    let p = reference_model(0.1);
    assert_eq!(spectral_density(&p, 1.0), 4.0);
    assert_eq!(spectral_density(&p, TAU + 0.1), 0.0);
    assert_eq!(spectral_density(&p, -0.5), 0.0);
}

#[test]
fn sheet_selection_examples() {
    let p = reference_model(0.1);
    assert_eq!(select_sheet(&p, 0, c(1.0, -0.05)), Sheet::Second);
    assert_eq!(select_sheet(&p, 2, c(1.0, -0.05)), Sheet::First);
    assert_eq!(select_sheet(&p, 0, c(1.0, 0.0)), Sheet::First);
}

#[test]
fn branch_points_and_continuation_window_are_errors() {
    let p = reference_model(0.1);
    assert!(matches!(sigma(&p, 0, c(0.0, 0.0), Sheet::First), Err(Error::BranchPoint { .. })));
    assert!(matches!(sigma(&p, 0, c(TAU, 0.0), Sheet::First), Err(Error::BranchPoint { .. })));
    assert!(matches!(
        sigma(&p, 2, c(1.0, -0.05), Sheet::Second),
        Err(Error::OutsideContinuation { channel: 2, .. })
    ));
}

proptest! {
    #[test]
    fn reflection_symmetry(re in -3.0f64..10.0, im in 1e-3f64..5.0) {
        let p = reference_model(0.1);
        let z = c(re, im);
        let a = sigma(&p, 0, z.conj(), Sheet::First).unwrap();
        let b = sigma(&p, 0, z, Sheet::First).unwrap().conj();
        prop_assert!((a - b).norm() <= 1e-12 * b.norm().max(1.0));
    }

    #[test]
    fn half_plane_mapping(re in -3.0f64..10.0, im in 1e-3f64..5.0, lower in any::<bool>()) {
        let p = reference_model(0.1);
        let z = c(re, if lower { -im } else { im });
        let s = sigma(&p, 0, z, Sheet::First).unwrap();
        prop_assert_eq!(s.im.signum(), -z.im.signum());
    }

    #[test]
    fn shift_identity(n in -6i32..6, re in -4.0f64..12.0, im in -2.0f64..2.0) {
        prop_assume!(im.abs() > 1e-6);
        let p = reference_model(0.1);
        let z = c(re, im);
        let shifted = z - n as f64 * p.omega();
        for sheet in [Sheet::First, Sheet::Second] {
            match (sigma(&p, n, z, sheet), sigma(&p, 0, shifted, sheet)) {
                (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
                (Err(_), Err(_)) => {}
                (a, b) => prop_assert!(false, "{:?} vs {:?}", a, b),
            }
        }
    }
}
