mod common;

use std::f64::consts::TAU;

use common::{c, reference_model};
use floquet_hhg::observables::{local_maxima, resonance_spatial_field, survival_amplitude_floquet, PolePairing};
use floquet_hhg::oracle::{
    compare, discretize, evolve, photon_spectrum, spatial_field, survival_probability, EvolveOptions, Sampling,
    SectorState, Series, Tolerance, Trajectory,
};
use floquet_hhg::{
    make_model, solve_resonance, DiscretizedSystem, Error, Grid1D, GridKind, ModelParams, SheetPolicy, SolverOptions,
};

fn run(p: &ModelParams, box_length: f64, modes: usize, t_end: f64, dt: f64) -> (DiscretizedSystem, Trajectory<f64>) {
    let system = discretize(p, box_length, modes).unwrap();
    let opts = EvolveOptions {
        stride: 10,
        ..EvolveOptions::new(t_end, dt)
    };
    let traj = evolve(&system, &SectorState::excited(&system), &opts).unwrap();
    (system, traj)
}

fn window(lo: f64, hi: f64) -> Tolerance<f64> {
    Tolerance {
        name: "window".into(),
        relative: 0.0,
        lo,
        hi,
        calibrate: false,
        sampling: Sampling::All,
    }
}

#[test]
fn default_box_retains_the_band() {
    let system = discretize(&reference_model(0.1), 400.0, 8192).unwrap();
    assert!((system.spacing() - 0.0157).abs() < 1e-4);
    assert_eq!(system.len(), 800);
    assert!(system.k.iter().all(|k| k.abs() <= TAU * (1.0 + 1e-15) && *k != 0.0));
    assert!(discretize(&reference_model(0.1), 400.0, 100).is_err());
    assert!(discretize(&reference_model(0.1), 400.0, 8191).is_err());
}

#[test]
fn uncoupled_level_keeps_its_norm_and_accumulates_the_drive_phase() {
    let p = reference_model(0.0);
    let (_, traj) = run(&p, 100.0, 2048, 10.0, 1e-3);
    for s in &traj.samples {
        assert!((s.psi_d.norm() - 1.0).abs() < 1e-12);
        let phase = 1.0 * s.t + 2.0 * (1.0 - (1.2 * s.t).cos());
        assert!((s.psi_d - c(0.0, -phase).exp()).norm() < 1e-9, "t = {}", s.t);
    }
}

#[test]
fn undriven_decay_follows_the_friedrichs_pole() {
    let p = make_model(1.0, 0.0, 1.2, 0.1, TAU).unwrap();
    let state = solve_resonance(&p, &SolverOptions::default()).unwrap();
    let (_, traj) = run(&p, 400.0, 8192, 20.0, 1e-3);
    let surv = survival_probability(&traj);
    // the pole term carries its residue |N_d|^2 as well as the exponential
    let pole = Series {
        x: surv.x.clone(),
        y: surv.x.iter().map(|&t| survival_amplitude_floquet(&state, t).norm_sqr()).collect(),
    };
    assert!((pole.y[0] - state.n_d.norm_sqr()).abs() < 1e-12);
    for (t, y) in pole.x.iter().zip(&pole.y) {
        assert!((y - state.n_d.norm_sqr() * (2.0 * state.z.im * t).exp()).abs() < 1e-12);
    }
    let report = compare(
        &pole,
        &surv,
        &Tolerance {
            relative: 0.03,
            ..window(1.0, 20.0)
        },
    )
    .unwrap();
    assert!(report.passed, "{report:?}");
}

#[test]
fn rk4_is_fourth_order() {
    let p = reference_model(0.1);
    let at = |dt: f64| {
        let system = discretize(&p, 100.0, 2048).unwrap();
        let opts = EvolveOptions {
            drift_tolerance: 1.0,
            ..EvolveOptions::new(4.0, dt)
        };
        evolve(&system, &SectorState::excited(&system), &opts).unwrap().last().psi_d
    };
    let (a, b, c) = (at(0.04), at(0.02), at(0.01));
    let ratio = (a - b).norm() / (b - c).norm();
    assert!((ratio.log2() - 4.0).abs() < 0.3, "ratio {ratio}");
}

#[test]
fn norm_is_conserved_at_the_default_step() {
    let (_, traj) = run(&reference_model(0.1), 400.0, 8192, 20.0, 1e-3);
    assert!(traj.norm_drift < 1e-8);
    for s in &traj.samples {
        assert!((s.norm_sqr() - 1.0).abs() < 1e-8);
    }
}

#[test]
fn norm_drift_beyond_tolerance_is_an_error() {
    let p = reference_model(0.1);
    let system = discretize(&p, 100.0, 2048).unwrap();
    let opts = EvolveOptions {
        drift_tolerance: 1e-14,
        ..EvolveOptions::new(2.0, 0.05)
    };
    let err = evolve(&system, &SectorState::excited(&system), &opts).unwrap_err();
    assert!(matches!(err, Error::NormDrift { .. }) && err.is_numerical());
}

#[test]
fn doubling_the_box_leaves_early_observables_unchanged() {
    let p = reference_model(0.1);
    let (_, small) = run(&p, 400.0, 8192, 20.0, 1e-3);
    let (_, large) = run(&p, 800.0, 16384, 20.0, 1e-3);
    let a = survival_probability(&small);
    let b = survival_probability(&large);
    let report = compare(
        &a,
        &b,
        &Tolerance {
            relative: 0.005,
            ..window(0.0, 20.0)
        },
    )
    .unwrap();
    assert!(report.passed, "{report:?}");
}

#[test]
fn photon_weight_complements_survival() {
    let (system, traj) = run(&reference_model(0.1), 400.0, 8192, 10.0, 1e-3);
    for s in traj.samples.iter().step_by(20) {
        let spec = photon_spectrum(&system, s);
        assert!((spec.total_weight - (1.0 - s.psi_d.norm_sqr())).abs() < 1e-9);
    }
    let spec = photon_spectrum(&system, traj.last());
    assert!(spec.warning.is_some());
}

#[test]
fn undriven_oracle_spectrum_is_one_line() {
    let p = make_model(1.0, 0.0, 1.2, 0.1, TAU).unwrap();
    let state = solve_resonance(&p, &SolverOptions::default()).unwrap();
    let (system, traj) = run(&p, 400.0, 8192, 40.0, 1e-3);
    let spec = photon_spectrum(&system, traj.last());
    let positive: Vec<(f64, f64)> = spec.k.iter().zip(&spec.density).filter(|(k, _)| **k > 0.0).map(|(k, d)| (*k, *d)).collect();
    let values: Vec<f64> = positive.iter().map(|(_, d)| *d).collect();
    let peaks = local_maxima(&values, 0.05);
    assert_eq!(peaks.len(), 1);
    assert!((positive[peaks[0]].0 - state.z.re).abs() < 0.05);
}

#[test]
fn initial_field_is_empty() {
    let system = discretize(&reference_model(0.1), 400.0, 8192).unwrap();
    let grid = Grid1D::uniform(-30.0, 30.0, 61, GridKind::Position).unwrap();
    let f = spatial_field(&system, &SectorState::excited(&system), &grid).unwrap();
    assert!(f.iter().all(|v| v.norm() == 0.0));
    let outside = Grid1D::uniform(-250.0, 0.0, 3, GridKind::Position).unwrap();
    assert!(spatial_field(&system, &SectorState::excited(&system), &outside).is_err());
}

#[test]
fn pulse_maxima_line_up_with_the_resonance_field() {
    let p = reference_model(0.1);
    let state = solve_resonance(&p, &SolverOptions::default()).unwrap();
    let (system, traj) = run(&p, 400.0, 8192, 20.0, 1e-3);
    let grid = Grid1D::uniform(0.0, 18.0, 361, GridKind::Position).unwrap();
    let oracle: Vec<f64> = spatial_field(&system, traj.at(20.0), &grid)
        .unwrap()
        .iter()
        .map(|v| v.norm_sqr())
        .collect();
    let res = resonance_spatial_field(&state, &grid, 20.0, 12, PolePairing::Retarded).unwrap();
    let a = local_maxima(&oracle, 0.01);
    let b = local_maxima(&res.intensity, 0.01);
    assert_eq!(a.len(), b.len(), "{a:?} vs {b:?}");
    for (i, j) in a.iter().zip(&b) {
        assert!(i.abs_diff(*j) <= 1, "{a:?} vs {b:?}");
    }
}

#[test]
fn identical_series_compare_exactly() {
    let s = Series {
        x: vec![0.0, 1.0, 2.0, 3.0],
        y: vec![1.0, 0.5, 0.25, 0.125],
    };
    let r = compare(&s, &s, &window(0.0, 3.0)).unwrap();
    assert_eq!(r.max_relative_error, 0.0);
    assert!(r.passed);
    let short = Series {
        x: vec![0.0, 1.0],
        y: vec![1.0, 0.5],
    };
    assert!(matches!(compare(&s, &short, &window(0.0, 3.0)), Err(Error::GridMismatch(_))));
}

#[test]
fn wrong_sheet_prediction_fails_the_survival_comparison() {
    let p = reference_model(0.1);
    let (_, traj) = run(&p, 400.0, 8192, 20.0, 1e-3);
    let surv = survival_probability(&traj);
    let opts = SolverOptions {
        sheet_policy: SheetPolicy::FirstOnly,
        ..SolverOptions::default()
    };
    let tol = Tolerance {
        relative: 0.05,
        ..window(1.0, 20.0)
    };
    match solve_resonance(&p, &opts) {
        Ok(state) => {
            assert!(state.z.im.abs() < 1e-10);
            let predicted = Series {
                x: surv.x.clone(),
                y: surv.x.iter().map(|&t| survival_amplitude_floquet(&state, t).norm_sqr()).collect(),
            };
            assert!(!compare(&predicted, &surv, &tol).unwrap().passed);
        }
        Err(e) => assert!(e.is_numerical()),
    }
}
