//! Brute-force reference: the single-excitation Schrodinger equation on a
//! box-discretized continuum, integrated with classical RK4.
//!
//! The amplitudes obey
//!
//! ```text
//! i d/dt psi_d   = (epsilon_d + A sin(omega t)) psi_d + lambda sum_j V_j psi_j
//! i d/dt psi_j   = |k_j| psi_j + lambda V_j psi_d
//! ```
//!
//! with `k_j = 2 pi j / L` and `V_j = sqrt(4 pi |k_j| / L)` for `|k_j| <= k_c`.

mod compare;

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{Grid1D, ModelParams};
use crate::scalar::{cplx, Real};

pub use compare::{compare, ComparisonReport, Sampling, Series, Tolerance};

#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedSystem<T> {
    pub params: ModelParams<T>,
    pub box_length: T,
    pub mode_count: usize,
    /// Retained wave numbers, ascending, zero excluded.
    pub k: Vec<T>,
    pub coupling: Vec<T>,
}

impl<T: Real> DiscretizedSystem<T> {
    pub fn spacing(&self) -> T {
        T::TAU() / self.box_length
    }

    pub fn len(&self) -> usize {
        self.k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k.is_empty()
    }
}

/// Box of length `L` with `N` candidate modes `j in [-N/2, N/2] \ {0}`;
/// modes beyond the cutoff are decoupled and dropped.
pub fn discretize<T: Real>(params: &ModelParams<T>, box_length: T, mode_count: usize) -> Result<DiscretizedSystem<T>> {
    if !(box_length > T::zero()) || !box_length.is_finite() {
        return Err(Error::domain("L", "must be positive"));
    }
    if mode_count < 64 || mode_count % 2 != 0 {
        return Err(Error::domain("N", "must be even and at least 64"));
    }
    let dk = T::TAU() / box_length;
    let half = mode_count / 2;
    if T::from_usize(half).unwrap() * dk < params.k_c() {
        return Err(Error::domain("N", "too small to cover (-k_c, k_c)"));
    }
    let four_pi_over_l = T::lit(4.0) * T::PI() / box_length;
    // a mode sitting on the cutoff is kept despite rounding in j * dk
    let edge = params.k_c() * (T::one() + T::epsilon() * T::lit(8.0));
    let mut k = Vec::new();
    for j in -(half as i64)..=(half as i64) {
        let kj = T::from_int(j) * dk;
        if j != 0 && kj.abs() <= edge {
            k.push(kj);
        }
    }
    let coupling = k.iter().map(|kj| (four_pi_over_l * kj.abs()).sqrt()).collect();
    Ok(DiscretizedSystem {
        params: *params,
        box_length,
        mode_count,
        k,
        coupling,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectorState<T> {
    pub psi_d: Complex<T>,
    pub psi_k: Vec<Complex<T>>,
    pub t: T,
}

impl<T: Real> SectorState<T> {
    /// Atom excited, no photons.
    pub fn excited(system: &DiscretizedSystem<T>) -> Self {
        Self {
            psi_d: cplx(T::one(), T::zero()),
            psi_k: vec![cplx(T::zero(), T::zero()); system.len()],
            t: T::zero(),
        }
    }

    pub fn norm_sqr(&self) -> T {
        self.psi_k.iter().fold(self.psi_d.norm_sqr(), |acc, c| acc + c.norm_sqr())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions<T> {
    pub t_end: T,
    pub dt: T,
    /// Record every `stride`-th step (the final step is always recorded).
    pub stride: usize,
    pub drift_tolerance: T,
}

impl<T: Real> EvolveOptions<T> {
    pub fn new(t_end: T, dt: T) -> Self {
        Self {
            t_end,
            dt,
            stride: 1,
            drift_tolerance: T::lit(1e-8),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub samples: Vec<SectorState<T>>,
    pub norm_drift: T,
}

impl<T: Real> Trajectory<T> {
    pub fn last(&self) -> &SectorState<T> {
        self.samples.last().expect("trajectory holds the initial state")
    }

    /// Sample closest to time `t`.
    pub fn at(&self, t: T) -> &SectorState<T> {
        self.samples
            .iter()
            .min_by(|a, b| (a.t - t).abs().partial_cmp(&(b.t - t).abs()).unwrap())
            .expect("trajectory holds the initial state")
    }
}

struct Derivative<T> {
    d: Complex<T>,
    k: Vec<Complex<T>>,
}

fn rhs<T: Real>(system: &DiscretizedSystem<T>, t: T, psi_d: Complex<T>, psi_k: &[Complex<T>]) -> Derivative<T> {
    let p = &system.params;
    let lambda = p.lambda();
    let minus_i = cplx(T::zero(), -T::one());
    let level = p.epsilon_d() + p.amplitude() * (p.omega() * t).sin();
    let feed = system
        .coupling
        .iter()
        .zip(psi_k)
        .fold(cplx(T::zero(), T::zero()), |acc, (v, c)| acc + *c * *v);
    let d = minus_i * (psi_d * level + feed * lambda);
    let k = system
        .k
        .iter()
        .zip(&system.coupling)
        .zip(psi_k)
        .map(|((kj, v), c)| minus_i * (*c * kj.abs() + psi_d * (lambda * *v)))
        .collect();
    Derivative { d, k }
}

fn axpy<T: Real>(base: &[Complex<T>], h: T, slope: &[Complex<T>]) -> Vec<Complex<T>> {
    base.iter().zip(slope).map(|(b, s)| *b + *s * h).collect()
}

/// RK4 integration from `psi0` to `t_end`, with the drive evaluated exactly
/// inside the right-hand side.
pub fn evolve<T: Real>(
    system: &DiscretizedSystem<T>,
    psi0: &SectorState<T>,
    opts: &EvolveOptions<T>,
) -> Result<Trajectory<T>> {
    if !(opts.dt > T::zero()) {
        return Err(Error::domain("dt", "must be positive"));
    }
    if !(opts.t_end >= T::zero()) {
        return Err(Error::domain("t_end", "must be non-negative"));
    }
    if psi0.psi_k.len() != system.len() {
        return Err(Error::GridMismatch("initial state does not match the discretization".into()));
    }
    let norm0 = psi0.norm_sqr();
    if (norm0 - T::one()).abs() > T::lit(1e-12).max(T::epsilon() * T::lit(64.0)) {
        return Err(Error::domain("psi0", "must be normalized"));
    }
    let steps = (opts.t_end / opts.dt).round().to_usize().unwrap_or(0);
    let stride = opts.stride.max(1);
    let half = opts.dt / T::lit(2.0);
    let sixth = opts.dt / T::lit(6.0);
    let t0 = psi0.t;

    let mut d = psi0.psi_d;
    let mut k = psi0.psi_k.clone();
    let mut samples = vec![psi0.clone()];
    for step in 0..steps {
        let t = t0 + T::from_usize(step).unwrap() * opts.dt;
        let k1 = rhs(system, t, d, &k);
        let k2 = rhs(system, t + half, d + k1.d * half, &axpy(&k, half, &k1.k));
        let k3 = rhs(system, t + half, d + k2.d * half, &axpy(&k, half, &k2.k));
        let k4 = rhs(system, t + opts.dt, d + k3.d * opts.dt, &axpy(&k, opts.dt, &k3.k));
        d = d + (k1.d + (k2.d + k3.d) * T::lit(2.0) + k4.d) * sixth;
        for (i, c) in k.iter_mut().enumerate() {
            *c = *c + (k1.k[i] + (k2.k[i] + k3.k[i]) * T::lit(2.0) + k4.k[i]) * sixth;
        }
        let done = step + 1;
        if done % stride == 0 || done == steps {
            samples.push(SectorState {
                psi_d: d,
                psi_k: k.clone(),
                t: t0 + T::from_usize(done).unwrap() * opts.dt,
            });
        }
    }
    let last = samples.last().unwrap();
    let norm_drift = (last.norm_sqr() - norm0).abs();
    if norm_drift > opts.drift_tolerance {
        return Err(Error::NormDrift {
            drift: norm_drift.as_f64(),
            tolerance: opts.drift_tolerance.as_f64(),
        });
    }
    Ok(Trajectory { samples, norm_drift })
}

/// `(t, |psi_d|^2)` along the trajectory.
pub fn survival_probability<T: Real>(trajectory: &Trajectory<T>) -> Series<T> {
    Series {
        x: trajectory.samples.iter().map(|s| s.t).collect(),
        y: trajectory.samples.iter().map(|s| s.psi_d.norm_sqr()).collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhotonSpectrum<T> {
    pub k: Vec<T>,
    /// `|psi_k|^2 L / 2 pi`, comparable with a continuum spectral density.
    pub density: Vec<T>,
    pub total_weight: T,
    pub warning: Option<String>,
}

/// Photon distribution of a state, rescaled by the density of modes.
pub fn photon_spectrum<T: Real>(system: &DiscretizedSystem<T>, state: &SectorState<T>) -> PhotonSpectrum<T> {
    let scale = system.box_length / T::TAU();
    let density = state.psi_k.iter().map(|c| c.norm_sqr() * scale).collect();
    let total_weight = state.psi_k.iter().fold(T::zero(), |acc, c| acc + c.norm_sqr());
    let survival = state.psi_d.norm_sqr();
    let warning = (survival >= T::lit(1e-3)).then(|| {
        format!(
            "survival {:.3e} at t = {} has not decayed below 1e-3; spectrum is not final",
            survival.as_f64(),
            state.t.as_f64()
        )
    });
    PhotonSpectrum {
        k: system.k.clone(),
        density,
        total_weight,
        warning,
    }
}

/// `f(x) = L^{-1/2} sum_j exp(i k_j x) psi_j` on a grid inside the box.
pub fn spatial_field<T: Real>(
    system: &DiscretizedSystem<T>,
    state: &SectorState<T>,
    xgrid: &Grid1D<T>,
) -> Result<Vec<Complex<T>>> {
    let half = system.box_length / T::lit(2.0);
    if xgrid.points().iter().any(|x| x.abs() >= half) {
        return Err(Error::domain("x grid", "must lie inside (-L/2, L/2)"));
    }
    let norm = system.box_length.sqrt().recip();
    Ok(xgrid
        .points()
        .par_iter()
        .map(|&x| {
            let sum = system
                .k
                .iter()
                .zip(&state.psi_k)
                .fold(cplx(T::zero(), T::zero()), |acc, (k, c)| acc + *c * cplx(T::zero(), *k * x).exp());
            sum * norm
        })
        .collect())
}
