use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::floquet::ResonanceState;
use crate::model::Grid1D;
use crate::scalar::{cplx, Real};

use super::MODE_WINDOW_TOLERANCE;

/// Emitted photon spectrum of one resonance, `t -> infinity` limit.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumDataset<T> {
    pub k: Vec<T>,
    /// Coherent sum over modes.
    pub total: Vec<T>,
    /// Incoherent sum of the single-mode Lorentzians.
    pub lorentzian: Vec<T>,
    /// `(m, S_m(k))` for each mode in the window.
    pub components: Vec<(i32, Vec<T>)>,
    pub mode_window: usize,
    /// Largest change of `total` under window doubling, relative to its peak.
    pub window_change: T,
}

struct Terms<T> {
    modes: Vec<(i32, Complex<T>, Complex<T>)>,
    lambda_sq: T,
}

impl<T: Real> Terms<T> {
    fn new(state: &ResonanceState<T>, mode_window: usize) -> Self {
        let w = mode_window as i32;
        let modes = (-w..=w)
            .map(|m| {
                let n = state.mode - m;
                (m, state.pole_amplitude(n), state.block_frequency(n))
            })
            .collect();
        let l = state.params.lambda();
        Self { modes, lambda_sq: l * l }
    }

    /// Density of states times coupling, `lambda^2 v_k^2 = 2 lambda^2 |k|`.
    fn weight(&self, k: T) -> T {
        T::lit(2.0) * self.lambda_sq * k.abs()
    }

    fn coherent(&self, k: T) -> T {
        let e = cplx(k.abs(), T::zero());
        let amp = self
            .modes
            .iter()
            .fold(cplx(T::zero(), T::zero()), |acc, (_, a, zeta)| acc + *a / (*zeta - e));
        self.weight(k) * amp.norm_sqr()
    }

    fn single(&self, index: usize, k: T) -> T {
        let (_, a, zeta) = self.modes[index];
        self.weight(k) * a.norm_sqr() / (zeta - cplx(k.abs(), T::zero())).norm_sqr()
    }
}

/// Spectrum `S(k) = 2 lambda^2 |k| |sum_m a_m / (z + m omega - |k|)|^2` and its
/// per-mode Lorentzian pieces.
pub fn hhg_spectrum<T: Real>(state: &ResonanceState<T>, kgrid: &Grid1D<T>, mode_window: usize) -> Result<SpectrumDataset<T>> {
    let k_c = state.params.k_c();
    if kgrid.points().iter().any(|k| k.abs() >= k_c) {
        return Err(Error::domain("k grid", "must lie inside (-k_c, k_c)"));
    }
    let k = kgrid.points().to_vec();
    let terms = Terms::new(state, mode_window);
    let wide = Terms::new(state, 2 * mode_window);
    let total: Vec<T> = k.par_iter().map(|&k| terms.coherent(k)).collect();
    let doubled: Vec<T> = k.par_iter().map(|&k| wide.coherent(k)).collect();
    let components: Vec<(i32, Vec<T>)> = terms
        .modes
        .iter()
        .enumerate()
        .map(|(i, (m, _, _))| (*m, k.par_iter().map(|&k| terms.single(i, k)).collect()))
        .collect();
    let lorentzian = (0..k.len())
        .map(|i| components.iter().fold(T::zero(), |acc, (_, c)| acc + c[i]))
        .collect();

    let peak = doubled.iter().fold(T::zero(), |acc, &v| acc.max(v));
    let window_change = if peak > T::zero() {
        total
            .iter()
            .zip(&doubled)
            .fold(T::zero(), |acc, (a, b)| acc.max((*a - *b).abs()))
            / peak
    } else {
        T::zero()
    };
    if window_change > T::lit(MODE_WINDOW_TOLERANCE).max(T::epsilon() * T::lit(64.0)) {
        return Err(Error::ModeWindow {
            window: mode_window,
            change: window_change.as_f64(),
        });
    }
    Ok(SpectrumDataset {
        k,
        total,
        lorentzian,
        components,
        mode_window,
        window_change,
    })
}
