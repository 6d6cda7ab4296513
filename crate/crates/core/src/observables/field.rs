use num_complex::Complex;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::floquet::ResonanceState;
use crate::model::Grid1D;
use crate::scalar::{cplx, Real};

use super::MODE_WINDOW_TOLERANCE;

/// Which pole supplies the spatial exponent of each time exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolePairing {
    /// `exp(-i zeta_n (t - |x|))`: time and space carry the same pole.
    Retarded,
    /// `exp(-i zeta_n t) exp(i zeta'_n |x|)` with the mirrored mode
    /// `zeta'_n = z + n omega` in space.
    AsPrinted,
}

/// Pole part of the field `<x|Psi(t)>` and the split of its intensity into
/// single-mode terms and cross-mode beats.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialFieldDataset<T> {
    pub x: Vec<T>,
    pub t: T,
    pub field: Vec<Complex<T>>,
    pub intensity: Vec<T>,
    /// `(m, |f_m|^2)` per contributing mode.
    pub diagonal: Vec<(i32, Vec<T>)>,
    /// `sum_{m != m'} f_m conj(f_m')`, real by symmetry.
    pub interference: Vec<T>,
    pub pairing: PolePairing,
    pub mode_window: usize,
}

struct Pole<T> {
    mode: i32,
    prefactor: Complex<T>,
    time: Complex<T>,
    space: Complex<T>,
}

fn poles<T: Real>(state: &ResonanceState<T>, mode_window: usize, pairing: PolePairing) -> Vec<Pole<T>> {
    let lambda = state.params.lambda();
    let k_c = state.params.k_c();
    let omega = state.params.omega();
    let w = mode_window as i32;
    // -i lambda sqrt(2 pi) from <x|k> = exp(ikx)/sqrt(2 pi) and v_k = sqrt(2|k|)
    let scale = cplx(T::zero(), -lambda * T::TAU().sqrt());
    (-w..=w)
        .filter_map(|m| {
            let n = state.mode - m;
            let zeta = state.block_frequency(n);
            if !(zeta.re > T::zero() && zeta.re < k_c) {
                return None;
            }
            let space = match pairing {
                PolePairing::Retarded => zeta,
                PolePairing::AsPrinted => zeta + cplx(T::from_int(2 * n as i64) * omega, T::zero()),
            };
            let v = (zeta * T::lit(2.0)).sqrt();
            Some(Pole {
                mode: m,
                prefactor: scale * state.pole_amplitude(n) * v,
                time: zeta,
                space,
            })
        })
        .collect()
}

fn terms_at<T: Real>(poles: &[Pole<T>], x: T, t: T) -> Vec<Complex<T>> {
    let r = x.abs();
    if r >= t {
        // beyond the light front the pole part is cancelled by the continuum
        return vec![cplx(T::zero(), T::zero()); poles.len()];
    }
    poles
        .iter()
        .map(|p| {
            let phase = cplx(T::zero(), -T::one()) * (p.time * t - p.space * r);
            p.prefactor * phase.exp()
        })
        .collect()
}

fn field_only<T: Real>(state: &ResonanceState<T>, x: &[T], t: T, mode_window: usize, pairing: PolePairing) -> Vec<Complex<T>> {
    let poles = poles(state, mode_window, pairing);
    x.par_iter()
        .map(|&x| {
            terms_at(&poles, x, t)
                .into_iter()
                .fold(cplx(T::zero(), T::zero()), |acc, v| acc + v)
        })
        .collect()
}

/// Residue (pole) part of the spatial field at time `t`, zero for `|x| >= t`.
pub fn resonance_spatial_field<T: Real>(
    state: &ResonanceState<T>,
    xgrid: &Grid1D<T>,
    t: T,
    mode_window: usize,
    pairing: PolePairing,
) -> Result<SpatialFieldDataset<T>> {
    if !(t > T::zero()) || !t.is_finite() {
        return Err(Error::domain("t", "must be positive"));
    }
    let x = xgrid.points().to_vec();
    let field = field_only(state, &x, t, mode_window, pairing);
    let wide = field_only(state, &x, t, 2 * mode_window, pairing);
    let peak = wide.iter().fold(T::zero(), |acc, v| acc.max(v.norm_sqr()));
    if peak > T::zero() {
        let change = field
            .iter()
            .zip(&wide)
            .fold(T::zero(), |acc, (a, b)| acc.max((a.norm_sqr() - b.norm_sqr()).abs()))
            / peak;
        if change > T::lit(MODE_WINDOW_TOLERANCE).max(T::epsilon() * T::lit(64.0)) {
            return Err(Error::ModeWindow {
                window: mode_window,
                change: change.as_f64(),
            });
        }
    }

    let poles = poles(state, mode_window, pairing);
    let rows: Vec<(Vec<T>, T)> = x
        .par_iter()
        .map(|&xv| {
            let terms = terms_at(&poles, xv, t);
            let diagonal = terms.iter().map(|c| c.norm_sqr()).collect();
            let mut cross = T::zero();
            for i in 0..terms.len() {
                for j in i + 1..terms.len() {
                    cross = cross + T::lit(2.0) * (terms[i] * terms[j].conj()).re;
                }
            }
            (diagonal, cross)
        })
        .collect();
    let diagonal = poles
        .iter()
        .enumerate()
        .map(|(i, p)| (p.mode, rows.iter().map(|(d, _)| d[i]).collect()))
        .collect();
    let interference = rows.iter().map(|(_, c)| *c).collect();
    let intensity = field.iter().map(|v| v.norm_sqr()).collect();
    Ok(SpatialFieldDataset {
        x,
        t,
        field,
        intensity,
        diagonal,
        interference,
        pairing,
        mode_window,
    })
}

/// Same computation as [`resonance_spatial_field`]; the dataset carries the
/// diagonal and interference parts.
pub fn interference_decomposition<T: Real>(
    state: &ResonanceState<T>,
    xgrid: &Grid1D<T>,
    t: T,
    mode_window: usize,
    pairing: PolePairing,
) -> Result<SpatialFieldDataset<T>> {
    resonance_spatial_field(state, xgrid, t, mode_window, pairing)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeatPeak<T> {
    /// Angular frequency of the strongest non-constant Fourier bin.
    pub frequency: T,
    /// Bin width `2 pi / (n ds)`.
    pub resolution: T,
}

/// Dominant angular frequency of uniformly spaced samples, after removing
/// the mean and applying a Hann window.
pub fn dominant_beat_frequency<T: Real>(samples: &[T], spacing: T) -> Result<BeatPeak<T>> {
    let n = samples.len();
    if n < 8 {
        return Err(Error::domain("samples", "need at least 8 points"));
    }
    if !(spacing > T::zero()) {
        return Err(Error::domain("spacing", "must be positive"));
    }
    let count = T::from_usize(n).unwrap();
    let mean = samples.iter().fold(T::zero(), |acc, &v| acc + v) / count;
    let mut buffer: Vec<Complex<T>> = samples
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let hann = T::lit(0.5) * (T::one() - (T::TAU() * T::from_usize(i).unwrap() / (count - T::one())).cos());
            cplx((v - mean) * hann, T::zero())
        })
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buffer);
    let best = (1..n / 2)
        .max_by(|&a, &b| buffer[a].norm().partial_cmp(&buffer[b].norm()).unwrap())
        .unwrap();
    let resolution = T::TAU() / (count * spacing);
    Ok(BeatPeak {
        frequency: T::from_usize(best).unwrap() * resolution,
        resolution,
    })
}

/// Least-squares slope of `ln(values)` against `x`.
pub fn envelope_log_slope<T: Real>(x: &[T], values: &[T]) -> Result<T> {
    if x.len() != values.len() || x.len() < 2 {
        return Err(Error::GridMismatch("slope fit needs matching grids of two or more points".into()));
    }
    if values.iter().any(|v| !(*v > T::zero())) {
        return Err(Error::domain("values", "must be positive for a log fit"));
    }
    let n = T::from_usize(x.len()).unwrap();
    let mx = x.iter().fold(T::zero(), |a, &v| a + v) / n;
    let my = values.iter().fold(T::zero(), |a, &v| a + v.ln()) / n;
    let (mut sxy, mut sxx) = (T::zero(), T::zero());
    for (&xi, &yi) in x.iter().zip(values) {
        sxy = sxy + (xi - mx) * (yi.ln() - my);
        sxx = sxx + (xi - mx) * (xi - mx);
    }
    Ok(sxy / sxx)
}
