//! Channel self-energies of the dressed level.
//!
//! With `v_k^2 = 2|k|` and a sharp cutoff at `k_c`, folding `+k` and `-k`
//! gives the spectral density `rho(e) = 4e` on `(0, k_c)`, and
//!
//! ```text
//! Sigma_I(zeta)  = 4 [ -k_c + zeta (Log(zeta) - Log(zeta - k_c)) ]
//! Sigma_II(zeta) = Sigma_I(zeta) - 8 pi i zeta
//! ```
//!
//! with `zeta = z - n omega` for channel `n`. The difference of principal
//! logarithms puts the only cut of `Sigma_I` on `[0, k_c]`; `Sigma_II` is its
//! continuation through that cut from above.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::scalar::{imag_unit, parts, real, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sheet {
    First,
    Second,
}

/// `rho(e) = 4e` inside `(0, k_c)`, zero elsewhere (including the endpoints).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralDensity<T> {
    pub k_c: T,
}

impl<T: Real> SpectralDensity<T> {
    pub fn eval(&self, epsilon: T) -> T {
        if epsilon > T::zero() && epsilon < self.k_c {
            T::lit(4.0) * epsilon
        } else {
            T::zero()
        }
    }

    /// Integral of the density over the band, `2 k_c^2`.
    pub fn total_weight(&self) -> T {
        T::lit(2.0) * self.k_c * self.k_c
    }
}

pub fn spectral_density<T: Real>(params: &ModelParams<T>, epsilon: T) -> T {
    SpectralDensity { k_c: params.k_c() }.eval(epsilon)
}

/// Closed-form self-energy for all channels of one model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfEnergy<T> {
    k_c: T,
    omega: T,
}

impl<T: Real> SelfEnergy<T> {
    pub fn new(params: &ModelParams<T>) -> Self {
        Self {
            k_c: params.k_c(),
            omega: params.omega(),
        }
    }

    pub fn k_c(&self) -> T {
        self.k_c
    }

    /// Channel argument `z - n omega`.
    pub fn shifted(&self, n: i32, z: Complex<T>) -> Complex<T> {
        z - real(T::from_int(n as i64) * self.omega)
    }

    pub fn in_continuation_window(&self, zeta: Complex<T>) -> bool {
        zeta.re > T::zero() && zeta.re < self.k_c
    }

    fn check_branch(&self, zeta: Complex<T>) -> Result<Complex<T>> {
        let tol = T::epsilon() * self.k_c;
        if zeta.norm() <= tol || (zeta - real(self.k_c)).norm() <= tol {
            let (re, im) = parts(zeta);
            return Err(Error::BranchPoint { re, im });
        }
        // points on the cut itself are read from above
        let im = if zeta.im == T::zero() { T::zero() } else { zeta.im };
        Ok(Complex::new(zeta.re, im))
    }

    fn check_sheet(&self, n: i32, zeta: Complex<T>, sheet: Sheet) -> Result<()> {
        if sheet == Sheet::Second && !self.in_continuation_window(zeta) {
            let (re, im) = parts(zeta);
            return Err(Error::OutsideContinuation { channel: n, re, im });
        }
        Ok(())
    }

    fn log_ratio(&self, zeta: Complex<T>) -> Complex<T> {
        zeta.ln() - (zeta - real(self.k_c)).ln()
    }

    /// `Sigma^(n)(z)` on the requested sheet.
    pub fn sigma(&self, n: i32, z: Complex<T>, sheet: Sheet) -> Result<Complex<T>> {
        let zeta = self.check_branch(self.shifted(n, z))?;
        self.check_sheet(n, zeta, sheet)?;
        let four = T::lit(4.0);
        let first = (zeta * self.log_ratio(zeta) - real(self.k_c)) * four;
        Ok(match sheet {
            Sheet::First => first,
            Sheet::Second => first - imag_unit::<T>() * zeta * (T::lit(8.0) * T::PI()),
        })
    }

    /// Analytic `z`-derivative of [`sigma`](Self::sigma).
    pub fn sigma_prime(&self, n: i32, z: Complex<T>, sheet: Sheet) -> Result<Complex<T>> {
        let zeta = self.check_branch(self.shifted(n, z))?;
        self.check_sheet(n, zeta, sheet)?;
        let four = T::lit(4.0);
        let first = (self.log_ratio(zeta) - real(self.k_c) / (zeta - real(self.k_c))) * four;
        Ok(match sheet {
            Sheet::First => first,
            Sheet::Second => first - imag_unit::<T>() * (T::lit(8.0) * T::PI()),
        })
    }

    /// Boundary value `Sigma^(n)(E + i0)` for real `E`, split as principal
    /// value plus `-i pi rho`.
    pub fn boundary_value(&self, n: i32, energy: T) -> Result<Complex<T>> {
        let zeta = energy - T::from_int(n as i64) * self.omega;
        let tol = T::epsilon() * self.k_c;
        if zeta.abs() <= tol || (zeta - self.k_c).abs() <= tol {
            return Err(Error::BranchPoint {
                re: zeta.as_f64(),
                im: 0.0,
            });
        }
        let four = T::lit(4.0);
        let principal = four * (zeta * (zeta / (zeta - self.k_c)).abs().ln() - self.k_c);
        let rho = SpectralDensity { k_c: self.k_c }.eval(zeta);
        Ok(Complex::new(principal, -T::PI() * rho))
    }

    /// Second sheet iff `Im z < 0` and the channel argument lies over the cut.
    pub fn select_sheet(&self, n: i32, z: Complex<T>) -> Sheet {
        if z.im < T::zero() && self.in_continuation_window(self.shifted(n, z)) {
            Sheet::Second
        } else {
            Sheet::First
        }
    }

    /// Self-energy continued from the upper half plane to `z` along the
    /// shortest path: second sheet where the path crosses the cut.
    pub fn continued(&self, n: i32, z: Complex<T>) -> Result<Complex<T>> {
        self.sigma(n, z, self.select_sheet(n, z))
    }

    pub fn continued_prime(&self, n: i32, z: Complex<T>) -> Result<Complex<T>> {
        self.sigma_prime(n, z, self.select_sheet(n, z))
    }
}

pub fn sigma<T: Real>(params: &ModelParams<T>, n: i32, z: Complex<T>, sheet: Sheet) -> Result<Complex<T>> {
    SelfEnergy::new(params).sigma(n, z, sheet)
}

pub fn sigma_prime<T: Real>(params: &ModelParams<T>, n: i32, z: Complex<T>, sheet: Sheet) -> Result<Complex<T>> {
    SelfEnergy::new(params).sigma_prime(n, z, sheet)
}

pub fn select_sheet<T: Real>(params: &ModelParams<T>, n: i32, z: Complex<T>) -> Sheet {
    SelfEnergy::new(params).select_sheet(n, z)
}

/// Per-channel sheet choice used while evaluating the Floquet dispersion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SheetSelector<T> {
    /// Channel classification frozen at a reference point.
    FrozenAt(Complex<T>),
    /// Every channel on the physical sheet. Only useful as a negative control.
    FirstOnly,
}

impl<T: Real> SheetSelector<T> {
    pub fn sheet(&self, se: &SelfEnergy<T>, n: i32) -> Sheet {
        match self {
            SheetSelector::FrozenAt(z) => se.select_sheet(n, *z),
            SheetSelector::FirstOnly => Sheet::First,
        }
    }

    /// True if both selectors classify every channel of `channels` alike.
    pub fn agrees_with(&self, other: &Self, se: &SelfEnergy<T>, channels: impl Iterator<Item = i32>) -> bool {
        channels.into_iter().all(|n| self.sheet(se, n) == other.sheet(se, n))
    }
}
