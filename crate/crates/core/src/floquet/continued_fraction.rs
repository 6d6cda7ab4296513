//! Continued-fraction folding of the tridiagonal effective Floquet block.
//!
//! Row `n` of the effective Hamiltonian reads
//!
//! ```text
//! (A/2i) R(n-1) + d_n(w) R(n) - (A/2i) R(n+1) = w R(n)
//! d_n(w) = epsilon_d + n omega + lambda^2 Sigma^(n)(w)
//! ```
//!
//! The off-diagonal product is `+A^2/4`, so eliminating every block above
//! (below) a centre `c` gives
//!
//! ```text
//! C_up(w) = (A^2/4) / (w - d_{c+1} - (A^2/4) / (w - d_{c+2} - ...))
//! ```
//!
//! truncated with a zero tail.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::scalar::{is_finite, parts, real, Real};
use crate::self_energy::{SelfEnergy, SheetSelector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    fn sign(self) -> i32 {
        match self {
            Direction::Up => 1,
            Direction::Down => -1,
        }
    }
}

/// Largest depth tried by the adaptive fold before giving up.
pub const MAX_FOLD_DEPTH: usize = 1 << 14;

/// Diagonal entries `d_n(w)` of the effective block and their `w`-derivative.
pub trait Diagonal<T: Real> {
    fn entry(&self, n: i32, w: Complex<T>) -> Result<(Complex<T>, Complex<T>)>;
}

/// Self-energies evaluated at the running argument, as in the nonlinear
/// eigenvalue problem.
#[derive(Debug, Clone, Copy)]
pub struct SelfConsistent<T> {
    pub params: ModelParams<T>,
    pub sheets: SheetSelector<T>,
}

impl<T: Real> Diagonal<T> for SelfConsistent<T> {
    fn entry(&self, n: i32, w: Complex<T>) -> Result<(Complex<T>, Complex<T>)> {
        let p = &self.params;
        let bare = real(p.epsilon_d() + T::from_int(n as i64) * p.omega());
        let l2 = p.lambda() * p.lambda();
        if l2 == T::zero() {
            return Ok((bare, Complex::new(T::zero(), T::zero())));
        }
        let se = SelfEnergy::new(p);
        let sheet = self.sheets.sheet(&se, n);
        let s = se.sigma(n, w, sheet)?;
        let ds = se.sigma_prime(n, w, sheet)?;
        Ok((bare + s * l2, ds * l2))
    }
}

/// Self-energies frozen at a fixed argument; the block is then an ordinary
/// (linear) non-Hermitian tridiagonal matrix.
#[derive(Debug, Clone, Copy)]
pub struct Frozen<T> {
    pub params: ModelParams<T>,
    pub sheets: SheetSelector<T>,
    pub at: Complex<T>,
}

impl<T: Real> Diagonal<T> for Frozen<T> {
    fn entry(&self, n: i32, _w: Complex<T>) -> Result<(Complex<T>, Complex<T>)> {
        let (value, _) = SelfConsistent {
            params: self.params,
            sheets: self.sheets,
        }
        .entry(n, self.at)?;
        Ok((value, Complex::new(T::zero(), T::zero())))
    }
}

/// Fold of one side of the block with its derivative in `w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fold<T> {
    pub value: Complex<T>,
    pub derivative: Complex<T>,
    pub depth: usize,
}

fn fold_at_depth<T: Real, D: Diagonal<T>>(
    params: &ModelParams<T>,
    diag: &D,
    w: Complex<T>,
    centre: i32,
    direction: Direction,
    depth: usize,
) -> Result<Fold<T>> {
    let a = params.amplitude();
    let coupling = real(a * a / T::lit(4.0));
    let zero = Complex::new(T::zero(), T::zero());
    if a == T::zero() {
        return Ok(Fold {
            value: zero,
            derivative: zero,
            depth,
        });
    }
    let mut g = zero;
    let mut dg = zero;
    for j in (1..=depth as i32).rev() {
        let n = centre + direction.sign() * j;
        let (d, dd) = diag.entry(n, w)?;
        let den = w - d - g;
        if den.norm() == T::zero() || !is_finite(den) {
            let (re, im) = parts(w);
            return Err(Error::Singular {
                stage: "continued fraction",
                re,
                im,
            });
        }
        let next = coupling / den;
        dg = -(next * next) / coupling * (real(T::one()) - dd - dg);
        g = next;
    }
    Ok(Fold {
        value: g,
        derivative: dg,
        depth,
    })
}

fn fold_change<T: Real>(a: &Fold<T>, b: &Fold<T>) -> T {
    (a.value - b.value).norm() / T::one().max(b.value.norm())
}

/// Fold grown by doubling from `min_depth` until the change is below `tol`.
pub fn adaptive_fold<T: Real, D: Diagonal<T>>(
    params: &ModelParams<T>,
    diag: &D,
    w: Complex<T>,
    centre: i32,
    direction: Direction,
    min_depth: usize,
    tol: T,
) -> Result<Fold<T>> {
    let mut depth = min_depth.max(1);
    let mut prev = fold_at_depth(params, diag, w, centre, direction, depth)?;
    loop {
        let next_depth = depth * 2;
        let next = fold_at_depth(params, diag, w, centre, direction, next_depth)?;
        let change = fold_change(&prev, &next);
        if change <= tol {
            return Ok(next);
        }
        if next_depth >= MAX_FOLD_DEPTH {
            return Err(Error::FoldNotConverged {
                depth: next_depth,
                change: change.as_f64(),
            });
        }
        depth = next_depth;
        prev = next;
    }
}

/// Influence `C_up` or `C_down` of the Floquet blocks on one side of block 0,
/// at a fixed `depth`, with self-energies evaluated at `z` on the sheets
/// chosen at `z`.
///
/// Fails if doubling the depth moves the result by more than `1e-13`.
pub fn continued_fraction<T: Real>(
    params: &ModelParams<T>,
    z: Complex<T>,
    direction: Direction,
    depth: usize,
) -> Result<Complex<T>> {
    let diag = SelfConsistent {
        params: *params,
        sheets: SheetSelector::FrozenAt(z),
    };
    let a = fold_at_depth(params, &diag, z, 0, direction, depth)?;
    let b = fold_at_depth(params, &diag, z, 0, direction, depth * 2)?;
    let change = fold_change(&a, &b);
    if change > default_fold_tolerance::<T>() {
        return Err(Error::FoldNotConverged {
            depth,
            change: change.as_f64(),
        });
    }
    Ok(a.value)
}

pub(crate) fn default_fold_tolerance<T: Real>() -> T {
    T::lit(1e-13).max(T::epsilon() * T::lit(16.0))
}

/// Dispersion value and derivative at one argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionValue<T> {
    pub value: Complex<T>,
    pub derivative: Complex<T>,
    pub depth: usize,
}

/// `D(w) = w - d_c(w) - C_up(w) - C_down(w)` around block `centre`.
pub fn dispersion_with<T: Real, D: Diagonal<T>>(
    params: &ModelParams<T>,
    diag: &D,
    w: Complex<T>,
    centre: i32,
    min_depth: usize,
    tol: T,
) -> Result<DispersionValue<T>> {
    let (d0, dd0) = diag.entry(centre, w)?;
    let up = adaptive_fold(params, diag, w, centre, Direction::Up, min_depth, tol)?;
    let down = adaptive_fold(params, diag, w, centre, Direction::Down, min_depth, tol)?;
    let one = real(T::one());
    Ok(DispersionValue {
        value: w - d0 - up.value - down.value,
        derivative: one - dd0 - up.derivative - down.derivative,
        depth: up.depth.max(down.depth),
    })
}
