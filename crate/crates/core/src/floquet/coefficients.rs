//! Floquet coefficients of a resonance from the ratio continued fractions of
//! the three-term recurrence
//!
//! ```text
//! a R(n-1) + d_n(z) R(n) - a R(n+1) = z R(n),    a = A/2i
//! ```
//!
//! The left vector solves the transposed rows, which is the same recurrence
//! with `a -> -a`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::floquet::continued_fraction::Diagonal;
use crate::model::ModelParams;
use crate::scalar::{cplx, is_finite, parts, Real};

/// Relative size of the window-edge coefficients above which the window is
/// rejected.
pub const EDGE_DECAY: f64 = 1e-10;

/// Coefficients on `-window..=window`, stored from the lowest index up.
pub(crate) fn ratio_coefficients<T: Real, D: Diagonal<T>>(
    params: &ModelParams<T>,
    diag: &D,
    z: Complex<T>,
    window: usize,
    depth: usize,
    sign: T,
) -> Result<Vec<Complex<T>>> {
    let zero = cplx(T::zero(), T::zero());
    let one = cplx(T::one(), T::zero());
    let mut out = vec![zero; 2 * window + 1];
    out[window] = one;
    if params.amplitude() == T::zero() {
        return Ok(out);
    }
    // a = sign * A / 2i = -i sign A / 2
    let a = cplx(T::zero(), -sign * params.amplitude() / T::lit(2.0));
    let start = depth.max(2 * window) as i32;
    let singular = |w: Complex<T>| {
        let (re, im) = parts(w);
        Error::Singular {
            stage: "coefficient recurrence",
            re,
            im,
        }
    };

    // R(n) / R(n-1) for n >= 1
    let mut up = vec![zero; window + 1];
    let mut r = zero;
    for n in (1..=start).rev() {
        let (d, _) = diag.entry(n, z)?;
        let den = z - d + a * r;
        if den.norm() == T::zero() || !is_finite(den) {
            return Err(singular(z));
        }
        r = a / den;
        if (n as usize) <= window {
            up[n as usize] = r;
        }
    }
    // R(n) / R(n+1) for n <= -1
    let mut down = vec![zero; window + 1];
    let mut s = zero;
    for j in (1..=start).rev() {
        let (d, _) = diag.entry(-j, z)?;
        let den = z - d - a * s;
        if den.norm() == T::zero() || !is_finite(den) {
            return Err(singular(z));
        }
        s = -a / den;
        if (j as usize) <= window {
            down[j as usize] = s;
        }
    }
    for j in 1..=window {
        out[window + j] = out[window + j - 1] * up[j];
        out[window - j] = out[window - j + 1] * down[j];
    }
    Ok(out)
}

pub(crate) fn check_edges<T: Real>(coeffs: &[Complex<T>], window: usize) -> Result<()> {
    let centre = coeffs[window].norm();
    let edge = coeffs[0].norm().max(coeffs[2 * window].norm());
    let ratio = edge / centre;
    if !(ratio < T::lit(EDGE_DECAY)) {
        return Err(Error::WindowTooSmall {
            window,
            edge_ratio: ratio.as_f64(),
        });
    }
    Ok(())
}
