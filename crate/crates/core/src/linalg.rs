//! Small dense complex linear algebra used by the truncated-matrix checks.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

pub type Matrix<T> = Vec<Vec<Complex<T>>>;

fn zero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

/// Eigenvalues of an upper Hessenberg matrix by single-shift QR with
/// Wilkinson shifts and Givens rotations.
pub fn hessenberg_eigenvalues<T: Real>(matrix: &Matrix<T>) -> Result<Vec<Complex<T>>> {
    let n = matrix.len();
    let mut h = matrix.clone();
    let mut eig = vec![zero::<T>(); n];
    if n == 0 {
        return Ok(eig);
    }
    let max_iter = 60 * n;
    let mut iter = 0;
    let mut since_deflation = 0;
    let mut hi = n - 1;
    loop {
        if hi == 0 {
            eig[0] = h[0][0];
            break;
        }
        // locate the start of the unreduced block ending at `hi`
        let mut lo = hi;
        while lo > 0 {
            let scale = h[lo][lo].norm() + h[lo - 1][lo - 1].norm();
            let scale = if scale == T::zero() { T::one() } else { scale };
            if h[lo][lo - 1].norm() <= T::epsilon() * scale {
                h[lo][lo - 1] = zero();
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = h[hi][hi];
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        iter += 1;
        since_deflation += 1;
        if iter > max_iter {
            return Err(Error::NoConvergence {
                stage: "hessenberg qr",
                iterations: iter,
                residual: h[hi][hi - 1].norm().as_f64(),
            });
        }

        let a = h[hi - 1][hi - 1];
        let b = h[hi - 1][hi];
        let c = h[hi][hi - 1];
        let d = h[hi][hi];
        let mut shift = {
            let half = Complex::new(T::lit(0.5), T::zero());
            let mean = (a + d) * half;
            let disc = (((a - d) * half) * ((a - d) * half) + b * c).sqrt();
            let (r1, r2) = (mean + disc, mean - disc);
            if (r1 - d).norm() < (r2 - d).norm() {
                r1
            } else {
                r2
            }
        };
        if since_deflation % 11 == 10 {
            // exceptional shift to break cycles
            shift = d + Complex::new(h[hi][hi - 1].norm() * T::lit(0.75), T::zero());
        }

        for i in lo..=hi {
            h[i][i] = h[i][i] - shift;
        }
        let mut rotations = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let x = h[k][k];
            let y = h[k + 1][k];
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (cs, sn) = if r == T::zero() {
                (Complex::new(T::one(), T::zero()), zero())
            } else {
                (x / r, y / r)
            };
            for j in k..=hi {
                let top = h[k][j];
                let bottom = h[k + 1][j];
                h[k][j] = cs.conj() * top + sn.conj() * bottom;
                h[k + 1][j] = -sn * top + cs * bottom;
            }
            rotations.push((cs, sn));
        }
        for (offset, (cs, sn)) in rotations.into_iter().enumerate() {
            let k = lo + offset;
            let last = (k + 2).min(hi);
            for i in lo..=last {
                let left = h[i][k];
                let right = h[i][k + 1];
                h[i][k] = cs * left + sn * right;
                h[i][k + 1] = -sn.conj() * left + cs.conj() * right;
            }
        }
        for i in lo..=hi {
            h[i][i] = h[i][i] + shift;
        }
    }
    Ok(eig)
}

/// Solves `matrix * x = rhs` by Gaussian elimination with partial pivoting.
/// Returns `None` for an exactly singular matrix.
pub fn solve<T: Real>(matrix: &Matrix<T>, rhs: &[Complex<T>]) -> Option<Vec<Complex<T>>> {
    let n = matrix.len();
    let mut a = matrix.clone();
    let mut b = rhs.to_vec();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].norm().partial_cmp(&a[j][col].norm()).unwrap())?;
        if a[pivot][col].norm() == T::zero() {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor.norm() == T::zero() {
                continue;
            }
            for k in col..n {
                let v = a[col][k];
                a[row][k] = a[row][k] - factor * v;
            }
            let v = b[col];
            b[row] = b[row] - factor * v;
        }
    }
    let mut x = vec![zero::<T>(); n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc = acc - a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

/// Right eigenvector for an eigenvalue estimate by inverse iteration.
pub fn inverse_iteration<T: Real>(matrix: &Matrix<T>, eigenvalue: Complex<T>) -> Option<Vec<Complex<T>>> {
    let n = matrix.len();
    let scale = eigenvalue.norm().max(T::one());
    let shift = eigenvalue + Complex::new(scale * T::epsilon().sqrt() * T::lit(1e-3), T::zero());
    let mut shifted = matrix.clone();
    for (i, row) in shifted.iter_mut().enumerate() {
        row[i] = row[i] - shift;
    }
    let mut v = vec![Complex::new(T::one(), T::zero()); n];
    for _ in 0..4 {
        let next = solve(&shifted, &v)?;
        let norm = next.iter().fold(T::zero(), |acc, c| acc + c.norm_sqr()).sqrt();
        v = next.into_iter().map(|c| c / norm).collect();
    }
    Some(v)
}

/// `1 - |<u, v>| / (|u| |v|)` with the Hermitian inner product.
pub fn cosine_distance<T: Real>(u: &[Complex<T>], v: &[Complex<T>]) -> T {
    let dot = u.iter().zip(v).fold(zero::<T>(), |acc, (a, b)| acc + a.conj() * b);
    let nu = u.iter().fold(T::zero(), |acc, c| acc + c.norm_sqr()).sqrt();
    let nv = v.iter().fold(T::zero(), |acc, c| acc + c.norm_sqr()).sqrt();
    T::one() - dot.norm() / (nu * nv)
}
