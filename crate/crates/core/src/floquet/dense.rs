//! Dense truncated Floquet block at a frozen self-energy argument. Used to
//! validate the continued fractions; cost grows as the cube of the size.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::floquet::coefficients::ratio_coefficients;
use crate::floquet::continued_fraction::{default_fold_tolerance, dispersion_with, Diagonal, Frozen};
use crate::linalg::{cosine_distance, hessenberg_eigenvalues, inverse_iteration, Matrix};
use crate::model::ModelParams;
use crate::scalar::{cplx, Real};
use crate::self_energy::SheetSelector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gauge {
    /// Off-diagonals `+A/2i` below and `-A/2i` above the diagonal.
    Sine,
    /// Real symmetric off-diagonals `A/2`, related by `d_n -> i^n d_n`.
    Symmetric,
}

/// The `(2 n_tr + 1)` square block on `-n_tr..=n_tr`.
pub fn dense_matrix<T: Real>(params: &ModelParams<T>, z_fixed: Complex<T>, n_tr: usize, gauge: Gauge) -> Result<Matrix<T>> {
    let size = 2 * n_tr + 1;
    let diag = Frozen {
        params: *params,
        sheets: SheetSelector::FrozenAt(z_fixed),
        at: z_fixed,
    };
    let half = params.amplitude() / T::lit(2.0);
    let (below, above) = match gauge {
        Gauge::Sine => (cplx(T::zero(), -half), cplx(T::zero(), half)),
        Gauge::Symmetric => (cplx(half, T::zero()), cplx(half, T::zero())),
    };
    let mut m = vec![vec![cplx(T::zero(), T::zero()); size]; size];
    for (i, row) in m.iter_mut().enumerate() {
        let n = i as i32 - n_tr as i32;
        row[i] = diag.entry(n, z_fixed)?.0;
        if i > 0 {
            row[i - 1] = below;
        }
        if i + 1 < size {
            row[i + 1] = above;
        }
    }
    Ok(m)
}

/// All eigenvalues of the dense truncated block.
pub fn dense_spectrum<T: Real>(params: &ModelParams<T>, z_fixed: Complex<T>, n_tr: usize, gauge: Gauge) -> Result<Vec<Complex<T>>> {
    if n_tr < 4 {
        return Err(Error::domain("n_tr", "must be at least 4"));
    }
    hessenberg_eigenvalues(&dense_matrix(params, z_fixed, n_tr, gauge)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseReport<T> {
    pub n_tr: usize,
    /// Dense eigenvalue nearest `epsilon_d`.
    pub dense_eigenvalue: Complex<T>,
    /// Root of the continued-fraction dispersion with the same frozen
    /// self-energies.
    pub fraction_eigenvalue: Complex<T>,
    pub eigenvalue_gap: T,
    /// `1 - |cos|` between the dense eigenvector and the recurrence vector.
    pub cosine_distance: T,
}

pub fn dense_truncated_check<T: Real>(params: &ModelParams<T>, z_fixed: Complex<T>, n_tr: usize) -> Result<DenseReport<T>> {
    let matrix = dense_matrix(params, z_fixed, n_tr, Gauge::Sine)?;
    let eig = dense_spectrum(params, z_fixed, n_tr, Gauge::Sine)?;
    let target = cplx(params.epsilon_d(), T::zero());
    let dense_eigenvalue = *eig
        .iter()
        .min_by(|a, b| (**a - target).norm().partial_cmp(&(**b - target).norm()).unwrap())
        .expect("n_tr >= 4");

    let diag = Frozen {
        params: *params,
        sheets: SheetSelector::FrozenAt(z_fixed),
        at: z_fixed,
    };
    let tol = default_fold_tolerance::<T>();
    let mut w = diag.entry(0, z_fixed)?.0;
    let mut depth = 64;
    for _ in 0..100 {
        let v = dispersion_with(params, &diag, w, 0, 64, tol)?;
        depth = v.depth;
        let step = v.value / v.derivative;
        w = w - step;
        if step.norm() <= T::epsilon() * T::lit(4.0) * T::one().max(w.norm()) {
            break;
        }
    }

    let recurrence = ratio_coefficients(params, &diag, w, n_tr, depth, T::one())?;
    let vector = inverse_iteration(&matrix, dense_eigenvalue).ok_or(Error::Singular {
        stage: "inverse iteration",
        re: dense_eigenvalue.re.as_f64(),
        im: dense_eigenvalue.im.as_f64(),
    })?;
    Ok(DenseReport {
        n_tr,
        dense_eigenvalue,
        fraction_eigenvalue: w,
        eigenvalue_gap: (dense_eigenvalue - w).norm(),
        cosine_distance: cosine_distance(&vector, &recurrence),
    })
}
