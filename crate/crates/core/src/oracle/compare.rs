use crate::error::{Error, Result};
use crate::observables::local_maxima;
use crate::scalar::Real;

/// A sampled real function.
#[derive(Debug, Clone, PartialEq)]
pub struct Series<T> {
    pub x: Vec<T>,
    pub y: Vec<T>,
}

/// Which samples enter the comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sampling<T> {
    All,
    /// Only local maxima of the reference above `fraction` of its peak.
    ReferenceMaxima { fraction: T },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tolerance<T> {
    pub name: String,
    pub relative: T,
    /// Compared abscissae are restricted to `lo <= x <= hi`.
    pub lo: T,
    pub hi: T,
    /// Rescale the prediction by one scalar matched at the reference maximum.
    pub calibrate: bool,
    pub sampling: Sampling<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport<T> {
    pub name: String,
    pub points: usize,
    pub max_relative_error: T,
    /// Abscissa of the worst point.
    pub worst_at: T,
    pub calibration: T,
    pub tolerance: T,
    pub passed: bool,
}

/// Relative deviation of `prediction` from `reference` on a shared grid.
pub fn compare<T: Real>(prediction: &Series<T>, reference: &Series<T>, tol: &Tolerance<T>) -> Result<ComparisonReport<T>> {
    if prediction.x.len() != reference.x.len()
        || prediction.y.len() != prediction.x.len()
        || reference.y.len() != reference.x.len()
    {
        return Err(Error::GridMismatch(format!("{}: series lengths differ", tol.name)));
    }
    let scale = reference
        .x
        .iter()
        .fold(T::one(), |acc, &v| acc.max(v.abs()));
    if prediction
        .x
        .iter()
        .zip(&reference.x)
        .any(|(a, b)| (*a - *b).abs() > T::epsilon() * T::lit(16.0) * scale)
    {
        return Err(Error::GridMismatch(format!("{}: abscissae differ", tol.name)));
    }
    let inside: Vec<usize> = (0..reference.x.len())
        .filter(|&i| reference.x[i] >= tol.lo && reference.x[i] <= tol.hi)
        .collect();
    let picked: Vec<usize> = match tol.sampling {
        Sampling::All => inside.clone(),
        Sampling::ReferenceMaxima { fraction } => {
            let local: Vec<T> = inside.iter().map(|&i| reference.y[i]).collect();
            local_maxima(&local, fraction).into_iter().map(|j| inside[j]).collect()
        }
    };
    let calibration = if tol.calibrate {
        let reference_peak = picked
            .iter()
            .copied()
            .max_by(|&a, &b| reference.y[a].partial_cmp(&reference.y[b]).unwrap());
        match reference_peak {
            Some(i) if prediction.y[i] != T::zero() => reference.y[i] / prediction.y[i],
            _ => T::one(),
        }
    } else {
        T::one()
    };
    let mut worst = T::zero();
    let mut worst_at = T::nan();
    for &i in &picked {
        let r = reference.y[i];
        let p = prediction.y[i] * calibration;
        let err = if r == T::zero() {
            if p == T::zero() {
                T::zero()
            } else {
                T::infinity()
            }
        } else {
            (p - r).abs() / r.abs()
        };
        if err > worst || worst_at.is_nan() {
            worst = worst.max(err);
            worst_at = reference.x[i];
        }
    }
    Ok(ComparisonReport {
        name: tol.name.clone(),
        points: picked.len(),
        max_relative_error: worst,
        worst_at,
        calibration,
        tolerance: tol.relative,
        passed: !picked.is_empty() && worst <= tol.relative,
    })
}
