//! Independent reference implementations used across the integration tests.
//!
//! Nothing here calls the closed forms under test; the only library pieces
//! used are parameter bundles and, for the Schur complement, the diagonal
//! self-energies (the quantity checked there is the fold, not the diagonal).
#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use floquet_hhg::self_energy::{SelfEnergy, Sheet};
use floquet_hhg::{Complex64, ModelParams};
use nalgebra::DMatrix;

pub type C = Complex64;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn reference_model(lambda: f64) -> ModelParams {
    floquet_hhg::make_model(1.0, 2.4, 1.2, lambda, TAU).unwrap()
}

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &dyn Fn(f64) -> C, a: f64, b: f64) -> (C, f64) {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).norm())
}

/// Adaptive Gauss-Kronrod quadrature of a complex integrand on `[a, b]`.
pub fn quad(f: &dyn Fn(f64) -> C, a: f64, b: f64, tol: f64) -> C {
    fn rec(f: &dyn Fn(f64) -> C, a: f64, b: f64, whole: C, err: f64, tol: f64, depth: u32) -> C {
        if err <= tol.max(1e-15 * whole.norm()) || depth >= 60 {
            return whole;
        }
        let m = 0.5 * (a + b);
        let (l, el) = gk15(f, a, m);
        let (r, er) = gk15(f, m, b);
        rec(f, a, m, l, el, 0.5 * tol, depth + 1) + rec(f, m, b, r, er, 0.5 * tol, depth + 1)
    }
    let (whole, err) = gk15(f, a, b);
    rec(f, a, b, whole, err, tol, 0)
}

/// `int_0^{k_c} 4 e / (zeta - e) de` by adaptive quadrature.
///
/// The integrand is split at `Re zeta` so the near-pole region is resolved
/// on both sides.
pub fn sigma_by_quadrature(zeta: C, k_c: f64) -> C {
    let f = |e: f64| C::new(4.0 * e, 0.0) / (zeta - e);
    let mut cuts = vec![0.0, k_c];
    if zeta.re > 0.0 && zeta.re < k_c {
        let w = zeta.im.abs().max(1e-12);
        for p in [zeta.re - 10.0 * w, zeta.re, zeta.re + 10.0 * w] {
            if p > 0.0 && p < k_c {
                cuts.push(p);
            }
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.windows(2)
        .map(|w| quad(&f, w[0], w[1], 1e-13))
        .fold(C::new(0.0, 0.0), |a, b| a + b)
}

/// `J_n(x)` from its power series, summed until the terms stop contributing.
pub fn bessel_series(n: i32, x: f64) -> f64 {
    let order = n.unsigned_abs();
    let sign = if n < 0 && order % 2 == 1 { -1.0 } else { 1.0 };
    let half = x / 2.0;
    let mut term = 1.0;
    for k in 1..=order {
        term *= half / k as f64;
    }
    let mut sum = term;
    let mut k = 0u32;
    loop {
        k += 1;
        term *= -half * half / (k as f64 * (k + order) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) && k > 2 {
            break;
        }
        if k > 500 {
            break;
        }
    }
    sign * sum
}

/// `J_n(x) = (1 / 2 pi) int_0^{2 pi} cos(n tau - x sin tau) d tau`, by the
/// trapezoid rule (spectrally accurate for periodic integrands).
pub fn bessel_integral(n: i32, x: f64) -> f64 {
    let m = 512;
    let h = TAU / m as f64;
    (0..m)
        .map(|j| {
            let tau = j as f64 * h;
            (n as f64 * tau - x * tau.sin()).cos()
        })
        .sum::<f64>()
        / m as f64
}

/// Complex secant iteration for `f(z) = 0`.
pub fn secant(f: &dyn Fn(C) -> C, mut z0: C, mut z1: C, tol: f64, max_iter: usize) -> Option<C> {
    let mut f0 = f(z0);
    for _ in 0..max_iter {
        let f1 = f(z1);
        if f1.norm() < tol {
            return Some(z1);
        }
        let den = f1 - f0;
        if den.norm() == 0.0 {
            return None;
        }
        let z2 = z1 - f1 * (z1 - z0) / den;
        z0 = z1;
        f0 = f1;
        z1 = z2;
        if (z1 - z0).norm() < tol * 1e-3 {
            return Some(z1);
        }
    }
    None
}

/// Sheet-II Friedrichs self-energy, written out independently of the
/// library: `Sigma_I - 8 pi i zeta` with `Sigma_I` from the elementary
/// antiderivative.
pub fn friedrichs_sigma_ii(zeta: C, k_c: f64) -> C {
    let first = 4.0 * (zeta * (zeta.ln() - (zeta - k_c).ln()) - k_c);
    first - C::new(0.0, 8.0 * PI) * zeta
}

/// Scalar Friedrichs pole `z = epsilon_d + lambda^2 Sigma_II(z)` by secant.
pub fn friedrichs_pole(epsilon_d: f64, lambda: f64, k_c: f64) -> C {
    let f = |z: C| z - epsilon_d - lambda * lambda * friedrichs_sigma_ii(z, k_c);
    let z0 = C::new(epsilon_d, -0.01);
    let z1 = C::new(epsilon_d - 0.01, -0.05);
    secant(&f, z0, z1, 1e-15, 200).expect("secant did not converge")
}

/// Diagonal `d_n(z)` of the effective block with self-energies on the sheets
/// selected at `z`.
pub fn diagonal_entry(p: &ModelParams, n: i32, z: C) -> C {
    let se = SelfEnergy::new(p);
    let sheet = se.select_sheet(n, z);
    let s = se.sigma(n, z, sheet).unwrap();
    C::new(p.epsilon_d() + n as f64 * p.omega(), 0.0) + s * p.lambda() * p.lambda()
}

/// Fold of blocks `1..=depth` (`up`) or `-1..=-depth` onto block 0 through a
/// dense Schur complement: `H_{0,1} [(z - H_side)^{-1}]_{11} H_{1,0}`.
pub fn schur_fold(p: &ModelParams, z: C, depth: usize, up: bool) -> C {
    // rows read a R(n-1) + d_n R(n) - a R(n+1), with a = A / 2i
    let a = C::new(0.0, -p.amplitude() / 2.0);
    let sign = if up { 1 } else { -1 };
    let mut m = DMatrix::<C>::zeros(depth, depth);
    for i in 0..depth {
        let n = sign * (i as i32 + 1);
        m[(i, i)] = z - diagonal_entry(p, n, z);
        if i + 1 < depth {
            // entries between blocks n and n + sign
            let (lower, upper) = if up { (a, -a) } else { (-a, a) };
            m[(i, i + 1)] = -upper;
            m[(i + 1, i)] = -lower;
        }
    }
    let inv = m.try_inverse().expect("singular Schur block");
    let (to_side, from_side) = if up { (-a, a) } else { (a, -a) };
    to_side * inv[(0, 0)] * from_side
}

/// Relative error with an absolute floor.
pub fn rel(a: C, b: C) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

pub fn first_sheet(p: &ModelParams, z: C) -> C {
    SelfEnergy::new(p).sigma(0, z, Sheet::First).unwrap()
}
