//! Weak-coupling quasi-energy and the Bessel weights it needs.
//!
//! To second order in the coupling the pole sits at
//!
//! ```text
//! z ~ epsilon_d + lambda^2 sum_n Sigma^(n)(epsilon_d + i0) J_n(A/omega)^2
//! ```
//!
//! where the boundary value is taken from the upper half plane.

use num_complex::Complex;

use crate::error::Result;
use crate::model::{ChannelWindow, ModelParams};
use crate::scalar::{real, Real};
use crate::self_energy::SelfEnergy;

/// Extra orders above `max(n, x)` where the downward recurrence starts.
const MILLER_MARGIN: usize = 40;

/// Bessel function of the first kind `J_n(x)` for integer order.
///
/// Uses Miller's downward recurrence normalized with the closure identity
/// `J_0 + 2 sum_k J_{2k} = 1`; the upward recurrence is unstable for `n > x`.
pub fn bessel_j<T: Real>(n: i32, x: T) -> T {
    if x < T::zero() {
        return parity::<T>(n) * bessel_j(n, -x);
    }
    let order = n.unsigned_abs() as usize;
    let value = bessel_j_orders(order, x)[order];
    if n < 0 {
        parity::<T>(n) * value
    } else {
        value
    }
}

fn parity<T: Real>(n: i32) -> T {
    if n % 2 == 0 {
        T::one()
    } else {
        -T::one()
    }
}

/// `J_0(x) ..= J_max(x)` for `x >= 0`.
pub fn bessel_j_orders<T: Real>(max_order: usize, x: T) -> Vec<T> {
    let mut out = vec![T::zero(); max_order + 1];
    if x == T::zero() {
        out[0] = T::one();
        return out;
    }
    if x < T::lit(1e-8) {
        // two-term series; the next term is O(x^4)
        let half = x / T::lit(2.0);
        let mut lead = T::one();
        for (k, slot) in out.iter_mut().enumerate() {
            if k > 0 {
                lead = lead * half / T::from_usize(k).unwrap();
            }
            *slot = lead * (T::one() - half * half / T::from_usize(k + 1).unwrap());
        }
        return out;
    }

    let x_ceil = x.ceil().to_usize().unwrap_or(usize::MAX / 4);
    let reach = max_order.max(x_ceil);
    let extra = (T::lit(40.0) * T::from_usize(reach).unwrap()).sqrt().ceil().to_usize().unwrap();
    let mut start = reach + MILLER_MARGIN + extra;
    start += start % 2;

    let big = T::max_value().sqrt().sqrt();
    let two_over_x = T::lit(2.0) / x;
    let mut above = T::zero();
    let mut current = T::min_positive_value().sqrt().sqrt();
    let mut closure = T::zero();
    for k in (0..=start).rev() {
        if k <= max_order {
            out[k] = current;
        }
        if k % 2 == 0 {
            closure = closure + if k == 0 { current } else { current + current };
        }
        if k == 0 {
            break;
        }
        let below = two_over_x * T::from_usize(k).unwrap() * current - above;
        above = current;
        current = below;
        if current.abs() > big {
            let scale = big.recip();
            current = current * scale;
            above = above * scale;
            closure = closure * scale;
            for v in out.iter_mut() {
                *v = *v * scale;
            }
        }
    }
    for v in out.iter_mut() {
        *v = *v / closure;
    }
    out
}

/// Squared Bessel weights `J_n(x)^2` over a channel window.
#[derive(Debug, Clone, PartialEq)]
pub struct BesselWeightTable<T> {
    pub x: T,
    pub window: ChannelWindow,
    weights: Vec<T>,
}

impl<T: Real> BesselWeightTable<T> {
    pub fn new(x: T, window: ChannelWindow) -> Self {
        let reach = window.lo.unsigned_abs().max(window.hi.unsigned_abs()) as usize;
        let orders = bessel_j_orders(reach, x.abs());
        let weights = window
            .iter()
            .map(|n| {
                let j = orders[n.unsigned_abs() as usize];
                j * j
            })
            .collect();
        Self { x, window, weights }
    }

    pub fn weight(&self, n: i32) -> T {
        if n < self.window.lo || n > self.window.hi {
            return T::zero();
        }
        self.weights[(n - self.window.lo) as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, T)> + '_ {
        self.window.iter().zip(self.weights.iter().copied())
    }

    /// `sum_n J_n^2`, which tends to one as the window grows.
    pub fn closure(&self) -> T {
        self.weights.iter().fold(T::zero(), |acc, &w| acc + w)
    }
}

/// Second-order quasi-energy of the dressed level.
pub fn perturbative_eigenvalue<T: Real>(params: &ModelParams<T>, window: ChannelWindow) -> Result<Complex<T>> {
    let base = real(params.epsilon_d());
    if params.lambda() == T::zero() {
        return Ok(base);
    }
    let se = SelfEnergy::new(params);
    let table = BesselWeightTable::new(params.drive_ratio(), window);
    let mut shift = Complex::new(T::zero(), T::zero());
    for (n, w) in table.iter() {
        if w == T::zero() {
            continue;
        }
        shift = shift + se.boundary_value(n, params.epsilon_d())? * w;
    }
    let l2 = params.lambda() * params.lambda();
    Ok(base + shift * l2)
}
