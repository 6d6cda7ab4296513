use num_complex::Complex;

use crate::floquet::ResonanceState;
use crate::scalar::{cplx, Real};

/// Pole part of `<d|Psi(t)>` for `Psi(0) = d`:
/// `sum_n a_n exp(-i (z - n omega) t)` over the coefficient window.
///
/// At `t = 0` this is the weight of the initial state carried by the pole,
/// slightly below one; the continuum carries the rest.
pub fn survival_amplitude_floquet<T: Real>(state: &ResonanceState<T>, t: T) -> Complex<T> {
    let minus_i_t = cplx(T::zero(), -t);
    let (lo, hi) = state.range();
    (lo..=hi).fold(cplx(T::zero(), T::zero()), |acc, n| {
        acc + state.pole_amplitude(n) * (state.block_frequency(n) * minus_i_t).exp()
    })
}
