use crate::floquet::ResonanceState;
use crate::scalar::Real;

/// Indices of strict interior local maxima above `fraction` of the largest
/// value.
pub fn local_maxima<T: Real>(values: &[T], fraction: T) -> Vec<usize> {
    let top = values.iter().fold(T::zero(), |acc, &v| acc.max(v));
    (1..values.len().saturating_sub(1))
        .filter(|&i| values[i] > values[i - 1] && values[i] > values[i + 1] && values[i] >= fraction * top)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakSummary<T> {
    pub mode: i32,
    /// `Re z + m omega`.
    pub expected: T,
    pub position: T,
    pub height: T,
    /// Height divided by the coupling density `2 lambda^2 |k|`.
    pub intensity: T,
}

/// Largest sample within half a drive quantum of `Re z + m omega`, for each
/// requested mode; modes whose search interval holds no sample are skipped.
pub fn label_peaks<T: Real>(state: &ResonanceState<T>, k: &[T], values: &[T], modes: &[i32]) -> Vec<PeakSummary<T>> {
    let omega = state.params.omega();
    let base = state.z.re - T::from_int(state.mode as i64) * omega;
    let l2 = state.params.lambda() * state.params.lambda();
    modes
        .iter()
        .filter_map(|&m| {
            let expected = base + T::from_int(m as i64) * omega;
            let half = omega / T::lit(2.0);
            let best = k
                .iter()
                .zip(values)
                .filter(|(kk, _)| **kk > expected - half && **kk < expected + half)
                .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())?;
            let density = T::lit(2.0) * l2 * best.0.abs();
            Some(PeakSummary {
                mode: m,
                expected,
                position: *best.0,
                height: *best.1,
                intensity: if density > T::zero() { *best.1 / density } else { T::zero() },
            })
        })
        .collect()
}
