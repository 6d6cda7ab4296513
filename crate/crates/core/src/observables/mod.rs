//! Observables assembled from a converged resonance: the emitted spectrum,
//! the pole part of the spatial photon field and the survival amplitude.
//!
//! Mode `m` of the pole carries the complex frequency `z + m omega`, which is
//! block `n = mode - m` of the coefficient vector.

mod field;
mod peaks;
mod spectrum;
mod survival;

pub use field::{
    dominant_beat_frequency, envelope_log_slope, interference_decomposition, resonance_spatial_field, BeatPeak,
    PolePairing, SpatialFieldDataset,
};
pub use peaks::{label_peaks, local_maxima, PeakSummary};
pub use spectrum::{hhg_spectrum, SpectrumDataset};
pub use survival::survival_amplitude_floquet;

/// Default half-width of the mode sums.
pub const DEFAULT_MODE_WINDOW: usize = 12;

/// Relative change under mode-window doubling above which a sum is rejected.
pub const MODE_WINDOW_TOLERANCE: f64 = 1e-8;
