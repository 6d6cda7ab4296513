//! Complex Floquet spectral analysis of a sinusoidally driven two-level
//! emitter coupled to a one-dimensional photon continuum.
//!
//! The numerical core is generic over the real scalar type ([`Real`], with
//! `f32` and `f64` implementations); the aliases below fix it to `f64`.

pub mod error;
pub mod floquet;
pub mod io;
pub mod linalg;
pub mod model;
pub mod observables;
pub mod oracle;
pub mod perturbation;
pub mod scalar;
pub mod self_energy;

pub use error::{Error, Result};
pub use floquet::{
    c_product, continued_fraction, dense_truncated_check, dispersion, left_coefficients, normalize,
    right_coefficients, shift_mode, solve_resonance, Direction, InitialGuess, SheetPolicy,
};
pub use model::{make_model, open_channels, ChannelSet, ChannelWindow, Grid1D, GridKind};
pub use perturbation::{bessel_j, perturbative_eigenvalue, BesselWeightTable};
pub use scalar::Real;
pub use self_energy::{select_sheet, sigma, sigma_prime, spectral_density, Sheet, SheetSelector};

pub type Complex64 = num_complex::Complex<f64>;

pub type ModelParams = model::ModelParams<f64>;
pub type SolverOptions = floquet::SolverOptions<f64>;
pub type ResonanceState = floquet::ResonanceState<f64>;
pub type DiscretizedSystem = oracle::DiscretizedSystem<f64>;


pub type ModelParams32 = model::ModelParams<f32>;
pub type SolverOptions32 = floquet::SolverOptions<f32>;
pub type ResonanceState32 = floquet::ResonanceState<f32>;
