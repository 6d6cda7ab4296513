//! Physical parameters, grids and channel bookkeeping.
//!
//! Units are `hbar = c = 1`; photon energies are `|k|`.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Parameters of the driven emitter coupled to the 1D continuum.
///
/// The atomic level is modulated as `epsilon_d + amplitude * sin(omega t)`,
/// and couples with strength `lambda` to photon modes with `|k| <= k_c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams<T> {
    epsilon_d: T,
    amplitude: T,
    omega: T,
    lambda: T,
    k_c: T,
}

impl<T: Real> ModelParams<T> {
    pub fn new(epsilon_d: T, amplitude: T, omega: T, lambda: T, k_c: T) -> Result<Self> {
        let finite = [
            ("epsilon_d", epsilon_d),
            ("A", amplitude),
            ("omega", omega),
            ("lambda", lambda),
            ("k_c", k_c),
        ];
        for (name, value) in finite {
            if !value.is_finite() {
                return Err(Error::domain(name, "must be finite"));
            }
        }
        if omega <= T::zero() {
            return Err(Error::domain("omega", "must be positive"));
        }
        if k_c <= T::zero() {
            return Err(Error::domain("k_c", "must be positive"));
        }
        if lambda < T::zero() {
            return Err(Error::domain("lambda", "must be non-negative"));
        }
        Ok(Self {
            epsilon_d,
            amplitude,
            omega,
            lambda,
            k_c,
        })
    }

    /// Builds the model from the dimensionless drive ratio `A / omega`.
    pub fn with_drive_ratio(epsilon_d: T, drive_ratio: T, omega: T, lambda: T, k_c: T) -> Result<Self> {
        if !drive_ratio.is_finite() {
            return Err(Error::domain("A_over_omega", "must be finite"));
        }
        Self::new(epsilon_d, drive_ratio * omega, omega, lambda, k_c)
    }

    pub fn epsilon_d(&self) -> T {
        self.epsilon_d
    }

    pub fn amplitude(&self) -> T {
        self.amplitude
    }

    pub fn omega(&self) -> T {
        self.omega
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn k_c(&self) -> T {
        self.k_c
    }

    /// Drive period `2 pi / omega`.
    pub fn period(&self) -> T {
        T::TAU() / self.omega
    }

    /// `A / omega`, the argument of the Bessel weights.
    pub fn drive_ratio(&self) -> T {
        self.amplitude / self.omega
    }

    pub fn with_lambda(&self, lambda: T) -> Result<Self> {
        Self::new(self.epsilon_d, self.amplitude, self.omega, lambda, self.k_c)
    }

    pub fn with_amplitude(&self, amplitude: T) -> Result<Self> {
        Self::new(self.epsilon_d, amplitude, self.omega, self.lambda, self.k_c)
    }
}

/// Validating constructor with the argument order used throughout the docs.
pub fn make_model<T: Real>(epsilon_d: T, amplitude: T, omega: T, lambda: T, k_c: T) -> Result<ModelParams<T>> {
    ModelParams::new(epsilon_d, amplitude, omega, lambda, k_c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    Momentum,
    Position,
    Time,
}

/// Strictly increasing set of sample points.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D<T> {
    points: Vec<T>,
    kind: GridKind,
}

impl<T: Real> Grid1D<T> {
    /// `count` uniformly spaced points from `min` to `max` inclusive.
    pub fn uniform(min: T, max: T, count: usize, kind: GridKind) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) {
            return Err(Error::domain("grid", "bounds must be finite"));
        }
        if count == 0 {
            return Ok(Self { points: Vec::new(), kind });
        }
        if count == 1 {
            return Self::from_points(vec![min], kind);
        }
        if max <= min {
            return Err(Error::domain("grid", "max must exceed min"));
        }
        let step = (max - min) / T::from_usize(count - 1).unwrap();
        let points = (0..count)
            .map(|i| min + step * T::from_usize(i).unwrap())
            .collect();
        Self::from_points(points, kind)
    }

    pub fn from_points(points: Vec<T>, kind: GridKind) -> Result<Self> {
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::domain("grid", "points must be finite"));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::domain("grid", "points must be strictly increasing"));
        }
        Ok(Self { points, kind })
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Inclusive range of Floquet block indices `lo..=hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChannelWindow {
    pub lo: i32,
    pub hi: i32,
}

impl ChannelWindow {
    pub const DEFAULT_HALF_WIDTH: i32 = 32;

    pub fn symmetric(half_width: i32) -> Self {
        let h = half_width.abs();
        Self { lo: -h, hi: h }
    }

    pub fn new(lo: i32, hi: i32) -> Result<Self> {
        if lo > 0 || hi < 0 {
            return Err(Error::domain("window", "must contain 0"));
        }
        Ok(Self { lo, hi })
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<i32> {
        self.lo..=self.hi
    }

    pub fn doubled(&self) -> Self {
        Self {
            lo: self.lo * 2,
            hi: self.hi * 2,
        }
    }
}

impl Default for ChannelWindow {
    fn default() -> Self {
        Self::symmetric(Self::DEFAULT_HALF_WIDTH)
    }
}

/// Floquet channels whose bare threshold `epsilon_d - n omega` lies inside
/// the photon band `(0, k_c)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelSet {
    pub window: ChannelWindow,
    pub open: Vec<i32>,
}

impl ChannelSet {
    pub fn contains(&self, n: i32) -> bool {
        self.open.contains(&n)
    }

    pub fn is_empty(&self) -> bool {
        self.open.is_empty()
    }
}

pub fn open_channels<T: Real>(params: &ModelParams<T>, window: ChannelWindow) -> ChannelSet {
    let open = window
        .iter()
        .rev()
        .filter(|&n| {
            let e = params.epsilon_d() - T::from_int(n as i64) * params.omega();
            e > T::zero() && e < params.k_c()
        })
        .collect();
    ChannelSet { window, open }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn reference_parameter_set() {
        let p = make_model(1.0, 2.4, 1.2, 0.1, TAU).unwrap();
        assert!((p.drive_ratio() - 2.0).abs() < 1e-15);
        assert!((p.period() - TAU / 1.2).abs() < 1e-15);
    }

    #[test]
    fn free_atom_limit_is_valid() {
        let p = make_model(1.0, 0.0, 1.2, 0.0, TAU).unwrap();
        assert_eq!(p.lambda(), 0.0);
    }

    #[test]
    fn rejects_bad_fields() {
        let err = make_model(1.0, 1.0, 0.0, 0.1, TAU).unwrap_err();
        assert_eq!(err.to_string(), "omega must be positive");
        assert!(make_model(1.0, 1.0, 1.0, -0.1, TAU).is_err());
        assert!(make_model(1.0, 1.0, 1.0, 0.1, 0.0).is_err());
        let err = make_model(f64::NAN, 1.0, 1.0, 0.1, TAU).unwrap_err();
        assert!(err.to_string().starts_with("epsilon_d"));
        assert!(make_model(1.0, f64::INFINITY, 1.0, 0.1, TAU).is_err());
    }

    #[test]
    fn channels_by_enumeration() {
        let p = make_model(1.0, 2.4, 1.2, 0.1, TAU).unwrap();
        let set = open_channels(&p, ChannelWindow::symmetric(8));
        assert_eq!(set.open, vec![0, -1, -2, -3, -4]);

        // thresholds -1 + 1.2|n|: n = -1 gives 0.2, n = -6 gives 6.2 < 2 pi
        let p = make_model(-1.0, 2.4, 1.2, 0.1, TAU).unwrap();
        let set = open_channels(&p, ChannelWindow::symmetric(8));
        assert_eq!(set.open, vec![-1, -2, -3, -4, -5, -6]);
    }

    #[test]
    fn channels_do_not_depend_on_coupling_or_drive() {
        let a = make_model(1.0, 2.4, 1.2, 0.1, TAU).unwrap();
        let b = make_model(1.0, 0.0, 1.2, 0.0, TAU).unwrap();
        let w = ChannelWindow::default();
        assert_eq!(open_channels(&a, w), open_channels(&b, w));
    }

    #[test]
    fn uniform_grid() {
        let g = Grid1D::uniform(-1.0, 1.0, 5, GridKind::Position).unwrap();
        assert_eq!(g.points(), &[-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert!(Grid1D::from_points(vec![0.0, 0.0], GridKind::Time).is_err());
        assert!(Grid1D::<f64>::uniform(1.0, 0.0, 3, GridKind::Time).is_err());
        assert!(ChannelWindow::new(1, 3).is_err());
    }
}
