//! Complex quasi-energy poles of the effective Floquet Hamiltonian and their
//! biorthogonal eigenvectors.

pub mod coefficients;
pub mod continued_fraction;
pub mod dense;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::model::{ChannelWindow, ModelParams};
use crate::perturbation::perturbative_eigenvalue;
use crate::scalar::{cplx, is_finite, parts, real, Real};
use crate::self_energy::{SelfEnergy, SheetSelector};

use self::coefficients::{check_edges, ratio_coefficients};
use self::continued_fraction::{default_fold_tolerance, dispersion_with, Diagonal, DispersionValue, SelfConsistent};

pub use self::continued_fraction::{continued_fraction, Direction};
pub use self::dense::{dense_spectrum, dense_truncated_check, DenseReport, Gauge};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialGuess<T> {
    Perturbative,
    Given(Complex<T>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SheetPolicy {
    /// Second sheet for channels over the cut, chosen from the seed.
    Auto,
    /// Physical sheet everywhere; a negative control that cannot decay.
    FirstOnly,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions<T> {
    /// Coefficient window `N`; coefficients live on `-N..=N`.
    pub window: usize,
    /// Starting depth of the adaptive continued fractions.
    pub min_depth: usize,
    /// Acceptance threshold on `|D(z)|`.
    pub tolerance: T,
    pub max_iterations: usize,
    pub initial_guess: InitialGuess<T>,
    pub sheet_policy: SheetPolicy,
}

impl<T: Real> Default for SolverOptions<T> {
    fn default() -> Self {
        Self {
            window: ChannelWindow::DEFAULT_HALF_WIDTH as usize,
            min_depth: 64,
            tolerance: T::lit(1e-12),
            max_iterations: 100,
            initial_guess: InitialGuess::Perturbative,
            sheet_policy: SheetPolicy::Auto,
        }
    }
}

impl<T: Real> SolverOptions<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > T::zero()) {
            return Err(Error::domain("tolerance", "must be positive"));
        }
        if self.window == 0 {
            return Err(Error::domain("window", "must be positive"));
        }
        if self.min_depth < self.window {
            return Err(Error::domain("depth", "must be at least the window"));
        }
        if self.max_iterations == 0 {
            return Err(Error::domain("max_iterations", "must be positive"));
        }
        Ok(())
    }

    /// Tolerance actually used: the requested one, floored a little above
    /// the rounding level of the scalar type.
    pub fn effective_tolerance(&self, z: Complex<T>) -> T {
        self.tolerance
            .max(T::lit(64.0) * T::epsilon() * T::one().max(z.norm()))
    }

    fn channel_window(&self) -> ChannelWindow {
        ChannelWindow::symmetric(self.window as i32)
    }

    fn sheets_at(&self, z: Complex<T>) -> SheetSelector<T> {
        match self.sheet_policy {
            SheetPolicy::Auto => SheetSelector::FrozenAt(z),
            SheetPolicy::FirstOnly => SheetSelector::FirstOnly,
        }
    }
}

/// Coefficients indexed by Floquet block over a contiguous range.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientMap<T> {
    lo: i32,
    values: Vec<Complex<T>>,
}

impl<T: Real> CoefficientMap<T> {
    pub(crate) fn centred(values: Vec<Complex<T>>) -> Self {
        let lo = -((values.len() / 2) as i32);
        Self { lo, values }
    }

    /// Coefficient of block `n`; zero outside the stored range.
    pub fn get(&self, n: i32) -> Complex<T> {
        let i = n - self.lo;
        if i < 0 || i as usize >= self.values.len() {
            return cplx(T::zero(), T::zero());
        }
        self.values[i as usize]
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.values.len() as i32 - 1
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, Complex<T>)> + '_ {
        self.values.iter().enumerate().map(|(i, v)| (self.lo + i as i32, *v))
    }

    pub fn sum(&self) -> Complex<T> {
        self.values.iter().fold(cplx(T::zero(), T::zero()), |acc, v| acc + *v)
    }

    fn shifted(&self, m: i32) -> Self {
        Self {
            lo: self.lo + m,
            values: self.values.clone(),
        }
    }
}

/// A converged Floquet resonance.
///
/// `right` is scaled so that `R(mode) = 1`; `left` is scaled the same way and
/// the normalization `N_d` makes `N_d sum_n L(n) R(n) (1 - lambda^2 Sigma')`
/// equal to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ResonanceState<T> {
    pub params: ModelParams<T>,
    pub z: Complex<T>,
    pub window: usize,
    pub right: CoefficientMap<T>,
    pub left: CoefficientMap<T>,
    pub n_d: Complex<T>,
    pub k_d: Complex<T>,
    pub sheets: SheetSelector<T>,
    pub mode: i32,
    pub residual: T,
    pub iterations: usize,
    pub depth: usize,
}

impl<T: Real> ResonanceState<T> {
    pub fn right(&self, n: i32) -> Complex<T> {
        self.right.get(n)
    }

    pub fn left(&self, n: i32) -> Complex<T> {
        self.left.get(n)
    }

    /// Amplitude with which block `n` of this pole enters the survival
    /// amplitude and the emitted field: `N_d R(n) sum_m L(m)`.
    pub fn pole_amplitude(&self, n: i32) -> Complex<T> {
        self.n_d * self.right(n) * self.left.sum()
    }

    /// Complex frequency `z - n omega` carried by block `n`.
    pub fn block_frequency(&self, n: i32) -> Complex<T> {
        self.z - real(T::from_int(n as i64) * self.params.omega())
    }

    pub(crate) fn diagonal(&self) -> SelfConsistent<T> {
        SelfConsistent {
            params: self.params,
            sheets: self.sheets,
        }
    }

    /// Half-width of the stored coefficient range around `mode`.
    pub fn range(&self) -> (i32, i32) {
        (self.right.lo(), self.right.hi())
    }
}

/// `D(z)` with sheets chosen per channel at `z` itself.
pub fn dispersion<T: Real>(params: &ModelParams<T>, z: Complex<T>, opts: &SolverOptions<T>) -> Result<DispersionValue<T>> {
    let diag = SelfConsistent {
        params: *params,
        sheets: opts.sheets_at(z),
    };
    dispersion_with(params, &diag, z, 0, opts.min_depth, default_fold_tolerance())
}

/// `D` around block `centre` with an explicit sheet selector.
pub fn dispersion_centred<T: Real>(
    params: &ModelParams<T>,
    z: Complex<T>,
    centre: i32,
    sheets: SheetSelector<T>,
    opts: &SolverOptions<T>,
) -> Result<DispersionValue<T>> {
    let diag = SelfConsistent { params: *params, sheets };
    dispersion_with(params, &diag, z, centre, opts.min_depth, default_fold_tolerance())
}

struct Root<T> {
    z: Complex<T>,
    residual: T,
    iterations: usize,
    depth: usize,
}

fn find_root<T: Real>(
    params: &ModelParams<T>,
    sheets: SheetSelector<T>,
    seed: Complex<T>,
    opts: &SolverOptions<T>,
) -> Result<Root<T>> {
    let eval = |w: Complex<T>| dispersion_centred(params, w, 0, sheets, opts);
    let mut z = seed;
    let mut v = eval(z)?;
    let mut stalls = 0;
    for iteration in 0..opts.max_iterations {
        if v.value.norm() < opts.effective_tolerance(z) {
            return Ok(Root {
                z,
                residual: v.value.norm(),
                iterations: iteration,
                depth: v.depth,
            });
        }
        if v.derivative.norm() == T::zero() || !is_finite(v.derivative) {
            break;
        }
        let mut step = v.value / v.derivative;
        let mut accepted = None;
        for _ in 0..12 {
            if let Ok(next) = eval(z - step) {
                if next.value.norm() < v.value.norm() {
                    accepted = Some((z - step, next));
                    break;
                }
            }
            step = step * T::lit(0.5);
        }
        match accepted {
            Some((zn, vn)) => {
                let improved = vn.value.norm() < v.value.norm() * T::lit(0.5);
                z = zn;
                v = vn;
                stalls = if improved { 0 } else { stalls + 1 };
            }
            None => stalls = 3,
        }
        if stalls >= 3 {
            break;
        }
    }
    muller(&eval, z, v, opts)
}

fn muller<T: Real, F>(eval: &F, start: Complex<T>, at_start: DispersionValue<T>, opts: &SolverOptions<T>) -> Result<Root<T>>
where
    F: Fn(Complex<T>) -> Result<DispersionValue<T>>,
{
    let h = T::lit(1e-3) * T::one().max(start.norm());
    let mut x = [start - real(h), start + real(h), start];
    let mut f = [eval(x[0])?.value, eval(x[1])?.value, at_start.value];
    let mut depth = at_start.depth;
    let two = real(T::lit(2.0));
    for iteration in 0..opts.max_iterations {
        let tol = opts.effective_tolerance(x[2]);
        if f[2].norm() < tol {
            return Ok(Root {
                z: x[2],
                residual: f[2].norm(),
                iterations: iteration,
                depth,
            });
        }
        let h1 = x[1] - x[0];
        let h2 = x[2] - x[1];
        let d1 = (f[1] - f[0]) / h1;
        let d2 = (f[2] - f[1]) / h2;
        let a = (d2 - d1) / (h2 + h1);
        let b = a * h2 + d2;
        let disc = (b * b - a * f[2] * real(T::lit(4.0))).sqrt();
        let den = if (b + disc).norm() > (b - disc).norm() { b + disc } else { b - disc };
        if den.norm() == T::zero() {
            break;
        }
        let next = x[2] - two * f[2] / den;
        let v = eval(next)?;
        depth = v.depth;
        x = [x[1], x[2], next];
        f = [f[1], f[2], v.value];
    }
    Err(Error::NoConvergence {
        stage: "dispersion root",
        iterations: 2 * opts.max_iterations,
        residual: f[2].norm().as_f64(),
    })
}

/// Locates the resonance pole from the perturbative (or supplied) seed and
/// builds its normalized coefficients.
pub fn solve_resonance<T: Real>(params: &ModelParams<T>, opts: &SolverOptions<T>) -> Result<ResonanceState<T>> {
    opts.validate()?;
    let seed = match opts.initial_guess {
        InitialGuess::Perturbative => perturbative_eigenvalue(params, opts.channel_window())?,
        InitialGuess::Given(z) => z,
    };
    let se = SelfEnergy::new(params);
    let probe = ChannelWindow::symmetric(4 * opts.window as i32);
    let mut sheets = opts.sheets_at(seed);
    let mut root = find_root(params, sheets, seed, opts)?;
    let after = opts.sheets_at(root.z);
    if !sheets.agrees_with(&after, &se, probe.iter()) {
        sheets = after;
        root = find_root(params, sheets, root.z, opts)?;
        if !sheets.agrees_with(&opts.sheets_at(root.z), &se, probe.iter()) {
            return Err(Error::NoConvergence {
                stage: "sheet selection",
                iterations: 2,
                residual: root.residual.as_f64(),
            });
        }
    }
    let fault = T::lit(1e-12).max(T::lit(64.0) * T::epsilon());
    if root.z.im > fault {
        let (re, im) = parts(root.z);
        return Err(Error::SheetFault { re, im });
    }
    build_state(params, root.z, sheets, opts, root.residual, root.iterations, root.depth)
}

pub(crate) fn build_state<T: Real>(
    params: &ModelParams<T>,
    z: Complex<T>,
    sheets: SheetSelector<T>,
    opts: &SolverOptions<T>,
    residual: T,
    iterations: usize,
    depth: usize,
) -> Result<ResonanceState<T>> {
    let right = right_coefficients(params, z, sheets, opts.window, depth)?;
    let left = left_coefficients(params, z, sheets, opts.window, depth)?;
    let state = ResonanceState {
        params: *params,
        z,
        window: opts.window,
        right: CoefficientMap::centred(right),
        left: CoefficientMap::centred(left),
        n_d: real(T::one()),
        k_d: real(T::zero()),
        sheets,
        mode: 0,
        residual,
        iterations,
        depth,
    };
    normalize(state)
}

/// Right coefficients `R(-N..=N)` with `R(0) = 1`.
pub fn right_coefficients<T: Real>(
    params: &ModelParams<T>,
    z: Complex<T>,
    sheets: SheetSelector<T>,
    window: usize,
    depth: usize,
) -> Result<Vec<Complex<T>>> {
    let diag = SelfConsistent { params: *params, sheets };
    let r = ratio_coefficients(params, &diag, z, window, depth, T::one())?;
    check_edges(&r, window)?;
    Ok(r)
}

/// Left coefficients `L(-N..=N)` with `L(0) = 1`, from the transposed rows.
pub fn left_coefficients<T: Real>(
    params: &ModelParams<T>,
    z: Complex<T>,
    sheets: SheetSelector<T>,
    window: usize,
    depth: usize,
) -> Result<Vec<Complex<T>>> {
    let diag = SelfConsistent { params: *params, sheets };
    let l = ratio_coefficients(params, &diag, z, window, depth, -T::one())?;
    check_edges(&l, window)?;
    Ok(l)
}

/// Fixes `N_d` from the biorthogonal norm and recomputes `K_d`.
pub fn normalize<T: Real>(mut state: ResonanceState<T>) -> Result<ResonanceState<T>> {
    let diag = state.diagonal();
    let one = real(T::one());
    let mut norm = cplx(T::zero(), T::zero());
    let mut scale = T::zero();
    for (n, r) in state.right.iter() {
        let (_, dd) = diag.entry(n, state.z)?;
        let term = state.left(n) * r * (one - dd);
        norm = norm + term;
        scale = scale + term.norm();
    }
    if norm.norm() <= T::epsilon().sqrt() * scale {
        return Err(Error::ExceptionalPoint {
            norm: norm.norm().as_f64(),
        });
    }
    state.n_d = norm.inv();
    state.k_d = state.n_d * state.right.sum() / T::TAU();
    Ok(state)
}

/// The same pole seen from Floquet mode `m`: `z -> z + m omega` and
/// `R(n) -> R(n - m)`.
pub fn shift_mode<T: Real>(state: &ResonanceState<T>, m: i32) -> ResonanceState<T> {
    let shift = real(T::from_int(m as i64) * state.params.omega());
    let sheets = match state.sheets {
        SheetSelector::FrozenAt(z) => SheetSelector::FrozenAt(z + shift),
        other => other,
    };
    ResonanceState {
        z: state.z + shift,
        right: state.right.shifted(m),
        left: state.left.shifted(m),
        sheets,
        mode: state.mode + m,
        ..state.clone()
    }
}

/// Biorthogonal product `<<Phi~_a | Phi_b>>` of two (mode-shifted) states of
/// the same model, with the continuum part summed in closed form.
pub fn c_product<T: Real>(a: &ResonanceState<T>, b: &ResonanceState<T>) -> Result<Complex<T>> {
    let lo = a.left.lo().min(b.right.lo());
    let hi = a.left.hi().max(b.right.hi());
    let wa = a.z;
    let wb = b.z;
    let l2 = a.params.lambda() * a.params.lambda();
    let se = SelfEnergy::new(&a.params);
    let same = (wa - wb).norm() <= T::epsilon() * T::lit(16.0) * T::one().max(wa.norm());
    let one = real(T::one());
    let mut sum = cplx(T::zero(), T::zero());
    for n in lo..=hi {
        let l = a.left(n);
        let r = b.right(n);
        if l.norm() == T::zero() || r.norm() == T::zero() {
            continue;
        }
        let weight = if l2 == T::zero() {
            one
        } else if same {
            one - se.sigma_prime(n, wa, a.sheets.sheet(&se, n))? * l2
        } else {
            let sa = se.sigma(n, wa, a.sheets.sheet(&se, n))?;
            let sb = se.sigma(n, wb, b.sheets.sheet(&se, n))?;
            one + (sb - sa) / (wa - wb) * l2
        };
        sum = sum + l * r * weight;
    }
    Ok(a.n_d * sum)
}
