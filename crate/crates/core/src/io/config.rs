//! Run configuration: JSON with defaults materialized on parse, plus dotted
//! `key=value` overrides from the command line.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::floquet::{InitialGuess, SheetPolicy, SolverOptions};
use crate::model::{Grid1D, GridKind, ModelParams};
use crate::observables::{PolePairing, DEFAULT_MODE_WINDOW};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub epsilon_d: f64,
    pub omega: f64,
    #[serde(default, rename = "A", skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    #[serde(default, rename = "A_over_omega", skip_serializing_if = "Option::is_none")]
    pub drive_ratio: Option<f64>,
    #[serde(default = "default_lambda")]
    pub lambda: f64,
    #[serde(default = "default_k_c")]
    pub k_c: f64,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub observables: ObservablesConfig,
    #[serde(default)]
    pub grids: GridsConfig,
    #[serde(default)]
    pub oracle: OracleConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default = "default_out")]
    pub out: String,
}

fn default_lambda() -> f64 {
    0.1
}

fn default_k_c() -> f64 {
    std::f64::consts::TAU
}

fn default_out() -> String {
    "out".into()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SheetPolicyConfig {
    Auto,
    FirstOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    pub window: usize,
    pub min_depth: usize,
    pub tolerance: f64,
    pub max_iterations: usize,
    /// `[re, im]` of a user seed; the perturbative pole when absent.
    pub initial_guess: Option<[f64; 2]>,
    pub sheet_policy: SheetPolicyConfig,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let d = SolverOptions::<f64>::default();
        Self {
            window: d.window,
            min_depth: d.min_depth,
            tolerance: d.tolerance,
            max_iterations: d.max_iterations,
            initial_guess: None,
            sheet_policy: SheetPolicyConfig::Auto,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairingConfig {
    Retarded,
    AsPrinted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ObservablesConfig {
    pub mode_window: usize,
    pub pairing: PairingConfig,
    /// Time of the spatial snapshot.
    pub t: f64,
    /// Also integrate the oracle in `spatial` and emit its field.
    pub with_oracle: bool,
}

impl Default for ObservablesConfig {
    fn default() -> Self {
        Self {
            mode_window: DEFAULT_MODE_WINDOW,
            pairing: PairingConfig::Retarded,
            t: 20.0,
            with_oracle: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn build(&self, kind: GridKind) -> Result<Grid1D<f64>> {
        Grid1D::uniform(self.min, self.max, self.count, kind)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridsConfig {
    pub k: GridSpec,
    pub x: GridSpec,
    pub t: GridSpec,
}

impl Default for GridsConfig {
    fn default() -> Self {
        Self {
            k: GridSpec {
                min: 0.0,
                max: 6.2,
                count: 3101,
            },
            x: GridSpec {
                min: -30.0,
                max: 30.0,
                count: 1201,
            },
            t: GridSpec {
                min: 0.0,
                max: 20.0,
                count: 401,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OracleConfig {
    #[serde(rename = "L")]
    pub box_length: f64,
    #[serde(rename = "N")]
    pub mode_count: usize,
    pub dt: f64,
    pub t_end: f64,
    pub stride: usize,
    pub drift_tolerance: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            box_length: 400.0,
            mode_count: 8192,
            dt: 1e-3,
            t_end: 40.0,
            stride: 50,
            drift_tolerance: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    #[serde(rename = "A_over_omega")]
    pub drive_ratio: GridSpec,
    pub omega: GridSpec,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            drive_ratio: GridSpec {
                min: 0.0,
                max: 4.0,
                count: 21,
            },
            // avoids omega = 1, where a threshold meets the default level
            omega: GridSpec {
                min: 0.75,
                max: 1.95,
                count: 13,
            },
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        match (self.amplitude, self.drive_ratio) {
            (Some(_), Some(_)) | (None, None) => {
                return Err(Error::Config("exactly one of A and A_over_omega must be given".into()))
            }
            _ => {}
        }
        self.model()?;
        self.solver_options().validate()?;
        if self.observables.mode_window == 0 {
            return Err(Error::domain("observables.mode_window", "must be positive"));
        }
        if !(self.observables.t > 0.0) {
            return Err(Error::domain("observables.t", "must be positive"));
        }
        for (name, g) in [("grids.k", self.grids.k), ("grids.x", self.grids.x), ("grids.t", self.grids.t)] {
            g.build(GridKind::Position)
                .map_err(|e| Error::domain(name, e.to_string()))?;
        }
        if !(self.oracle.dt > 0.0) {
            return Err(Error::domain("oracle.dt", "must be positive"));
        }
        if !(self.oracle.t_end > 0.0) {
            return Err(Error::domain("oracle.t_end", "must be positive"));
        }
        Ok(())
    }

    pub fn model(&self) -> Result<ModelParams<f64>> {
        match (self.amplitude, self.drive_ratio) {
            (Some(a), None) => ModelParams::new(self.epsilon_d, a, self.omega, self.lambda, self.k_c),
            (None, Some(r)) => ModelParams::with_drive_ratio(self.epsilon_d, r, self.omega, self.lambda, self.k_c),
            _ => Err(Error::Config("exactly one of A and A_over_omega must be given".into())),
        }
    }

    pub fn solver_options(&self) -> SolverOptions<f64> {
        let s = &self.solver;
        SolverOptions {
            window: s.window,
            min_depth: s.min_depth,
            tolerance: s.tolerance,
            max_iterations: s.max_iterations,
            initial_guess: match s.initial_guess {
                Some([re, im]) => InitialGuess::Given(num_complex::Complex::new(re, im)),
                None => InitialGuess::Perturbative,
            },
            sheet_policy: match s.sheet_policy {
                SheetPolicyConfig::Auto => SheetPolicy::Auto,
                SheetPolicyConfig::FirstOnly => SheetPolicy::FirstOnly,
            },
        }
    }

    pub fn pairing(&self) -> PolePairing {
        match self.observables.pairing {
            PairingConfig::Retarded => PolePairing::Retarded,
            PairingConfig::AsPrinted => PolePairing::AsPrinted,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

/// Parses and validates a configuration; all defaults are filled in.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    parse_with_overrides(text, &[])
}

/// Parses `text`, applies `key=value` overrides (dotted keys address nested
/// sections, values are JSON or bare strings) and validates.
pub fn parse_with_overrides(text: &str, overrides: &[String]) -> Result<RunConfig> {
    let user: Value = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    if !user.is_object() {
        return Err(Error::Config("top level must be an object".into()));
    }
    let mut value = defaults();
    merge(&mut value, user);
    for o in overrides {
        apply_override(&mut value, o)?;
    }
    let config: RunConfig = serde_json::from_value(value).map_err(|e| Error::Config(e.to_string()))?;
    config.validate()?;
    Ok(config)
}

/// Every defaulted field, so that partial sections and overrides of nested
/// keys start from complete values.
fn defaults() -> Value {
    serde_json::json!({
        "lambda": default_lambda(),
        "k_c": default_k_c(),
        "solver": SolverConfig::default(),
        "observables": ObservablesConfig::default(),
        "grids": GridsConfig::default(),
        "oracle": OracleConfig::default(),
        "sweep": SweepConfig::default(),
        "out": default_out(),
    })
}

fn merge(base: &mut Value, over: Value) {
    match (base, over) {
        (Value::Object(b), Value::Object(o)) => {
            for (k, v) in o {
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

fn apply_override(root: &mut Value, assignment: &str) -> Result<()> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override `{assignment}` is not key=value")))?;
    let key = key.trim();
    if key.is_empty() {
        return Err(Error::Config(format!("override `{assignment}` has an empty key")));
    }
    let parsed = serde_json::from_str(raw.trim()).unwrap_or_else(|_| Value::String(raw.trim().to_string()));
    let mut node = root;
    let parts: Vec<&str> = key.split('.').collect();
    for part in &parts[..parts.len() - 1] {
        let obj = node
            .as_object_mut()
            .ok_or_else(|| Error::Config(format!("override `{key}`: `{part}` is not a section")))?;
        node = obj.entry(part.to_string()).or_insert_with(|| Value::Object(Default::default()));
    }
    let obj = node
        .as_object_mut()
        .ok_or_else(|| Error::Config(format!("override `{key}` does not address a section")))?;
    let leaf = parts[parts.len() - 1].to_string();
    match obj.get_mut(&leaf) {
        Some(slot) => merge(slot, parsed),
        None => {
            obj.insert(leaf, parsed);
        }
    }
    Ok(())
}
