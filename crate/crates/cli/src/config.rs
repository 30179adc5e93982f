//! Run configuration: a JSON document describing the pair, the grid and
//! which observables to tabulate.

use std::path::{Path, PathBuf};

use dyad_core::units::{circular_wavelength, rydberg_pair};
use dyad_core::{DyadConfig, EmissionMode, Vec3, CODATA_2018};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub system: System,
    /// k₀R values
    #[serde(rename = "k0R")]
    pub geometry: Axis,
    /// Γ₀T values
    pub times: Axis,
    pub observables: Vec<Observable>,
    #[serde(default)]
    pub emission_mode: EmissionMode,
    #[serde(default)]
    pub quadrature: Quadrature,
    #[serde(default)]
    pub output: Option<OutputSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum System {
    Rydberg {
        n: u32,
        isotope_mass_u: f64,
        #[serde(default)]
        lambda0_um: Option<f64>,
    },
    Explicit {
        #[serde(rename = "mu_Cm")]
        mu_cm: f64,
        /// rad/s
        omega0: f64,
        /// 1/s
        gamma0: f64,
        mass_kg: f64,
    },
}

/// A grid axis: one value, an explicit list, or a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Axis {
    Scalar(f64),
    List(Vec<f64>),
    Sweep(Sweep),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    Populations,
    Forces,
    Displacement,
    Emission,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Quadrature {
    /// Gauss-Legendre order in cos θ for the angular grid
    #[serde(default)]
    pub order: Option<usize>,
    /// Allowed relative change of the photon momentum on grid refinement
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_tolerance() -> f64 {
    1e-6
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            order: None,
            tolerance: default_tolerance(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: PathBuf,
    #[serde(default)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// One thing wrong with a config.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub field: String,
    pub message: String,
}

impl Violation {
    fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl Axis {
    /// Sorted, deduplicated grid values.
    pub fn values(&self) -> Vec<f64> {
        let mut v = match self {
            Axis::Scalar(x) => vec![*x],
            Axis::List(xs) => xs.clone(),
            Axis::Sweep(s) => s.values(),
        };
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    fn check(&self, field: &str, allow_zero: bool, out: &mut Vec<Violation>) {
        let ok = |v: f64| v.is_finite() && (v > 0.0 || (allow_zero && v == 0.0));
        let bound = if allow_zero { "finite and >= 0" } else { "finite and > 0" };
        match self {
            Axis::Scalar(x) => {
                if !ok(*x) {
                    out.push(Violation::new(field, format!("must be {bound}, got {x}")));
                }
            }
            Axis::List(xs) => {
                if xs.is_empty() {
                    out.push(Violation::new(field, "list is empty"));
                }
                for (i, x) in xs.iter().enumerate() {
                    if !ok(*x) {
                        out.push(Violation::new(format!("{field}[{i}]"), format!("must be {bound}, got {x}")));
                    }
                }
            }
            Axis::Sweep(s) => {
                if s.count < 1 {
                    out.push(Violation::new(format!("{field}.count"), "must be >= 1"));
                }
                if !(s.start < s.stop) {
                    out.push(Violation::new(
                        field,
                        format!("start ({}) must be below stop ({})", s.start, s.stop),
                    ));
                }
                let log = s.spacing == Spacing::Log;
                for (name, v) in [("start", s.start), ("stop", s.stop)] {
                    let good = if log { v.is_finite() && v > 0.0 } else { ok(v) };
                    if !good {
                        let need = if log { "finite and > 0 for log spacing" } else { bound };
                        out.push(Violation::new(format!("{field}.{name}"), format!("must be {need}, got {v}")));
                    }
                }
            }
        }
    }
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let f = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.start + f * (self.stop - self.start),
                    Spacing::Log => self.start * (self.stop / self.start).powf(f),
                }
            })
            .collect()
    }
}

impl System {
    /// The pair at k₀R = 1, dipoles along x̂, axis along ẑ.
    pub fn pair(&self) -> Result<DyadConfig, CliError> {
        let cfg = match *self {
            System::Rydberg {
                n,
                isotope_mass_u,
                lambda0_um,
            } => rydberg_pair(n, isotope_mass_u * CODATA_2018.amu, lambda0_um.map(|l| l * 1e-6)),
            System::Explicit {
                mu_cm,
                omega0,
                gamma0,
                mass_kg,
            } => {
                let k0 = omega0 / CODATA_2018.c;
                DyadConfig::new(Vec3::x() * mu_cm, Vec3::x() * mu_cm, omega0, gamma0, mass_kg, Vec3::z() / k0)
            }
        };
        cfg.map_err(|e| CliError::Validation(vec![Violation::new("system", e.to_string())]))
    }

    fn check(&self, out: &mut Vec<Violation>) {
        let mut positive = |name: &str, v: f64| {
            if !(v.is_finite() && v > 0.0) {
                out.push(Violation::new(format!("system.{name}"), format!("must be positive, got {v}")));
            }
        };
        match *self {
            System::Rydberg {
                n,
                isotope_mass_u,
                lambda0_um,
            } => {
                positive("rydberg.isotope_mass_u", isotope_mass_u);
                if let Some(l) = lambda0_um {
                    positive("rydberg.lambda0_um", l);
                }
                if n < 2 {
                    out.push(Violation::new("system.rydberg.n", format!("must be >= 2, got {n}")));
                } else if lambda0_um.is_none() && !circular_wavelength(n).is_finite() {
                    out.push(Violation::new("system.rydberg.n", "wavelength overflows"));
                }
            }
            System::Explicit {
                mu_cm,
                omega0,
                gamma0,
                mass_kg,
            } => {
                positive("explicit.mu_Cm", mu_cm);
                positive("explicit.omega0", omega0);
                positive("explicit.gamma0", gamma0);
                positive("explicit.mass_kg", mass_kg);
            }
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| {
            CliError::Validation(vec![Violation::new(
                "<document>",
                format!("line {}, column {}: {e}", e.line(), e.column()),
            )])
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Validation(vec![Violation::new("<file>", format!("{}: {e}", path.display()))])
        })?;
        Self::from_json(&text)
    }

    /// Every violation in the config, empty when it is usable.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        self.system.check(&mut out);
        self.geometry.check("k0R", false, &mut out);
        self.times.check("times", true, &mut out);
        if self.observables.is_empty() {
            out.push(Violation::new("observables", "at least one observable is required"));
        }
        if let Some(order) = self.quadrature.order {
            if order < 2 {
                out.push(Violation::new("quadrature.order", format!("must be >= 2, got {order}")));
            }
        }
        let tol = self.quadrature.tolerance;
        if !(tol.is_finite() && tol > 0.0) {
            out.push(Violation::new("quadrature.tolerance", format!("must be positive, got {tol}")));
        }
        out
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(CliError::Validation(v))
        }
    }

    /// Requested observables in canonical column order.
    pub fn observable_set(&self) -> Vec<Observable> {
        let mut v = self.observables.clone();
        v.sort();
        v.dedup();
        v
    }
}
