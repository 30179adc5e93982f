//! Front end for the closed forms: JSON run configs, parallel grid sweeps
//! and CSV/JSON tables in SI units.
//!
//! ```json
//! {
//!   "system": {"rydberg": {"n": 70, "isotope_mass_u": 7.016, "lambda0_um": 448}},
//!   "k0R": {"start": 0.3, "stop": 3, "count": 200, "spacing": "log"},
//!   "times": [1.0],
//!   "observables": ["displacement"],
//!   "output": {"path": "displacement.csv", "format": "csv"}
//! }
//! ```

pub mod config;
pub mod output;
pub mod sweep;

use std::fmt;
use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use serde::Serialize;

pub use config::{Format, Observable, RunConfig, Violation};
pub use sweep::{columns, Table};

#[derive(Debug)]
pub enum CliError {
    /// The config is unusable; every problem found is listed.
    Validation(Vec<Violation>),
    /// A closed form or quadrature failed at a grid point.
    Numerical {
        k0r: f64,
        gamma0_t: Option<f64>,
        message: String,
    },
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Numerical { .. } | CliError::Io(_) => 2,
        }
    }

    /// Machine-readable form for stderr.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        #[serde(tag = "error", rename_all = "snake_case")]
        enum Doc<'a> {
            InvalidConfig {
                violations: &'a [Violation],
            },
            Numerical {
                #[serde(rename = "k0R")]
                k0r: f64,
                gamma0_t: Option<f64>,
                message: &'a str,
            },
            Io {
                message: String,
            },
        }
        let doc = match self {
            CliError::Validation(v) => Doc::InvalidConfig { violations: v },
            CliError::Numerical {
                k0r,
                gamma0_t,
                message,
            } => Doc::Numerical {
                k0r: *k0r,
                gamma0_t: *gamma0_t,
                message,
            },
            CliError::Io(e) => Doc::Io { message: e.to_string() },
        };
        serde_json::to_string(&doc).expect("plain data")
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(v) => {
                write!(f, "invalid config:")?;
                for x in v {
                    write!(f, " {}: {};", x.field, x.message)?;
                }
                Ok(())
            }
            CliError::Numerical {
                k0r,
                gamma0_t: Some(t),
                message,
            } => write!(f, "numerical failure at k0R = {k0r}, Γ₀T = {t}: {message}"),
            CliError::Numerical { k0r, message, .. } => write!(f, "numerical failure at k0R = {k0r}: {message}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Where and how a run writes its table.
#[derive(Debug, Clone, Default)]
pub struct OutputOverride {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub path: PathBuf,
    pub format: Format,
    pub rows: usize,
    pub columns: usize,
    /// (k₀R, Γ₀T, S_CM) at the largest |S_CM|, when displacement was requested
    pub peak_displacement: Option<(f64, f64, f64)>,
}

impl fmt::Display for RunSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "wrote {} rows x {} columns to {} ({:?})",
            self.rows,
            self.columns,
            self.path.display(),
            self.format
        )?;
        if let Some((x, t, s)) = self.peak_displacement {
            write!(f, "\npeak |S_CM| = {s:.4e} m at k0R = {x:.4}, T = {t:.4e} s")?;
        }
        Ok(())
    }
}

/// Validate, evaluate on `threads` workers (all cores when `None`) and
/// write the table.
pub fn run(cfg: &RunConfig, out: &OutputOverride, threads: Option<usize>) -> Result<RunSummary, CliError> {
    let mut violations = cfg.violations();
    let path = out.path.clone().or_else(|| cfg.output.as_ref().map(|o| o.path.clone()));
    if path.is_none() {
        violations.push(Violation {
            field: "output.path".into(),
            message: "no output path in config or on the command line".into(),
        });
    }
    if threads == Some(0) {
        violations.push(Violation {
            field: "--threads".into(),
            message: "must be >= 1".into(),
        });
    }
    if !violations.is_empty() {
        return Err(CliError::Validation(violations));
    }
    let path = path.expect("checked above");
    let format = out
        .format
        .or_else(|| cfg.output.as_ref().map(|o| o.format))
        .unwrap_or_default();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Io(std::io::Error::other(e)))?;
    let table = pool.install(|| sweep::run(cfg))?;
    log::info!("evaluated {} grid points", table.rows.len());

    let file = File::create(&path)?;
    output::write(&table, format, BufWriter::new(file))?;

    let peak_displacement = table.columns.iter().position(|c| c == "S_CM_m").and_then(|j| {
        table
            .rows
            .iter()
            .max_by(|a, b| a[j].abs().total_cmp(&b[j].abs()))
            .map(|r| (r[0], r[1], r[j]))
    });
    Ok(RunSummary {
        path,
        format,
        rows: table.rows.len(),
        columns: table.columns.len(),
        peak_displacement,
    })
}
