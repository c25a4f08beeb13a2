//! Run configuration: optional JSON file, overridden by flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::commands::CliError;

pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub surface: Option<String>,
    pub c: Option<f64>,
    pub tol: Option<f64>,
    pub grid: Option<(usize, usize)>,
    pub orbit_depth: Option<usize>,
    pub out: Option<PathBuf>,
    pub force: bool,
    pub no_meta: bool,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    /// Fields set in `flags` win.
    pub fn merged(self, flags: RunConfig) -> RunConfig {
        RunConfig {
            surface: flags.surface.or(self.surface),
            c: flags.c.or(self.c),
            tol: flags.tol.or(self.tol),
            grid: flags.grid.or(self.grid),
            orbit_depth: flags.orbit_depth.or(self.orbit_depth),
            out: flags.out.or(self.out),
            force: flags.force || self.force,
            no_meta: flags.no_meta || self.no_meta,
        }
    }

    pub fn surface(&self) -> Result<&str, CliError> {
        self.surface.as_deref().ok_or_else(|| CliError::Usage("--surface is required".into()))
    }

    pub fn c(&self) -> Result<f64, CliError> {
        let c = self.c.ok_or_else(|| CliError::Usage("--c is required".into()))?;
        if !c.is_finite() || c == 0.0 {
            return Err(CliError::Usage(format!("c must be finite and nonzero, got {c}")));
        }
        Ok(c)
    }

    pub fn tol(&self) -> Result<f64, CliError> {
        let tol = self.tol.unwrap_or(DEFAULT_TOL);
        if !(1e-14..=1e-6).contains(&tol) {
            return Err(CliError::Usage(format!("tol must lie in [1e-14, 1e-6], got {tol}")));
        }
        Ok(tol)
    }
}
