//! Run configuration: JSON schema, defaults, command-line overrides and validation.

use std::path::Path;

use gausswig::{Layout, SVariant, TraceClassSpectrum};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub points: usize,
    pub radius_sigmas: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Closed-form and quadrature identities.
    pub closed_form: f64,
    /// Identities that run through grid pipelines (FFTs, shifts, reweighting).
    pub pipeline: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub spectrum: Vec<f64>,
    pub truncation: usize,
    pub grid: GridConfig,
    pub tolerances: Tolerances,
    pub seed: u64,
    pub s_variant: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            spectrum: vec![1.0, 0.5, 0.25],
            truncation: 2,
            grid: GridConfig {
                points: 64,
                radius_sigmas: 10.0,
            },
            tolerances: Tolerances {
                closed_form: 1e-8,
                pipeline: 1e-6,
            },
            seed: 0,
            s_variant: "corrected".into(),
        }
    }
}

/// Largest axis count for dense phase-space work.
pub const MAX_DENSE_LEVEL: usize = 3;

impl RunConfig {
    /// Reads a config file; absent fields take their defaults.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.truncation > self.spectrum.len() {
            return bad(format!(
                "truncation {} exceeds the spectrum length {}",
                self.truncation,
                self.spectrum.len()
            ));
        }
        if self.spectrum.is_empty() {
            return bad("spectrum must not be empty".into());
        }
        self.spectrum()?;
        for (name, v) in [
            ("closed_form", self.tolerances.closed_form),
            ("pipeline", self.tolerances.pipeline),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return bad(format!("tolerance {name} must be positive, got {v}"));
            }
        }
        let p = self.grid.points;
        if p < 8 || !p.is_power_of_two() {
            return bad(format!("grid.points must be a power of two ≥ 8, got {p}"));
        }
        if !(self.grid.radius_sigmas.is_finite() && self.grid.radius_sigmas > 0.0) {
            return bad(format!("grid.radius_sigmas must be positive, got {}", self.grid.radius_sigmas));
        }
        self.variant()?;
        Ok(())
    }

    pub fn spectrum(&self) -> Result<TraceClassSpectrum, CliError> {
        TraceClassSpectrum::new(self.spectrum.clone()).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn variant(&self) -> Result<SVariant, CliError> {
        self.s_variant.parse().map_err(|e: gausswig::Error| CliError::Config(e.to_string()))
    }

    /// The configured layout, used for one axis pair.
    pub fn layout(&self) -> Layout {
        Layout {
            points: self.grid.points,
            radius_sigmas: self.grid.radius_sigmas,
        }
    }

    /// The layout for dense work on `m` axis pairs. Kernels and symbols have
    /// `points^{2m}` nodes, so above one pair the grid is capped at
    /// [`DENSE_POINTS`] points over at most [`DENSE_RADIUS`] standard deviations.
    pub fn dense_layout(&self, m: usize) -> Layout {
        let base = self.layout();
        if m >= 2 && base.points > DENSE_POINTS {
            Layout {
                points: DENSE_POINTS,
                radius_sigmas: base.radius_sigmas.min(DENSE_RADIUS),
            }
        } else {
            base
        }
    }
}

/// Point cap for layouts above one axis pair.
pub const DENSE_POINTS: usize = 32;
/// Radius cap for layouts above one axis pair; keeps the spacing at σ/2.
pub const DENSE_RADIUS: f64 = 8.0;
