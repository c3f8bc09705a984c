//! `fracperiod.toml` settings.
//!
//! Every key is optional. Values are resolved as command-line flag, then
//! config file, then the built-in default.

use std::path::Path;

use anyhow::Context;
use fracperiod_core::fodesolve::SolverOptions;
use fracperiod_core::{Quadrature, SeriesOptions};
use serde::Deserialize;

/// Contents of a config file. Unknown keys are rejected.
#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub quadrature_tol: Option<f64>,
    pub series_tol: Option<f64>,
    pub ml_radius: Option<f64>,
    pub default_n: Option<usize>,
    pub corrector_sweeps: Option<u32>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn parse(text: &str) -> anyhow::Result<Self> {
        Ok(toml::from_str(text)?)
    }
}

/// Resolved settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Settings {
    pub quadrature_tol: f64,
    pub series_tol: f64,
    pub ml_radius: f64,
    pub default_n: usize,
    pub corrector_sweeps: u32,
}

impl Default for Settings {
    fn default() -> Self {
        let series = SeriesOptions::default();
        Settings {
            quadrature_tol: Quadrature::default().abs_tol,
            series_tol: series.tol,
            ml_radius: series.radius,
            default_n: 1000,
            corrector_sweeps: SolverOptions::default().corrector_sweeps,
        }
    }
}

impl Settings {
    /// Layers `file` and then `flags` over the defaults.
    pub fn resolve(file: &ConfigFile, flags: &ConfigFile) -> anyhow::Result<Self> {
        let d = Settings::default();
        let s = Settings {
            quadrature_tol: flags.quadrature_tol.or(file.quadrature_tol).unwrap_or(d.quadrature_tol),
            series_tol: flags.series_tol.or(file.series_tol).unwrap_or(d.series_tol),
            ml_radius: flags.ml_radius.or(file.ml_radius).unwrap_or(d.ml_radius),
            default_n: flags.default_n.or(file.default_n).unwrap_or(d.default_n),
            corrector_sweeps: flags
                .corrector_sweeps
                .or(file.corrector_sweeps)
                .unwrap_or(d.corrector_sweeps),
        };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> anyhow::Result<()> {
        for (key, v) in [
            ("quadrature_tol", self.quadrature_tol),
            ("series_tol", self.series_tol),
            ("ml_radius", self.ml_radius),
        ] {
            anyhow::ensure!(v > 0.0 && v.is_finite(), "{key} must be positive, got {v}");
        }
        anyhow::ensure!(self.default_n >= 2, "default_n must be at least 2");
        Ok(())
    }

    pub fn quadrature(&self) -> Quadrature {
        Quadrature::with_tol(self.quadrature_tol)
    }

    pub fn series(&self) -> SeriesOptions {
        SeriesOptions {
            tol: self.series_tol,
            radius: self.ml_radius,
            ..SeriesOptions::default()
        }
    }

    pub fn solver(&self) -> SolverOptions {
        SolverOptions {
            corrector_sweeps: self.corrector_sweeps,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_beat_file_beat_defaults() {
        let file = ConfigFile::parse("series_tol = 1e-12\ndefault_n = 64\n").unwrap();
        let flags = ConfigFile {
            default_n: Some(128),
            ..ConfigFile::default()
        };
        let s = Settings::resolve(&file, &flags).unwrap();
        assert_eq!(s.default_n, 128);
        assert_eq!(s.series_tol, 1e-12);
        assert_eq!(s.quadrature_tol, Settings::default().quadrature_tol);
    }

    #[test]
    fn unknown_keys_and_bad_values_are_rejected() {
        assert!(ConfigFile::parse("quad_tol = 1e-8").is_err());
        let file = ConfigFile::parse("quadrature_tol = -1.0").unwrap();
        assert!(Settings::resolve(&file, &ConfigFile::default()).is_err());
    }
}
