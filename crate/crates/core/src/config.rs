//! Run configuration for the verification front end.
//!
//! A config file is a JSON object with the keys `default_tolerance`,
//! `afe_alpha`, `A0`, `quad: {height, nodes_per_unit}` and `seed`; every
//! key is optional and falls back to the defaults below.  The front end
//! layers command-line flags on top of the loaded file.

use crate::archimedean::QuadratureSpec;
use crate::F;
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

/// Exponent bounding the growth of degree-3 coefficient data;
/// the orthonormalization constants are checked against
/// `10 * p^(DEG3 - 1/2)`.
pub const EIGENVALUE_BOUND_EXPONENT_DEG3: F = 5.0 / 14.0;

/// Degree-2 counterpart, entering through the maximal-parabolic data.
pub const EIGENVALUE_BOUND_EXPONENT_DEG2: F = 7.0 / 64.0;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("config file is not valid JSON: {0}")]
    Parse(#[from] serde_json::Error),
}

/// Contour-line discretization: total height of the truncated line and
/// node density per unit of height.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadConfig {
    pub height: F,
    pub nodes_per_unit: u32,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            height: 20.0,
            nodes_per_unit: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Config {
    /// Comparison tolerance for checks not bound to a tighter one.
    pub default_tolerance: F,
    /// Oscillation exponent of the approximate-cutoff weights.
    pub afe_alpha: F,
    /// Probe-grid radius of the standard test function.
    #[serde(rename = "A0")]
    pub a0: u32,
    pub quad: QuadConfig,
    /// Seed for the random local-data draws; fixed seed, fixed reports.
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            default_tolerance: 1e-8,
            afe_alpha: crate::geometric::DEFAULT_AFE_ALPHA,
            a0: 10,
            quad: QuadConfig::default(),
            seed: 42,
        }
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    pub fn save(&self, path: &Path) -> Result<(), ConfigError> {
        Ok(std::fs::write(path, serde_json::to_string_pretty(self)?)?)
    }

    /// Line quadrature at the given contour offset, with the configured
    /// height and node density and the default spectral grid.
    pub fn line_quad(&self, offset: F) -> QuadratureSpec {
        let nodes = (2.0 * self.quad.height * self.quad.nodes_per_unit as F).round() as usize + 1;
        QuadratureSpec::new(offset, self.quad.height, nodes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_sane() {
        let c = Config::default();
        assert_eq!(c.default_tolerance, 1e-8);
        assert_eq!(c.afe_alpha, 0.04);
        assert_eq!(c.a0, 10);
        assert_eq!(c.seed, 42);
        let q = c.line_quad(0.25);
        assert_eq!(q.nodes_per_line, 321);
        assert_eq!(q.height, 20.0);
    }

    #[test]
    fn full_file_round_trips() {
        let text = r#"{
            "default_tolerance": 1e-6,
            "afe_alpha": 0.02,
            "A0": 12,
            "quad": {"height": 24.0, "nodes_per_unit": 16},
            "seed": 7
        }"#;
        let c: Config = serde_json::from_str(text).unwrap();
        assert_eq!(c.a0, 12);
        assert_eq!(c.quad.nodes_per_unit, 16);
        let back: Config = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn partial_files_fall_back_to_defaults() {
        let c: Config = serde_json::from_str(r#"{"seed": 9}"#).unwrap();
        assert_eq!(c.seed, 9);
        assert_eq!(c.default_tolerance, 1e-8);
        assert_eq!(c.quad, QuadConfig::default());
    }

    #[test]
    fn exponent_constants_keep_their_values() {
        assert!((EIGENVALUE_BOUND_EXPONENT_DEG3 - 0.357142857).abs() < 1e-9);
        assert!((EIGENVALUE_BOUND_EXPONENT_DEG2 - 0.109375).abs() < 1e-12);
    }
}
