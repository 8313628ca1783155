//! Run configuration: defaults, a flat `key = value` file, and command-line
//! overrides, merged in that order.
//!
//! The file format is deliberately minimal so that a report can be
//! reproduced from its config verbatim: one `key = value` pair per line,
//! blank lines and `#`-prefixed comment lines ignored, unknown or repeated
//! keys rejected.  There is no environment-variable configuration.

use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;

use clap::{Args, ValueEnum};

/// Artifact serialization format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

/// Command-line overrides for every config key.  All optional: unset flags
/// leave the file value (or the default) in place.
#[derive(Debug, Args)]
pub struct Overrides {
    /// Outer wall radius b > 1 (the inner wall is fixed at 1).
    #[arg(long, global = true)]
    pub b: Option<f64>,

    /// Ambient dimension N (3, 4, or 5).
    #[arg(long, global = true, value_name = "N")]
    pub dim: Option<u32>,

    /// Target relative accuracy of the underlying function evaluations.
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,

    /// Absolute floor below which residuals are considered zero.
    #[arg(long, global = true)]
    pub abs_floor: Option<f64>,

    /// Angular modes kept in the cylinder series (n = 0..=n_max).
    #[arg(long, global = true)]
    pub n_max: Option<u32>,

    /// Radial eigenvalues kept per angular mode.
    #[arg(long, global = true)]
    pub m_max: Option<u32>,

    /// Largest acceptable truncation-tail estimate for a field value.
    #[arg(long, global = true)]
    pub tail_tol: Option<f64>,

    /// Smallest |z - z_pole| at which the cylinder series is evaluated.
    #[arg(long, global = true)]
    pub min_axial_gap: Option<f64>,

    /// Convergence radius parameter for `extend` (must exceed b;
    /// default 1.05*b).
    #[arg(long, global = true)]
    pub b_prime: Option<f64>,

    /// Artifact format; each command has a natural default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,

    /// Write the artifact to this file instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

/// Fully resolved configuration for one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub b: f64,
    pub dim: u32,
    pub rel_tol: f64,
    pub abs_floor: f64,
    pub n_max: u32,
    pub m_max: u32,
    pub tail_tol: f64,
    pub min_axial_gap: f64,
    pub b_prime: Option<f64>,
    pub format: Option<OutputFormat>,
    pub path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            b: 2.0,
            dim: 3,
            rel_tol: 1e-12,
            abs_floor: 1e-13,
            n_max: 40,
            m_max: 60,
            tail_tol: 1e-6,
            min_axial_gap: 1e-2,
            b_prime: None,
            format: None,
            path: None,
        }
    }
}

impl RunConfig {
    /// Defaults, then the config file (if any), then the flag overrides.
    pub fn resolve(file: Option<&str>, over: &Overrides) -> Result<RunConfig, String> {
        let mut cfg = RunConfig::default();
        if let Some(text) = file {
            cfg.apply_file(text)?;
        }
        cfg.apply_overrides(over);
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply_file(&mut self, text: &str) -> Result<(), String> {
        let mut seen = BTreeSet::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("config line {}: expected `key = value`", lineno + 1))?;
            let key = key.trim();
            let value = value.trim();
            if !seen.insert(key.to_owned()) {
                return Err(format!("config line {}: repeated key `{key}`", lineno + 1));
            }
            self.apply_pair(key, value)
                .map_err(|e| format!("config line {}: {e}", lineno + 1))?;
        }
        Ok(())
    }

    fn apply_pair(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
            value
                .parse()
                .map_err(|_| format!("key `{key}`: cannot parse `{value}`"))
        }
        match key {
            "b" => self.b = num(key, value)?,
            "dim" => self.dim = num(key, value)?,
            "rel_tol" => self.rel_tol = num(key, value)?,
            "abs_floor" => self.abs_floor = num(key, value)?,
            "n_max" => self.n_max = num(key, value)?,
            "m_max" => self.m_max = num(key, value)?,
            "tail_tol" => self.tail_tol = num(key, value)?,
            "min_axial_gap" => self.min_axial_gap = num(key, value)?,
            "b_prime" => self.b_prime = Some(num(key, value)?),
            "format" => {
                self.format = Some(match value {
                    "csv" => OutputFormat::Csv,
                    "json" => OutputFormat::Json,
                    other => return Err(format!("key `format`: unknown format `{other}`")),
                })
            }
            "path" => self.path = Some(PathBuf::from(value)),
            other => return Err(format!("unknown config key `{other}`")),
        }
        Ok(())
    }

    fn apply_overrides(&mut self, over: &Overrides) {
        if let Some(v) = over.b {
            self.b = v;
        }
        if let Some(v) = over.dim {
            self.dim = v;
        }
        if let Some(v) = over.rel_tol {
            self.rel_tol = v;
        }
        if let Some(v) = over.abs_floor {
            self.abs_floor = v;
        }
        if let Some(v) = over.n_max {
            self.n_max = v;
        }
        if let Some(v) = over.m_max {
            self.m_max = v;
        }
        if let Some(v) = over.tail_tol {
            self.tail_tol = v;
        }
        if let Some(v) = over.min_axial_gap {
            self.min_axial_gap = v;
        }
        if let Some(v) = over.b_prime {
            self.b_prime = Some(v);
        }
        if let Some(v) = over.format {
            self.format = Some(v);
        }
        if let Some(v) = &over.output {
            self.path = Some(v.clone());
        }
    }

    fn validate(&self) -> Result<(), String> {
        if !(self.b > 1.0) || !self.b.is_finite() {
            return Err("b must be a finite number above 1".into());
        }
        if !(3..=5).contains(&self.dim) {
            return Err("dim must be 3, 4, or 5".into());
        }
        if !(self.rel_tol > 0.0) || !self.rel_tol.is_finite() {
            return Err("rel_tol must be a finite positive number".into());
        }
        if !(self.abs_floor > 0.0) || !self.abs_floor.is_finite() {
            return Err("abs_floor must be a finite positive number".into());
        }
        if self.n_max == 0 {
            return Err("n_max must be at least 1".into());
        }
        if self.m_max == 0 {
            return Err("m_max must be at least 1".into());
        }
        if !(self.tail_tol > 0.0) || !self.tail_tol.is_finite() {
            return Err("tail_tol must be a finite positive number".into());
        }
        if !(self.min_axial_gap > 0.0) || !self.min_axial_gap.is_finite() {
            return Err("min_axial_gap must be a finite positive number".into());
        }
        if let Some(bp) = self.b_prime {
            if !(bp > self.b) || !bp.is_finite() {
                return Err("b_prime must be a finite number above b".into());
            }
        }
        Ok(())
    }

    /// The `extend` convergence parameter: configured value or 1.05*b.
    pub fn resolved_b_prime(&self) -> f64 {
        self.b_prime.unwrap_or(1.05 * self.b)
    }

    /// Output format to use, given a command's natural default.
    pub fn format_or(&self, default: OutputFormat) -> OutputFormat {
        self.format.unwrap_or(default)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_overrides() -> Overrides {
        Overrides {
            b: None,
            dim: None,
            rel_tol: None,
            abs_floor: None,
            n_max: None,
            m_max: None,
            tail_tol: None,
            min_axial_gap: None,
            b_prime: None,
            format: None,
            output: None,
        }
    }

    #[test]
    fn file_values_override_defaults_and_flags_override_the_file() {
        let file = "b = 3.5\nn_max = 7\nformat = json\n# comment\n\ntail_tol = 1e-4\n";
        let mut over = no_overrides();
        over.n_max = Some(9);
        let cfg = RunConfig::resolve(Some(file), &over).unwrap();
        assert_eq!(cfg.b, 3.5);
        assert_eq!(cfg.n_max, 9);
        assert_eq!(cfg.tail_tol, 1e-4);
        assert_eq!(cfg.format, Some(OutputFormat::Json));
        assert_eq!(cfg.dim, 3);
    }

    #[test]
    fn unknown_and_repeated_keys_are_rejected() {
        let err = RunConfig::resolve(Some("bogus = 1\n"), &no_overrides()).unwrap_err();
        assert!(err.contains("unknown config key `bogus`"), "{err}");
        let err = RunConfig::resolve(Some("b = 2\nb = 3\n"), &no_overrides()).unwrap_err();
        assert!(err.contains("repeated key `b`"), "{err}");
    }

    #[test]
    fn validation_rejects_out_of_range_values() {
        let mut over = no_overrides();
        over.dim = Some(6);
        assert!(RunConfig::resolve(None, &over).is_err());
        let mut over = no_overrides();
        over.b = Some(1.0);
        assert!(RunConfig::resolve(None, &over).is_err());
        let mut over = no_overrides();
        over.b_prime = Some(1.5);
        assert!(RunConfig::resolve(None, &over).is_err());
    }

    #[test]
    fn b_prime_defaults_to_a_nudge_above_b() {
        let cfg = RunConfig::resolve(None, &no_overrides()).unwrap();
        assert_eq!(cfg.resolved_b_prime(), 2.1);
    }
}
