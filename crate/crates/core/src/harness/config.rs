//! Run configuration: defaults, validation, and (de)serialization.
//! A config file is optional JSON; CLI flags override file values.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Which experiment the binary runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Seminorm,
    Poisson,
    Stokes,
    Euler,
    Study,
}

/// Canned experiment suites for `study`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Embeddings,
    Regularity,
    Transport,
}

/// Domain shape selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeChoice {
    Square,
    Disk,
}

/// Full description of one reproducible run. Unknown keys in a config file
/// are rejected by name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub command: Command,
    /// Nodes per side; sine-transform solvers need a power of two plus one.
    pub grid: usize,
    /// Grid list for refinement studies (defaults to 33/65/129).
    pub grids: Vec<usize>,
    pub shape: ShapeChoice,
    /// Witness selector, e.g. `eigen_sine:19.739`, `holder:0.5`,
    /// `bump_cascade:3`, `log_reciprocal`, or `mms` for the manufactured
    /// Stokes study.
    pub witness: String,
    /// Lower Dini cutoff; `None` means `2 * spacing`.
    pub r_lo: Option<f64>,
    /// Upper Dini cutoff; `None` means `diameter / 2`.
    pub rho: Option<f64>,
    /// Solver tolerance (Poisson residual gate, Stokes divergence target,
    /// Euler Picard residual scale).
    pub tol: f64,
    pub t_final: f64,
    pub window: f64,
    pub out_dir: PathBuf,
    /// Recorded in the manifest; kernels are sequential and deterministic
    /// for any value.
    pub threads: usize,
    pub suite: Option<Suite>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: Command::Seminorm,
            grid: 129,
            grids: vec![33, 65, 129],
            shape: ShapeChoice::Square,
            witness: "eigen_sine".into(),
            r_lo: None,
            rho: None,
            tol: 1e-10,
            t_final: 1.0,
            window: 0.25,
            out_dir: default_out_dir(),
            threads: 1,
            suite: None,
        }
    }
}

/// Only environment knob: default output directory.
pub fn default_out_dir() -> PathBuf {
    std::env::var_os("DINILAB_OUT")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn is_pow2_plus_one(n: usize) -> bool {
    n >= 3 && (n - 1) & (n - 2) == 0
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::invalid("field `tol` must be positive"));
        }
        if self.grid < 5 {
            return Err(Error::invalid("field `grid` must be at least 5"));
        }
        if !(self.t_final > 0.0) {
            return Err(Error::invalid("field `t_final` must be positive"));
        }
        if !(self.window > 0.0) {
            return Err(Error::invalid("field `window` must be positive"));
        }
        if self.threads == 0 {
            return Err(Error::invalid("field `threads` must be at least 1"));
        }
        let needs_sine = matches!(
            self.command,
            Command::Poisson | Command::Stokes | Command::Euler
        );
        if needs_sine {
            let mut all = self.grids.clone();
            all.push(self.grid);
            for n in all {
                if !is_pow2_plus_one(n) {
                    return Err(Error::invalid(format!(
                        "grid {n} violates the sine-transform constraint: \
                         solver grids must be a power of two plus one"
                    )));
                }
            }
        }
        if self.command == Command::Study && self.suite.is_none() {
            return Err(Error::invalid("field `suite` is required for `study`"));
        }
        Ok(())
    }

    /// Load a JSON config file; unknown keys are rejected by name.
    pub fn from_file(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)?;
        let cfg: RunConfig = serde_json::from_str(&text)
            .map_err(|e| Error::invalid(format!("config {}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_pass_validation() {
        let cfg = RunConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.grid, 129);
        assert!((cfg.tol - 1e-10).abs() < 1e-25);
    }

    #[test]
    fn round_trip_is_identity() {
        let mut cfg = RunConfig::default();
        cfg.command = Command::Euler;
        cfg.witness = "bump_cascade:3".into();
        cfg.r_lo = Some(0.015625);
        let text = cfg.to_json().unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn non_pow2_grid_rejected_for_solvers() {
        let cfg = RunConfig {
            command: Command::Poisson,
            grid: 100,
            ..RunConfig::default()
        };
        let err = cfg.validate().unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("sine-transform"), "message: {msg}");
        assert!(msg.contains("100"), "message: {msg}");
    }

    #[test]
    fn unknown_key_is_named() {
        let text = r#"{ "command": "seminorm", "no_such_key": 1 }"#;
        let err = serde_json::from_str::<RunConfig>(text).unwrap_err();
        assert!(err.to_string().contains("no_such_key"));
    }

    #[test]
    fn empty_config_gives_defaults() {
        let cfg: RunConfig = serde_json::from_str("{}").unwrap();
        assert_eq!(cfg, RunConfig::default());
    }
}
