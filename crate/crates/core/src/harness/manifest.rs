//! Run manifests: what was run, what was produced, and whether it passed.
//! Two runs with identical config and thread count produce identical
//! numerics hashes; wall-clock time is recorded but never hashed.

use crate::error::Result;
use crate::harness::config::RunConfig;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckSummary {
    pub name: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FileEntry {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub config_hash: String,
    pub tool_version: String,
    pub threads: usize,
    pub wall_clock_ms: u128,
    pub checks: Vec<CheckSummary>,
    pub files: Vec<FileEntry>,
    /// Hash over the config hash and every emitted file hash, in emission
    /// order; the determinism contract compares this.
    pub numerics_hash: String,
}

impl RunManifest {
    pub fn gating_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn hash_bytes(bytes: &[u8]) -> String {
    hex(&Sha256::digest(bytes))
}

pub fn hash_config(cfg: &RunConfig) -> Result<String> {
    Ok(hash_bytes(serde_json::to_string(cfg)?.as_bytes()))
}

/// Collects emitted files and check results while a run executes.
pub struct ManifestBuilder {
    config_hash: String,
    threads: usize,
    started: std::time::Instant,
    checks: Vec<CheckSummary>,
    files: Vec<FileEntry>,
    out_dir: PathBuf,
}

impl ManifestBuilder {
    pub fn new(cfg: &RunConfig) -> Result<ManifestBuilder> {
        Ok(ManifestBuilder {
            config_hash: hash_config(cfg)?,
            threads: cfg.threads,
            started: std::time::Instant::now(),
            checks: Vec::new(),
            files: Vec::new(),
            out_dir: cfg.out_dir.clone(),
        })
    }

    pub fn out_dir(&self) -> &Path {
        &self.out_dir
    }

    pub fn record_check(&mut self, name: impl Into<String>, pass: bool) {
        self.checks.push(CheckSummary {
            name: name.into(),
            pass,
        });
    }

    /// Register an emitted file (hashes its bytes).
    pub fn record_file(&mut self, path: &Path) -> Result<()> {
        let bytes = std::fs::read(path)?;
        self.files.push(FileEntry {
            path: path.display().to_string(),
            sha256: hash_bytes(&bytes),
        });
        Ok(())
    }

    /// Write `text` into the run directory and register it.
    pub fn emit_text(&mut self, name: &str, text: &str) -> Result<PathBuf> {
        let path = self.out_dir.join(name);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        std::fs::write(&path, text)?;
        self.record_file(&path)?;
        Ok(path)
    }

    pub fn finish(self) -> RunManifest {
        let mut hasher = Sha256::new();
        hasher.update(self.config_hash.as_bytes());
        hasher.update([self.threads as u8]);
        for f in &self.files {
            hasher.update(f.sha256.as_bytes());
        }
        RunManifest {
            config_hash: self.config_hash,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            threads: self.threads,
            wall_clock_ms: self.started.elapsed().as_millis(),
            checks: self.checks,
            files: self.files,
            numerics_hash: hex(&hasher.finalize()),
        }
    }
}

/// Serialize the manifest next to the run outputs.
pub fn write_manifest(manifest: &RunManifest, out_dir: &Path) -> Result<PathBuf> {
    let path = out_dir.join("manifest.json");
    std::fs::create_dir_all(out_dir)?;
    std::fs::write(&path, serde_json::to_string_pretty(manifest)?)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_inputs_identical_hash() {
        let cfg = RunConfig::default();
        let a = hash_config(&cfg).unwrap();
        let b = hash_config(&cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn manifest_ignores_wall_clock_in_numerics_hash() {
        let dir = tempfile::tempdir().unwrap();
        let mk = |_label: &str| {
            let cfg = RunConfig {
                out_dir: dir.path().to_path_buf(),
                ..RunConfig::default()
            };
            let mut b = ManifestBuilder::new(&cfg).unwrap();
            b.emit_text("data.csv", "a,b\n1,2\n").unwrap();
            b.record_check("demo", true);
            std::thread::sleep(std::time::Duration::from_millis(2));
            b.finish()
        };
        let m1 = mk("one");
        let m2 = mk("two");
        assert_eq!(m1.numerics_hash, m2.numerics_hash);
        assert!(m1.gating_pass());
    }
}
