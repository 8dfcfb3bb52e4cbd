//! Configuration, field I/O, manifests, and experiment orchestration.

pub mod config;
pub mod io;
pub mod manifest;
pub mod runner;

pub use config::{default_out_dir, Command, RunConfig, ShapeChoice, Suite};
pub use io::{read_field, write_field};
pub use manifest::{hash_config, write_manifest, ManifestBuilder, RunManifest};
pub use runner::run;
