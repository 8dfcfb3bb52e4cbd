//! `dinilab` — semi-norm laboratory and planar-flow model problems.
//!
//! One subcommand per experiment; an optional JSON config file provides the
//! base settings and flags override it. The process exits nonzero when any
//! gating check of the run fails.

use clap::{Args, Parser, Subcommand};
use dinilab::harness::{run, Command, RunConfig, Suite};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "dinilab", version, about = "Dini-space semi-norms, elliptic model problems, and 2-D Euler transport")]
struct Cli {
    /// JSON config file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (default: $DINILAB_OUT or ./out).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Recorded thread count (kernels are sequential and deterministic).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Args)]
struct GridArgs {
    /// Nodes per side.
    #[arg(long)]
    grid: Option<usize>,
}

#[derive(Subcommand)]
enum CliCommand {
    /// Compute the semi-norm report of a witness field.
    Seminorm {
        /// Witness kind, e.g. eigen_sine, holder:0.5, bump_cascade:3.
        #[arg(long)]
        witness: Option<String>,
        #[command(flatten)]
        grid: GridArgs,
        /// Lower Dini cutoff.
        #[arg(long)]
        r_lo: Option<f64>,
        /// Upper Dini cutoff.
        #[arg(long)]
        rho: Option<f64>,
        /// Disk-mask domain instead of the unit square.
        #[arg(long)]
        disk: bool,
    },
    /// Poisson refinement study.
    Poisson {
        /// Data witness kind.
        #[arg(long)]
        data: Option<String>,
        /// Comma-separated grid list.
        #[arg(long, value_delimiter = ',')]
        grids: Option<Vec<usize>>,
    },
    /// Stokes refinement study (`--data mms` runs the manufactured case).
    Stokes {
        #[arg(long)]
        data: Option<String>,
        #[arg(long, value_delimiter = ',')]
        grids: Option<Vec<usize>>,
    },
    /// Euler transport run with diagnostics.
    Euler {
        /// Initial vorticity witness kind.
        #[arg(long)]
        ic: Option<String>,
        #[arg(long)]
        t_final: Option<f64>,
        /// Picard window length.
        #[arg(long)]
        window: Option<f64>,
        /// Picard residual tolerance.
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Canned experiment suites.
    Study {
        /// embeddings | regularity | transport
        #[arg(long)]
        suite: String,
        #[command(flatten)]
        grid: GridArgs,
    },
}

fn build_config(cli: &Cli) -> Result<RunConfig, dinilab::Error> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    if let Some(out) = &cli.out {
        cfg.out_dir = out.clone();
    }
    if let Some(threads) = cli.threads {
        cfg.threads = threads;
    }
    match &cli.command {
        CliCommand::Seminorm {
            witness,
            grid,
            r_lo,
            rho,
            disk,
        } => {
            cfg.command = Command::Seminorm;
            if let Some(w) = witness {
                cfg.witness = w.clone();
            }
            if let Some(g) = grid.grid {
                cfg.grid = g;
            }
            if r_lo.is_some() {
                cfg.r_lo = *r_lo;
            }
            if rho.is_some() {
                cfg.rho = *rho;
            }
            if *disk {
                cfg.shape = dinilab::harness::ShapeChoice::Disk;
            }
        }
        CliCommand::Poisson { data, grids } => {
            cfg.command = Command::Poisson;
            if let Some(d) = data {
                cfg.witness = d.clone();
            }
            if let Some(g) = grids {
                cfg.grids = g.clone();
            }
        }
        CliCommand::Stokes { data, grids } => {
            cfg.command = Command::Stokes;
            if let Some(d) = data {
                cfg.witness = d.clone();
            }
            if let Some(g) = grids {
                cfg.grids = g.clone();
            }
        }
        CliCommand::Euler {
            ic,
            t_final,
            window,
            tol,
            grid,
        } => {
            cfg.command = Command::Euler;
            if let Some(w) = ic {
                cfg.witness = w.clone();
            }
            if let Some(t) = t_final {
                cfg.t_final = *t;
            }
            if let Some(w) = window {
                cfg.window = *w;
            }
            if let Some(t) = tol {
                cfg.tol = *t;
            }
            if let Some(g) = grid.grid {
                cfg.grid = g;
            }
        }
        CliCommand::Study { suite, grid } => {
            cfg.command = Command::Study;
            cfg.suite = Some(match suite.as_str() {
                "embeddings" => Suite::Embeddings,
                "regularity" => Suite::Regularity,
                "transport" => Suite::Transport,
                other => {
                    return Err(dinilab::Error::InvalidArgument(format!(
                        "unknown suite {other:?} (expected embeddings, regularity, transport)"
                    )))
                }
            });
            if let Some(g) = grid.grid {
                cfg.grid = g;
            }
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match build_config(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match run(&cfg) {
        Ok(manifest) => {
            for c in &manifest.checks {
                println!("{} {}", if c.pass { "PASS" } else { "FAIL" }, c.name);
            }
            println!(
                "manifest: {} ({} files, numerics {})",
                cfg.out_dir.join("manifest.json").display(),
                manifest.files.len(),
                &manifest.numerics_hash[..12]
            );
            if manifest.gating_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
