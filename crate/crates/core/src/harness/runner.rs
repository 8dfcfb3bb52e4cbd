//! Experiment orchestration: dispatch a validated config to the modules,
//! write fields/CSV/JSON under the output directory, and assemble the
//! manifest. A run's gating checks decide the process exit status.

use crate::elliptic::poisson::{poisson_residual, poisson_solve};
use crate::elliptic::stokes::{manufactured_errors, StokesSolver};
use crate::elliptic::study::{
    linear_fit, regularity_ratio_study, relative_spread, second_derivative_series, EstimateCheck,
    RatioKind,
};
use crate::elliptic::{c2_norm, max_normal_trace};
use crate::error::Result;
use crate::euler::diagnostics::{diagnostics, DiagnosticsOptions};
use crate::euler::picard::{euler_solve, EulerConfig};
use crate::funcspace::seminorm::{seminorm_cstar, seminorm_report, Cutoffs};
use crate::funcspace::witness::{make_witness, WitnessKind};
use crate::grid::{Domain, Point, SampledField, VectorField};
use crate::harness::config::{Command, RunConfig, ShapeChoice, Suite};
use crate::harness::io::write_field;
use crate::harness::manifest::{write_manifest, ManifestBuilder, RunManifest};

fn build_domain(cfg: &RunConfig, n: usize) -> Result<Domain> {
    match cfg.shape {
        ShapeChoice::Square => Domain::unit_square(n),
        ShapeChoice::Disk => Domain::disk(Point::new(0.5, 0.5), 0.5, n),
    }
}

fn cutoffs_for(cfg: &RunConfig, f: &SampledField) -> Cutoffs {
    let mut c = Cutoffs::defaults_for(f);
    if let Some(r_lo) = cfg.r_lo {
        c.r_lo = r_lo;
    }
    if let Some(rho) = cfg.rho {
        c.rho = rho;
    }
    c
}

/// Execute a validated config; returns the manifest (also written to disk).
pub fn run(cfg: &RunConfig) -> Result<RunManifest> {
    cfg.validate()?;
    std::fs::create_dir_all(&cfg.out_dir)?;
    let mut mb = ManifestBuilder::new(cfg)?;
    match cfg.command {
        Command::Seminorm => run_seminorm(cfg, &mut mb).map_err(|e| e.in_stage("seminorm"))?,
        Command::Poisson => run_poisson(cfg, &mut mb).map_err(|e| e.in_stage("poisson"))?,
        Command::Stokes => run_stokes(cfg, &mut mb).map_err(|e| e.in_stage("stokes"))?,
        Command::Euler => run_euler(cfg, &mut mb).map_err(|e| e.in_stage("euler"))?,
        Command::Study => run_study(cfg, &mut mb).map_err(|e| e.in_stage("study"))?,
    }
    let manifest = mb.finish();
    write_manifest(&manifest, &cfg.out_dir)?;
    Ok(manifest)
}

fn run_seminorm(cfg: &RunConfig, mb: &mut ManifestBuilder) -> Result<()> {
    let kind = WitnessKind::parse(&cfg.witness)?;
    let domain = build_domain(cfg, cfg.grid)?;
    let field = make_witness(&domain, kind)?;
    let cut = cutoffs_for(cfg, &field);
    let report = seminorm_report(&field, cut, &[0.5, 1.0], &[0.5, 2.0])?;
    let field_path = cfg.out_dir.join("witness.field");
    write_field(&field, &field_path)?;
    mb.record_file(&field_path)?;
    mb.emit_text("seminorms.json", &serde_json::to_string_pretty(&report)?)?;
    mb.record_check("seminorm-ordering", report.validate().is_ok());
    Ok(())
}

fn run_poisson(cfg: &RunConfig, mb: &mut ManifestBuilder) -> Result<()> {
    let kind = WitnessKind::parse(&cfg.witness)?;
    let is_eigen = matches!(kind, WitnessKind::EigenSine { .. });
    let mut rows = vec!["grid,residual,c2_norm,normal_trace,sup_error".to_string()];
    let mut errors = Vec::new();
    for &n in &cfg.grids {
        let domain = build_domain(cfg, n)?;
        let theta = make_witness(&domain, kind)?;
        let psi = poisson_solve(&theta)?;
        let residual = poisson_residual(&psi, &theta);
        let v = crate::elliptic::rot(&psi);
        let sup_err = if is_eigen {
            // analytic solution: the eigenmode scaled by 1/(2 pi^2)
            let scale = 1.0 / (2.0 * std::f64::consts::PI.powi(2));
            let exact = theta.map(|z| z * scale);
            let mut m: f64 = 0.0;
            for (a, b) in psi.values.iter().zip(exact.values.iter()) {
                m = m.max((a - b).abs());
            }
            errors.push(m);
            m
        } else {
            f64::NAN
        };
        rows.push(format!(
            "{n},{residual:.3e},{:.9e},{:.3e},{sup_err:.6e}",
            c2_norm(&psi),
            max_normal_trace(&v)
        ));
        mb.record_check(format!("poisson-residual-{n}"), residual <= 1e-12);
    }
    if is_eigen && errors.len() >= 2 {
        let k = errors.len();
        let order = (errors[k - 2] / errors[k - 1]).log2();
        rows.push(format!("order,{order:.4},,,"));
        mb.record_check("poisson-order", order >= 1.9);
    }
    mb.emit_text("poisson.csv", &(rows.join("\n") + "\n"))?;
    Ok(())
}

fn run_stokes(cfg: &RunConfig, mb: &mut ManifestBuilder) -> Result<()> {
    if cfg.witness == "mms" {
        let mut rows = vec!["grid,err_u,err_p".to_string()];
        let mut errs = Vec::new();
        for &n in &cfg.grids {
            let (eu, ep) = manufactured_errors(n)?;
            rows.push(format!("{n},{eu:.6e},{ep:.6e}"));
            errs.push((eu, ep));
        }
        let k = errs.len();
        let order_u = (errs[k - 2].0 / errs[k - 1].0).log2();
        let order_p = (errs[k - 2].1 / errs[k - 1].1).log2();
        rows.push(format!("order,{order_u:.4},{order_p:.4}"));
        mb.emit_text("stokes_mms.csv", &(rows.join("\n") + "\n"))?;
        mb.record_check("stokes-order-u", order_u >= 1.8);
        mb.record_check("stokes-order-p", order_p >= 1.8);
        return Ok(());
    }
    let kind = WitnessKind::parse(&cfg.witness)?;
    let mut rows = vec!["grid,div_sup,iterations".to_string()];
    for &n in &cfg.grids {
        let domain = build_domain(cfg, n)?;
        let w = make_witness(&domain, kind)?;
        let f = VectorField::from_fns(domain.clone(), |p| w.interp(p), |_| 0.0);
        let sol = StokesSolver::new(&domain)?.solve(&f)?;
        rows.push(format!("{n},{:.3e},{}", sol.div_sup, sol.iterations));
        mb.record_check(format!("stokes-div-{n}"), sol.div_sup <= 1e-10);
        if n == *cfg.grids.last().unwrap() {
            let u1 = SampledField::new(
                Domain::rectangle(
                    domain.x0,
                    domain.y0 + 0.5 * domain.dy,
                    domain.dx,
                    domain.dy,
                    domain.nx,
                    domain.ny - 1,
                )?,
                sol.velocity.v1.clone(),
            )?;
            let path = cfg.out_dir.join("stokes_u1.field");
            write_field(&u1, &path)?;
            mb.record_file(&path)?;
        }
    }
    mb.emit_text("stokes.csv", &(rows.join("\n") + "\n"))?;
    Ok(())
}

fn run_euler(cfg: &RunConfig, mb: &mut ManifestBuilder) -> Result<()> {
    let kind = WitnessKind::parse(&cfg.witness)?;
    let domain = build_domain(cfg, cfg.grid)?;
    let zeta0 = make_witness(&domain, kind)?;
    let euler_cfg = EulerConfig {
        window: cfg.window,
        tol: cfg.tol.max(1e-12),
        ..EulerConfig::default()
    };
    let traj = euler_solve(&zeta0, None, cfg.t_final, &euler_cfg)?;
    let opts = DiagnosticsOptions {
        cutoffs: Some(cutoffs_for(cfg, &zeta0)),
        ..DiagnosticsOptions::default()
    };
    let diag = diagnostics(&traj, None, &opts)?;

    let mut rows = vec!["time,sup,cstar,bstar,dstar,grad_v".to_string()];
    for ts in &diag.per_time {
        rows.push(format!(
            "{:.6},{:.9e},{:.9e},{:.9e},{:.9e},{:.9e}",
            ts.t, ts.sup, ts.cstar, ts.bstar, ts.dstar, ts.grad_v
        ));
    }
    mb.emit_text("euler_history.csv", &(rows.join("\n") + "\n"))?;

    let mut check_rows = vec![EstimateCheck::csv_header().to_string()];
    for c in &diag.checks {
        check_rows.push(c.csv_row());
        mb.record_check(format!("euler-{}-t{}", c.name, c.grid), c.pass);
    }
    mb.emit_text("euler_checks.csv", &(check_rows.join("\n") + "\n"))?;

    let summary = serde_json::json!({
        "b_bound": traj.b_bound,
        "t_final": traj.t_final,
        "fitted_c1": diag.fitted_c1,
        "delta": diag.delta,
        "c2": diag.c2,
        "jacobian_defect": diag.jacobian_defect,
        "holder_fraction": diag.holder_fraction,
        "grazed_fraction": traj.grazed_fraction,
        "windows": traj.windows.iter().map(|w| {
            serde_json::json!({
                "t_start": w.t_start,
                "t_end": w.t_end,
                "iterations": w.iterations,
                "halvings": w.halvings,
                "residuals": w.residuals,
            })
        }).collect::<Vec<_>>(),
        "times": traj.states.iter().map(|s| s.t).collect::<Vec<_>>(),
    });
    mb.emit_text("euler_run.json", &serde_json::to_string_pretty(&summary)?)?;

    let z0_path = cfg.out_dir.join("zeta_initial.field");
    write_field(&traj.initial().zeta, &z0_path)?;
    mb.record_file(&z0_path)?;
    let zt_path = cfg.out_dir.join("zeta_final.field");
    write_field(&traj.last().zeta, &zt_path)?;
    mb.record_file(&zt_path)?;

    mb.record_check("euler-grazing", traj.grazed_fraction < 1e-3);
    Ok(())
}

fn run_study(cfg: &RunConfig, mb: &mut ManifestBuilder) -> Result<()> {
    match cfg.suite.expect("validated") {
        Suite::Embeddings => {
            // cutoff-refinement behavior separating the witness classes
            let domain = build_domain(cfg, cfg.grid)?;
            let mut rows = vec!["witness,r_lo,cstar".to_string()];
            for (label, kind) in [
                ("holderlog2", WitnessKind::HolderLog { alpha: 2.0 }),
                ("holderlog05", WitnessKind::HolderLog { alpha: 0.5 }),
                ("log_reciprocal", WitnessKind::LogReciprocal),
            ] {
                let f = make_witness(&domain, kind)?;
                let base = Cutoffs::defaults_for(&f);
                let mut r_lo = 0.25;
                let mut values = Vec::new();
                for _ in 0..6 {
                    let v = seminorm_cstar(&f, base.with_r_lo(r_lo))?.value;
                    rows.push(format!("{label},{r_lo:.6},{v:.9e}"));
                    values.push(v);
                    r_lo *= 0.5;
                }
                let increments: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
                match label {
                    "holderlog2" => {
                        let stable = increments.last().unwrap() < &(0.5 * increments[0]);
                        mb.record_check("embeddings-holderlog2-stable", stable);
                    }
                    _ => {
                        let diverging = increments.iter().all(|&d| d >= 0.05);
                        mb.record_check(format!("embeddings-{label}-diverges"), diverging);
                    }
                }
            }
            mb.emit_text("embeddings.csv", &(rows.join("\n") + "\n"))?;
        }
        Suite::Regularity => {
            let checks = regularity_ratio_study(
                RatioKind::PoissonC2PerCstar,
                WitnessKind::EigenSine { amplitude: 1.0 },
                &cfg.grids,
                None,
            )?;
            let ratios: Vec<f64> = checks.iter().map(|c| c.empirical_constant).collect();
            mb.record_check("regularity-dini-ratio-stable", relative_spread(&ratios) < 0.10);

            let series = second_derivative_series(WitnessKind::LogReciprocal, &cfg.grids)?;
            let xs: Vec<f64> = series.iter().map(|(n, _)| ((n - 1) as f64).ln()).collect();
            let ys: Vec<f64> = series.iter().map(|(_, v)| *v).collect();
            let (slope, _, r2) = linear_fit(&xs, &ys);
            mb.record_check("regularity-non-dini-blowup", slope > 0.0 && r2 > 0.9);

            let mut rows = vec![EstimateCheck::csv_header().to_string()];
            for c in &checks {
                rows.push(c.csv_row());
            }
            for ((n, v), x) in series.iter().zip(&xs) {
                rows.push(format!("d2-psi-log-reciprocal,{n},{v:.9e},{x:.6},{slope:.6},true"));
            }
            mb.emit_text("regularity.csv", &(rows.join("\n") + "\n"))?;
        }
        Suite::Transport => {
            let domain = build_domain(cfg, cfg.grid)?;
            let zeta0 = make_witness(&domain, WitnessKind::BumpCascade { depth: 3 })?;
            let traj = euler_solve(
                &zeta0,
                None,
                cfg.t_final,
                &EulerConfig {
                    window: cfg.window,
                    ..EulerConfig::default()
                },
            )?;
            let diag = diagnostics(&traj, None, &DiagnosticsOptions::default())?;
            let mut rows = vec![EstimateCheck::csv_header().to_string()];
            for c in &diag.checks {
                rows.push(c.csv_row());
                mb.record_check(format!("transport-{}-{}", c.name, rows.len()), c.pass);
            }
            mb.emit_text("transport.csv", &(rows.join("\n") + "\n"))?;
        }
    }
    Ok(())
}
