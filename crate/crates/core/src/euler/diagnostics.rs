//! Transport diagnostics: verify the growth and regularity estimates along a
//! computed trajectory and log the empirical constants.
//!
//! The streamline constant `c1` is dimensionless bookkeeping the theory only
//! asserts to exist: it is fitted once on a calibration run (the smallest
//! value making the streamline Hölder bound hold on sampled node pairs),
//! then frozen and reused. The companion constant is taken as
//! `c2 = max(1, e R)` with `R` the domain diameter. The Hölder exponent of
//! the flow map is `delta = exp(-c1 B T)`.

use crate::elliptic::ops::gradient_sup;
use crate::elliptic::study::EstimateCheck;
use crate::error::{Error, Result};
use crate::euler::picard::EulerTrajectory;
use crate::euler::transport::ForcingSeries;
use crate::funcspace::seminorm::{pairwise_seminorms, Cutoffs};
use crate::grid::Point;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Knobs for the diagnostics pass.
#[derive(Debug, Clone, Copy)]
pub struct DiagnosticsOptions {
    /// Cutoffs for all semi-norm evaluations; default per-field.
    pub cutoffs: Option<Cutoffs>,
    /// Frozen streamline constant; `None` fits it on this trajectory.
    pub c1: Option<f64>,
    /// At most this many states get the full semi-norm treatment.
    pub max_time_samples: usize,
    /// Node pairs sampled for the streamline Hölder check.
    pub pair_samples: usize,
    pub seed: u64,
    /// Empirical ceiling for `||grad v|| / |||zeta|||_*`; measured on the
    /// eigenmode calibration family across refinements, with headroom.
    pub grad_ratio_ceiling: f64,
}

impl Default for DiagnosticsOptions {
    fn default() -> Self {
        DiagnosticsOptions {
            cutoffs: None,
            c1: None,
            max_time_samples: 9,
            pair_samples: 10_000,
            seed: 2718,
            grad_ratio_ceiling: GRAD_VORT_RATIO_CEILING,
        }
    }
}

/// Calibrated on eigenmode data at grids 33..257: the observed ratio
/// stabilizes near 0.18; kept with ~4x headroom.
pub const GRAD_VORT_RATIO_CEILING: f64 = 0.75;

/// Semi-norm history entry at one output time.
#[derive(Debug, Clone, Copy)]
pub struct TimeSeminorms {
    pub t: f64,
    pub sup: f64,
    pub cstar: f64,
    pub bstar: f64,
    pub dstar: f64,
    pub grad_v: f64,
}

/// Everything the transport checks produce.
#[derive(Debug, Clone)]
pub struct EulerDiagnostics {
    pub per_time: Vec<TimeSeminorms>,
    pub checks: Vec<EstimateCheck>,
    pub fitted_c1: f64,
    pub delta: f64,
    pub c2: f64,
    pub jacobian_defect: f64,
    /// Fraction of sampled pairs satisfying the streamline Hölder bound.
    pub holder_fraction: f64,
}

/// Streamline bound for one pair at given constants.
#[inline]
fn holder_bound(c1: f64, c2: f64, b: f64, t: f64, dist: f64) -> f64 {
    let delta = (-c1 * b * t).exp();
    c2 * (1.0 + c1 * b) * dist.powf(delta)
}

fn sample_pairs(
    traj: &EulerTrajectory,
    count: usize,
    seed: u64,
) -> Vec<(Point, Point, Point, Point)> {
    let d = &traj.states[0].zeta.domain;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let (i1, j1) = (rng.random_range(0..d.nx), rng.random_range(0..d.ny));
        let (i2, j2) = (rng.random_range(0..d.nx), rng.random_range(0..d.ny));
        if (i1, j1) == (i2, j2) || !d.includes(i1, j1) || !d.includes(i2, j2) {
            continue;
        }
        let x = d.node(i1, j1);
        let y = d.node(i2, j2);
        let ux = Point::new(traj.flow_x[[i1, j1]], traj.flow_y[[i1, j1]]);
        let uy = Point::new(traj.flow_x[[i2, j2]], traj.flow_y[[i2, j2]]);
        out.push((x, y, ux, uy));
    }
    out
}

/// Fit the smallest `c1` on a log grid such that the streamline bound holds
/// for every calibration pair.
pub fn fit_c1(traj: &EulerTrajectory, pair_samples: usize, seed: u64) -> Result<f64> {
    let d = &traj.states[0].zeta.domain;
    let c2 = 1.0_f64.max(std::f64::consts::E * d.diameter);
    let (b, t) = (traj.b_bound, traj.t_final);
    let pairs = sample_pairs(traj, pair_samples, seed);
    let candidates: Vec<f64> = (0..=160)
        .map(|k| 1e-4 * 10f64.powf(k as f64 / 32.0))
        .collect();
    for &c1 in &candidates {
        let ok = pairs
            .iter()
            .all(|(x, y, ux, uy)| ux.dist(*uy) <= holder_bound(c1, c2, b, t, x.dist(*y)));
        if ok {
            return Ok(c1);
        }
    }
    Err(Error::InvariantViolation(
        "no streamline constant in the scan range satisfies the Hölder bound".into(),
    ))
}

/// Fraction of freshly sampled pairs satisfying the bound at frozen `c1`.
pub fn holder_pair_fraction(traj: &EulerTrajectory, c1: f64, pair_samples: usize, seed: u64) -> f64 {
    let d = &traj.states[0].zeta.domain;
    let c2 = 1.0_f64.max(std::f64::consts::E * d.diameter);
    let (b, t) = (traj.b_bound, traj.t_final);
    let pairs = sample_pairs(traj, pair_samples, seed);
    let ok = pairs
        .iter()
        .filter(|(x, y, ux, uy)| ux.dist(*uy) <= holder_bound(c1, c2, b, t, x.dist(*y)))
        .count();
    ok as f64 / pairs.len() as f64
}

/// Run the full diagnostics pass over a trajectory.
pub fn diagnostics(
    traj: &EulerTrajectory,
    phi: Option<&ForcingSeries>,
    opts: &DiagnosticsOptions,
) -> Result<EulerDiagnostics> {
    if traj.states.len() < 2 {
        return Err(Error::invalid(
            "diagnostics need a trajectory with at least two states",
        ));
    }
    let zeta0 = &traj.states[0].zeta;
    let cutoffs = opts.cutoffs.unwrap_or_else(|| Cutoffs::defaults_for(zeta0));
    let b = traj.b_bound;
    let d = &zeta0.domain;
    let c2 = 1.0_f64.max(std::f64::consts::E * d.diameter);
    let c1 = match opts.c1 {
        Some(v) => v,
        None => fit_c1(traj, opts.pair_samples, opts.seed)?,
    };
    let delta = (-c1 * b * traj.t_final).exp();

    // subsample states for the heavy semi-norm evaluations
    let n_states = traj.states.len();
    let take = opts.max_time_samples.max(2).min(n_states);
    let idx: Vec<usize> = (0..take)
        .map(|k| k * (n_states - 1) / (take - 1))
        .collect();

    let mut per_time = Vec::with_capacity(idx.len());
    for &k in &idx {
        let s = &traj.states[k];
        let pw = pairwise_seminorms(&s.zeta, cutoffs)?;
        per_time.push(TimeSeminorms {
            t: s.t,
            sup: s.zeta.sup_norm(),
            cstar: pw.cstar.value,
            bstar: pw.bstar.value,
            dstar: pw.dstar.value,
            grad_v: gradient_sup(&s.velocity),
        });
    }
    let base = per_time[0];

    let mut checks = Vec::new();

    // sup-norm transport bound with 1% slack
    for ts in &per_time {
        let rhs = base.sup + phi.map_or(0.0, |p| p.sup_norm_integral(ts.t));
        checks.push(check("sup-transport", d.nx, ts.sup, rhs, ts.sup <= rhs * 1.01));
    }

    // C* growth bound with the fitted constant
    for ts in &per_time {
        let forcing_cstar = match phi {
            None => 0.0,
            Some(p) => {
                // trapezoid of the forcing's own C* history
                let mut acc = 0.0;
                for w in p.times.windows(2) {
                    if w[0] >= ts.t {
                        break;
                    }
                    let hi = w[1].min(ts.t);
                    let ka = pairwise_seminorms(
                        &p.fields[p.times.iter().position(|&x| x == w[0]).unwrap()],
                        cutoffs,
                    )?
                    .cstar
                    .value;
                    let kb = pairwise_seminorms(
                        &p.fields[p.times.iter().position(|&x| x == w[1]).unwrap()],
                        cutoffs,
                    )?
                    .cstar
                    .value;
                    acc += 0.5 * (ka + kb) * (hi - w[0]);
                }
                acc
            }
        };
        let rhs = (c1 * b * ts.t).exp() * (3.0 * b + base.cstar + forcing_cstar);
        checks.push(check(
            "cstar-growth",
            d.nx,
            ts.cstar,
            rhs,
            ts.cstar <= rhs * (1.0 + 1e-9),
        ));
    }

    // B* transport bound; requires vanishing forcing
    if phi.is_none() {
        let rho_max = d.diameter;
        let big_k = c2 * (1.0 + c1 * b);
        let rho_prime = big_k * cutoffs.rho.powf(delta);
        let (eff_rho, extra) = if rho_prime > rho_max {
            (rho_max, 2.0 * base.sup * (rho_prime / rho_max).ln())
        } else {
            (rho_prime, 0.0)
        };
        let widened = pairwise_seminorms(zeta0, cutoffs.with_rho(eff_rho))?;
        let rhs = (widened.bstar.value + extra) / delta;
        for ts in &per_time {
            checks.push(check(
                "bstar-transport",
                d.nx,
                ts.bstar,
                rhs,
                ts.bstar <= rhs * (1.0 + 1e-9),
            ));
        }
    }

    // gradient-of-velocity bound through the D* norm
    for ts in &per_time {
        let rhs = opts.grad_ratio_ceiling * (ts.dstar + ts.sup);
        checks.push(check("grad-velocity", d.nx, ts.grad_v, rhs, ts.grad_v <= rhs));
    }

    // flow-map measure preservation and streamline Hölder bound
    let jac = traj.jacobian_defect();
    checks.push(check("jacobian", d.nx, jac, 0.02, jac <= 0.02));
    let frac = holder_pair_fraction(traj, c1, opts.pair_samples, opts.seed.wrapping_add(1));
    checks.push(check("streamline-holder", d.nx, 1.0 - frac, 0.01, frac >= 0.99));

    Ok(EulerDiagnostics {
        per_time,
        checks,
        fitted_c1: c1,
        delta,
        c2,
        jacobian_defect: jac,
        holder_fraction: frac,
    })
}

fn check(name: &str, grid: usize, lhs: f64, rhs: f64, pass: bool) -> EstimateCheck {
    EstimateCheck {
        name: name.into(),
        grid,
        lhs,
        rhs_seminorm: rhs,
        empirical_constant: if rhs > 0.0 { lhs / rhs } else { 0.0 },
        pass,
        skipped: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::picard::{euler_solve, EulerConfig};
    use crate::grid::{Domain, SampledField};
    use std::f64::consts::PI;

    fn eigenvortex(n: usize) -> SampledField {
        let d = Domain::unit_square(n).unwrap();
        SampledField::from_fn(d, |p| 2.0 * PI * PI * (PI * p.x).sin() * (PI * p.y).sin())
            .unwrap()
    }

    #[test]
    fn zero_trajectory_passes_everything() {
        let d = Domain::unit_square(33).unwrap();
        let zeta0 = SampledField::zeros(d);
        let traj = euler_solve(&zeta0, None, 0.25, &EulerConfig::default()).unwrap();
        let diag = diagnostics(&traj, None, &DiagnosticsOptions::default()).unwrap();
        assert!(diag.checks.iter().all(|c| c.pass), "{:#?}", diag.checks);
    }

    #[test]
    fn steady_vortex_histories_are_flat_and_passing() {
        let zeta0 = eigenvortex(65);
        let traj = euler_solve(&zeta0, None, 0.25, &EulerConfig::default()).unwrap();
        let diag = diagnostics(&traj, None, &DiagnosticsOptions::default()).unwrap();
        let c0 = diag.per_time[0].cstar;
        for ts in &diag.per_time {
            assert!((ts.cstar - c0).abs() <= 0.03 * c0, "cstar history moved");
        }
        assert!(diag.checks.iter().all(|c| c.pass), "{:#?}", diag.checks);
        assert!(diag.delta > 0.0 && diag.delta <= 1.0);
    }
}
