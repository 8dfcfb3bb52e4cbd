//! Discrete vector calculus on the node/edge/cell complex, plus the discrete
//! norms used by the regularity checks.
//!
//! The stencils are the compatible staggered ones: `rot` maps node scalars to
//! edge vectors, `div` maps edge vectors to cell scalars, `curl` maps edge
//! vectors back to node scalars. With these choices `div(rot psi) = 0` holds
//! identically and `curl(rot psi)` equals the compact 5-point `-lap(psi)`,
//! both to roundoff only.

use crate::elliptic::poisson::PoissonSolver;
use crate::error::Result;
use crate::grid::{SampledField, VectorField};
use ndarray::Array2;

/// Counter-clockwise rotation of the gradient: `v = (d2 psi, -d1 psi)`,
/// sampled on edge midpoints.
pub fn rot(psi: &SampledField) -> VectorField {
    let d = &psi.domain;
    let s = &psi.values;
    let v1 = Array2::from_shape_fn((d.nx, d.ny - 1), |(i, j)| {
        (s[[i, j + 1]] - s[[i, j]]) / d.dy
    });
    let v2 = Array2::from_shape_fn((d.nx - 1, d.ny), |(i, j)| {
        -(s[[i + 1, j]] - s[[i, j]]) / d.dx
    });
    VectorField {
        domain: d.clone(),
        v1,
        v2,
    }
}

/// Discrete divergence at cell centers, shape `(nx-1, ny-1)`.
pub fn divergence(v: &VectorField) -> Array2<f64> {
    let d = &v.domain;
    Array2::from_shape_fn((d.nx - 1, d.ny - 1), |(i, j)| {
        (v.v1[[i + 1, j]] - v.v1[[i, j]]) / d.dx + (v.v2[[i, j + 1]] - v.v2[[i, j]]) / d.dy
    })
}

/// Discrete scalar curl at nodes: `d1 v2 - d2 v1`. Boundary nodes are set to
/// zero (the identity checks are interior statements).
pub fn curl(v: &VectorField) -> SampledField {
    let d = &v.domain;
    let mut out = Array2::zeros((d.nx, d.ny));
    for i in 1..d.nx - 1 {
        for j in 1..d.ny - 1 {
            out[[i, j]] = (v.v2[[i, j]] - v.v2[[i - 1, j]]) / d.dx
                - (v.v1[[i, j]] - v.v1[[i, j - 1]]) / d.dy;
        }
    }
    SampledField {
        domain: d.clone(),
        values: out,
    }
}

/// Velocity with `curl v = theta`, `div v = 0`, `v . n = 0`: the rotation of
/// the stream function of `theta`.
pub fn velocity_from_vorticity(theta: &SampledField) -> Result<VectorField> {
    let psi = PoissonSolver::new(&theta.domain)?.solve(theta)?;
    Ok(rot(&psi))
}

/// Same, but reusing a prepared solver (the Euler loop calls this per step).
pub fn velocity_from_vorticity_with(
    solver: &mut PoissonSolver,
    theta: &SampledField,
) -> Result<(SampledField, VectorField)> {
    let psi = solver.solve(theta)?;
    let v = rot(&psi);
    Ok((psi, v))
}

/// Largest normal velocity on the boundary of the rectangle. For `rot psi`
/// with `psi = 0` on the boundary this is exactly zero.
pub fn max_normal_trace(v: &VectorField) -> f64 {
    let d = &v.domain;
    let mut m: f64 = 0.0;
    for j in 0..d.ny - 1 {
        m = m.max(v.v1[[0, j]].abs());
        m = m.max(v.v1[[d.nx - 1, j]].abs());
    }
    for i in 0..d.nx - 1 {
        m = m.max(v.v2[[i, 0]].abs());
        m = m.max(v.v2[[i, d.ny - 1]].abs());
    }
    m
}

/// Sup of all first-difference quotients of both staggered components.
pub fn gradient_sup(v: &VectorField) -> f64 {
    let d = &v.domain;
    let mut m: f64 = 0.0;
    for comp in [&v.v1, &v.v2] {
        let (ni, nj) = comp.dim();
        for i in 0..ni {
            for j in 0..nj {
                if i + 1 < ni {
                    m = m.max(((comp[[i + 1, j]] - comp[[i, j]]) / d.dx).abs());
                }
                if j + 1 < nj {
                    m = m.max(((comp[[i, j + 1]] - comp[[i, j]]) / d.dy).abs());
                }
            }
        }
    }
    m
}

/// Sup of all second-difference quotients of both staggered components
/// (discrete Lipschitz seminorm of the gradient).
pub fn second_difference_sup(v: &VectorField) -> f64 {
    let d = &v.domain;
    let mut m: f64 = 0.0;
    for comp in [&v.v1, &v.v2] {
        let (ni, nj) = comp.dim();
        for i in 0..ni {
            for j in 0..nj {
                if i + 2 < ni {
                    let s = (comp[[i + 2, j]] - 2.0 * comp[[i + 1, j]] + comp[[i, j]])
                        / (d.dx * d.dx);
                    m = m.max(s.abs());
                }
                if j + 2 < nj {
                    let s = (comp[[i, j + 2]] - 2.0 * comp[[i, j + 1]] + comp[[i, j]])
                        / (d.dy * d.dy);
                    m = m.max(s.abs());
                }
                if i + 1 < ni && j + 1 < nj {
                    let s = (comp[[i + 1, j + 1]] - comp[[i + 1, j]] - comp[[i, j + 1]]
                        + comp[[i, j]])
                        / (d.dx * d.dy);
                    m = m.max(s.abs());
                }
            }
        }
    }
    m
}

/// Discrete C^{1,1} norm of a staggered field: max of sup, gradient sup and
/// second-difference sup.
pub fn mac_c11_norm(v: &VectorField) -> f64 {
    v.sup_norm().max(gradient_sup(v)).max(second_difference_sup(v))
}

/// Offset window for the discrete Lipschitz seminorm; wide enough to see the
/// steepest lattice direction of a linear field to O(h).
const LIPSCHITZ_WINDOW: isize = 4;

/// Discrete Lipschitz seminorm: max of `|g(x)-g(y)| / |x-y|` over node pairs
/// with offsets up to [`LIPSCHITZ_WINDOW`] in each direction.
pub fn lipschitz_seminorm(g: &SampledField) -> f64 {
    let d = &g.domain;
    let mut m: f64 = 0.0;
    for i in 0..d.nx {
        for j in 0..d.ny {
            if !d.includes(i, j) {
                continue;
            }
            for di in 0..=LIPSCHITZ_WINDOW {
                let jlo = if di == 0 { 1 } else { -LIPSCHITZ_WINDOW };
                for dj in jlo..=LIPSCHITZ_WINDOW {
                    let (ii, jj) = (i as isize + di, j as isize + dj);
                    if ii < 0 || jj < 0 || ii >= d.nx as isize || jj >= d.ny as isize {
                        continue;
                    }
                    let (ii, jj) = (ii as usize, jj as usize);
                    if !d.includes(ii, jj) {
                        continue;
                    }
                    let dist = ((di as f64 * d.dx).powi(2) + (dj as f64 * d.dy).powi(2)).sqrt();
                    m = m.max((g.values[[ii, jj]] - g.values[[i, j]]).abs() / dist);
                }
            }
        }
    }
    m
}

/// Discrete C^{0,1} norm: max of the sup norm and the Lipschitz seminorm.
pub fn c01_norm(g: &SampledField) -> f64 {
    g.sup_norm().max(lipschitz_seminorm(g))
}

/// Discrete C^2 norm of a node field: max over derivative orders 0..2 of the
/// sup of the difference quotients (first derivatives centered, second
/// derivatives compact, mixed centered; interior nodes).
pub fn c2_norm(psi: &SampledField) -> f64 {
    let d = &psi.domain;
    let v = &psi.values;
    let mut m = psi.sup_norm();
    for i in 1..d.nx - 1 {
        for j in 1..d.ny - 1 {
            let gx = (v[[i + 1, j]] - v[[i - 1, j]]) / (2.0 * d.dx);
            let gy = (v[[i, j + 1]] - v[[i, j - 1]]) / (2.0 * d.dy);
            m = m.max(gx.abs()).max(gy.abs());
        }
    }
    m.max(second_derivative_sup(psi))
}

/// Sup of the discrete second derivatives (xx, yy compact; xy centered).
pub fn second_derivative_sup(psi: &SampledField) -> f64 {
    let d = &psi.domain;
    let v = &psi.values;
    let mut m: f64 = 0.0;
    for i in 1..d.nx - 1 {
        for j in 1..d.ny - 1 {
            let dxx = (v[[i + 1, j]] - 2.0 * v[[i, j]] + v[[i - 1, j]]) / (d.dx * d.dx);
            let dyy = (v[[i, j + 1]] - 2.0 * v[[i, j]] + v[[i, j - 1]]) / (d.dy * d.dy);
            let dxy = (v[[i + 1, j + 1]] - v[[i + 1, j - 1]] - v[[i - 1, j + 1]]
                + v[[i - 1, j - 1]])
                / (4.0 * d.dx * d.dy);
            m = m.max(dxx.abs()).max(dyy.abs()).max(dxy.abs());
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::poisson::{neg_laplace5, poisson_solve};
    use crate::grid::Domain;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn random_field(n: usize, seed: u64) -> SampledField {
        let d = Domain::unit_square(n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = Array2::from_shape_fn((n, n), |_| rng.random::<f64>() - 0.5);
        SampledField::new(d, values).unwrap()
    }

    #[test]
    fn rot_of_zero_is_zero() {
        let d = Domain::unit_square(9).unwrap();
        let v = rot(&SampledField::zeros(d));
        assert_eq!(v.sup_norm(), 0.0);
    }

    #[test]
    fn rot_matches_analytic_to_second_order() {
        let mut errs = Vec::new();
        for n in [33usize, 65] {
            let d = Domain::unit_square(n).unwrap();
            let psi =
                SampledField::from_fn(d.clone(), |p| (PI * p.x).sin() * (PI * p.y).sin()).unwrap();
            let v = rot(&psi);
            let exact = VectorField::from_fns(
                d,
                |p| PI * (PI * p.x).sin() * (PI * p.y).cos(),
                |p| -PI * (PI * p.x).cos() * (PI * p.y).sin(),
            );
            let mut err: f64 = 0.0;
            for (a, b) in v.v1.iter().zip(exact.v1.iter()) {
                err = err.max((a - b).abs());
            }
            for (a, b) in v.v2.iter().zip(exact.v2.iter()) {
                err = err.max((a - b).abs());
            }
            errs.push(err);
        }
        let order = (errs[0] / errs[1]).log2();
        assert!(order > 1.9, "order {order}");
    }

    #[test]
    fn div_rot_identically_zero() {
        for seed in 0..5 {
            let psi = random_field(21, seed);
            let div = divergence(&rot(&psi));
            let m = div.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            assert!(m <= 1e-13 * psi.sup_norm().max(1.0) / (1.0 / 20.0_f64).powi(2));
        }
    }

    #[test]
    fn curl_rot_equals_five_point_laplacian() {
        for seed in 0..5 {
            let psi = random_field(21, seed);
            let lhs = curl(&rot(&psi));
            let rhs = neg_laplace5(&psi);
            let mut m: f64 = 0.0;
            for (a, b) in lhs.values.iter().zip(rhs.values.iter()) {
                m = m.max((a - b).abs());
            }
            assert!(m <= 1e-9, "mismatch {m}");
        }
    }

    #[test]
    fn curl_of_rigid_rotation_is_two() {
        let d = Domain::unit_square(17).unwrap();
        let v = VectorField::from_fns(d.clone(), |p| -p.y, |p| p.x);
        let c = curl(&v);
        for i in 1..d.nx - 1 {
            for j in 1..d.ny - 1 {
                assert!((c.values[[i, j]] - 2.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn velocity_from_vorticity_matches_eigenmode() {
        let d = Domain::unit_square(65).unwrap();
        let theta = SampledField::from_fn(d.clone(), |p| {
            2.0 * PI * PI * (PI * p.x).sin() * (PI * p.y).sin()
        })
        .unwrap();
        let v = velocity_from_vorticity(&theta).unwrap();
        let exact = VectorField::from_fns(
            d,
            |p| PI * (PI * p.x).sin() * (PI * p.y).cos(),
            |p| -PI * (PI * p.x).cos() * (PI * p.y).sin(),
        );
        let mut err: f64 = 0.0;
        for (a, b) in v.v1.iter().zip(exact.v1.iter()) {
            err = err.max((a - b).abs());
        }
        assert!(err < 5e-3, "err {err}");
    }

    #[test]
    fn normal_trace_vanishes_for_stream_velocity() {
        let theta = random_field(33, 3);
        let psi = poisson_solve(&theta).unwrap();
        let v = rot(&psi);
        assert!(max_normal_trace(&v) <= 1e-14 * v.sup_norm().max(1.0));
    }

    #[test]
    fn lipschitz_of_constant_is_zero() {
        let d = Domain::unit_square(17).unwrap();
        let g = SampledField::from_fn(d, |_| 4.2).unwrap();
        assert_eq!(lipschitz_seminorm(&g), 0.0);
    }

    #[test]
    fn lipschitz_of_linear_field_hits_gradient_norm() {
        // g = 2x + y has |grad g| = sqrt(5); the offset (2,1) realizes it.
        let d = Domain::unit_square(33).unwrap();
        let g = SampledField::from_fn(d, |p| 2.0 * p.x + p.y).unwrap();
        let lip = lipschitz_seminorm(&g);
        assert!((lip - 5.0_f64.sqrt()).abs() < 1e-12, "lip = {lip}");
    }

    #[test]
    fn c2_norm_of_eigenmode_is_pi_squared() {
        let d = Domain::unit_square(129).unwrap();
        let psi = SampledField::from_fn(d, |p| (PI * p.x).sin() * (PI * p.y).sin()).unwrap();
        let c2 = c2_norm(&psi);
        let h = 1.0 / 128.0;
        assert!((c2 - PI * PI).abs() < 10.0 * h * h, "c2 = {c2}");
    }
}
