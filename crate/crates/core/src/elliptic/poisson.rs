//! Fast Poisson solver: 5-point Laplacian with homogeneous Dirichlet data,
//! diagonalized by DST-I in both directions.

use crate::elliptic::dst::{eigenvalue_dst1, SineTransforms};
use crate::error::{Error, Result};
use crate::grid::{Domain, SampledField, Shape};
use ndarray::Array2;

/// Direct solver for `-lap(psi) = theta`, `psi = 0` on the boundary, on a
/// rectangle. Reusable: caches FFT plans and eigenvalues per grid.
pub struct PoissonSolver {
    domain: Domain,
    lam_x: Vec<f64>,
    lam_y: Vec<f64>,
    transforms: SineTransforms,
}

impl PoissonSolver {
    pub fn new(domain: &Domain) -> Result<Self> {
        if domain.shape != Shape::Square {
            return Err(Error::UnsupportedDomain(
                "the sine-transform Poisson solver needs an unmasked rectangle".into(),
            ));
        }
        if domain.nx < 3 || domain.ny < 3 {
            return Err(Error::invalid("need at least one interior node"));
        }
        let mx = domain.nx - 2;
        let my = domain.ny - 2;
        let lam_x = (1..=mx).map(|k| eigenvalue_dst1(k, mx, domain.dx)).collect();
        let lam_y = (1..=my).map(|k| eigenvalue_dst1(k, my, domain.dy)).collect();
        Ok(PoissonSolver {
            domain: domain.clone(),
            lam_x,
            lam_y,
            transforms: SineTransforms::new(),
        })
    }

    /// Solve for the stream function of `theta`; boundary values are zero.
    pub fn solve(&mut self, theta: &SampledField) -> Result<SampledField> {
        if theta.domain != self.domain {
            return Err(Error::invalid("field domain does not match solver grid"));
        }
        let (nx, ny) = (self.domain.nx, self.domain.ny);
        let (mx, my) = (nx - 2, ny - 2);
        let mut work = Array2::zeros((mx, my));
        for i in 0..mx {
            for j in 0..my {
                work[[i, j]] = theta.values[[i + 1, j + 1]];
            }
        }

        // forward transforms: rows (y-lines) then columns (x-lines)
        let mut col = vec![0.0; my.max(mx)];
        for i in 0..mx {
            let row = &mut col[..my];
            for j in 0..my {
                row[j] = work[[i, j]];
            }
            self.transforms.dst1(row);
            for j in 0..my {
                work[[i, j]] = row[j];
            }
        }
        for j in 0..my {
            let cl = &mut col[..mx];
            for i in 0..mx {
                cl[i] = work[[i, j]];
            }
            self.transforms.dst1(cl);
            for i in 0..mx {
                work[[i, j]] = cl[i];
            }
        }

        // divide by eigenvalues, fold in the inverse-transform normalization
        let scale = 4.0 / (((mx + 1) * (my + 1)) as f64);
        for i in 0..mx {
            for j in 0..my {
                work[[i, j]] *= scale / (self.lam_x[i] + self.lam_y[j]);
            }
        }

        // inverse = same transforms again
        for i in 0..mx {
            let row = &mut col[..my];
            for j in 0..my {
                row[j] = work[[i, j]];
            }
            self.transforms.dst1(row);
            for j in 0..my {
                work[[i, j]] = row[j];
            }
        }
        for j in 0..my {
            let cl = &mut col[..mx];
            for i in 0..mx {
                cl[i] = work[[i, j]];
            }
            self.transforms.dst1(cl);
            for i in 0..mx {
                work[[i, j]] = cl[i];
            }
        }

        let mut values = Array2::zeros((nx, ny));
        for i in 0..mx {
            for j in 0..my {
                values[[i + 1, j + 1]] = work[[i, j]];
            }
        }
        SampledField::new(self.domain.clone(), values)
    }
}

/// One-shot convenience wrapper around [`PoissonSolver`].
pub fn poisson_solve(theta: &SampledField) -> Result<SampledField> {
    PoissonSolver::new(&theta.domain)?.solve(theta)
}

/// 5-point discrete `-lap` applied at interior nodes (boundary rows of the
/// output are zero).
pub fn neg_laplace5(psi: &SampledField) -> SampledField {
    let d = &psi.domain;
    let (hx2, hy2) = (d.dx * d.dx, d.dy * d.dy);
    let v = &psi.values;
    let mut out = Array2::zeros((d.nx, d.ny));
    for i in 1..d.nx - 1 {
        for j in 1..d.ny - 1 {
            out[[i, j]] = (2.0 * v[[i, j]] - v[[i - 1, j]] - v[[i + 1, j]]) / hx2
                + (2.0 * v[[i, j]] - v[[i, j - 1]] - v[[i, j + 1]]) / hy2;
        }
    }
    SampledField {
        domain: d.clone(),
        values: out,
    }
}

/// Normwise relative residual of a Poisson solution,
/// `max |A psi - theta| / (||A|| ||psi|| + ||theta||)`.
pub fn poisson_residual(psi: &SampledField, theta: &SampledField) -> f64 {
    let d = &psi.domain;
    let a = neg_laplace5(psi);
    let mut num: f64 = 0.0;
    for i in 1..d.nx - 1 {
        for j in 1..d.ny - 1 {
            num = num.max((a.values[[i, j]] - theta.values[[i, j]]).abs());
        }
    }
    let op_norm = 4.0 / (d.dx * d.dx) + 4.0 / (d.dy * d.dy);
    let den = op_norm * psi.sup_norm() + theta.sup_norm();
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Point;
    use std::f64::consts::PI;

    #[test]
    fn zero_data_gives_zero_solution() {
        let d = Domain::unit_square(17).unwrap();
        let theta = SampledField::zeros(d);
        let psi = poisson_solve(&theta).unwrap();
        assert_eq!(psi.sup_norm(), 0.0);
    }

    #[test]
    fn eigenfunction_is_reproduced() {
        // theta = 2 pi^2 sin(pi x) sin(pi y) -> psi = sin(pi x) sin(pi y)
        // up to the O(h^2) eigenvalue defect of the 5-point stencil.
        let d = Domain::unit_square(65).unwrap();
        let theta = SampledField::from_fn(d.clone(), |p| {
            2.0 * PI * PI * (PI * p.x).sin() * (PI * p.y).sin()
        })
        .unwrap();
        let psi = poisson_solve(&theta).unwrap();
        let exact = SampledField::from_fn(d, |p| (PI * p.x).sin() * (PI * p.y).sin()).unwrap();
        let mut err: f64 = 0.0;
        for (a, b) in psi.values.iter().zip(exact.values.iter()) {
            err = err.max((a - b).abs());
        }
        let h = 1.0 / 64.0;
        assert!(err < 2.0 * h * h, "err = {err}");
    }

    #[test]
    fn eigenfunction_converges_second_order() {
        let mut errs = Vec::new();
        for n in [65usize, 129] {
            let d = Domain::unit_square(n).unwrap();
            let theta = SampledField::from_fn(d.clone(), |p| {
                2.0 * PI * PI * (PI * p.x).sin() * (PI * p.y).sin()
            })
            .unwrap();
            let psi = poisson_solve(&theta).unwrap();
            let exact =
                SampledField::from_fn(d, |p| (PI * p.x).sin() * (PI * p.y).sin()).unwrap();
            let mut err: f64 = 0.0;
            for (a, b) in psi.values.iter().zip(exact.values.iter()) {
                err = err.max((a - b).abs());
            }
            errs.push(err);
        }
        let order = (errs[0] / errs[1]).log2();
        assert!(order >= 1.9, "observed order {order}");
    }

    #[test]
    fn residual_is_tiny() {
        let d = Domain::unit_square(65).unwrap();
        let theta = SampledField::from_fn(d, |p| (3.0 * p.x + p.y * p.y).sin()).unwrap();
        let psi = poisson_solve(&theta).unwrap();
        assert!(poisson_residual(&psi, &theta) <= 1e-12);
    }

    #[test]
    fn maximum_principle_nonneg_data() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let d = Domain::unit_square(33).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let vals = Array2::from_shape_fn((33, 33), |_| rng.random::<f64>());
            let theta = SampledField::new(d.clone(), vals).unwrap();
            let psi = poisson_solve(&theta).unwrap();
            let min = psi.values.iter().cloned().fold(f64::INFINITY, f64::min);
            assert!(min >= -1e-12 * psi.sup_norm().max(1.0));
        }
    }

    #[test]
    fn masked_domain_is_rejected() {
        let d = Domain::disk(Point::new(0.0, 0.0), 1.0, 17).unwrap();
        let theta = SampledField::zeros(d);
        assert!(matches!(
            poisson_solve(&theta),
            Err(Error::UnsupportedDomain(_))
        ));
    }
}
