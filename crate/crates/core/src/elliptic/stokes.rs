//! Stationary Stokes on the unit-square MAC grid.
//!
//! `-lap(u) + grad p = f`, `div u = 0`, `u = 0` on the boundary. Velocity
//! components live on faces, pressure at cell centers. The pressure is
//! eliminated through the Schur complement `S = D A^{-1} G` and the mean-zero
//! pressure is found by conjugate gradients on `-S` (an Uzawa-type
//! pressure-Schur iteration); every inner momentum solve is a direct
//! DST-I x DST-II diagonalization, so the CG residual *is* the divergence of
//! the current velocity.

use crate::elliptic::dst::{eigenvalue_dst1, eigenvalue_dst2, SineTransforms};
use crate::error::{Error, Result};
use crate::grid::{Domain, SampledField, Shape, VectorField};
use ndarray::Array2;

/// Velocity/pressure pair with solver diagnostics.
#[derive(Debug, Clone)]
pub struct StokesSolution {
    pub velocity: VectorField,
    /// Cell-centered, mean-zero pressure.
    pub pressure: SampledField,
    /// Max-norm of the discrete divergence of the velocity.
    pub div_sup: f64,
    pub iterations: usize,
}

/// Momentum solver for one staggered component:
/// DST-I along the on-lattice Dirichlet direction, DST-II along the
/// half-offset (reflected ghost) direction.
struct MomentumSolver {
    /// interior extent along the DST-I axis
    m: usize,
    /// extent along the DST-II axis
    n: usize,
    lam1: Vec<f64>,
    lam2: Vec<f64>,
}

impl MomentumSolver {
    fn new(m: usize, n: usize, h: f64) -> MomentumSolver {
        MomentumSolver {
            m,
            n,
            lam1: (1..=m).map(|k| eigenvalue_dst1(k, m, h)).collect(),
            lam2: (1..=n).map(|k| eigenvalue_dst2(k, n, h)).collect(),
        }
    }

    /// Solve `A x = rhs` where axis 0 of `rhs` is the DST-I direction
    /// (length `m`) and axis 1 the DST-II direction (length `n`).
    fn solve(&self, t: &mut SineTransforms, rhs: &Array2<f64>) -> Array2<f64> {
        let (m, n) = (self.m, self.n);
        debug_assert_eq!(rhs.dim(), (m, n));
        let mut work = rhs.clone();
        let mut buf = vec![0.0; m.max(n)];
        for i in 0..m {
            let row = &mut buf[..n];
            for j in 0..n {
                row[j] = work[[i, j]];
            }
            t.dst2(row);
            for j in 0..n {
                work[[i, j]] = row[j];
            }
        }
        for j in 0..n {
            let col = &mut buf[..m];
            for i in 0..m {
                col[i] = work[[i, j]];
            }
            t.dst1(col);
            for i in 0..m {
                work[[i, j]] = col[i];
            }
        }
        let scale = 2.0 / (m + 1) as f64 * 2.0 / n as f64;
        for i in 0..m {
            for j in 0..n {
                work[[i, j]] *= scale / (self.lam1[i] + self.lam2[j]);
            }
        }
        for i in 0..m {
            let row = &mut buf[..n];
            for j in 0..n {
                row[j] = work[[i, j]];
            }
            t.dst3(row);
            for j in 0..n {
                work[[i, j]] = row[j];
            }
        }
        for j in 0..n {
            let col = &mut buf[..m];
            for i in 0..m {
                col[i] = work[[i, j]];
            }
            t.dst1(col);
            for i in 0..m {
                work[[i, j]] = col[i];
            }
        }
        work
    }
}

/// Reusable Stokes solver for one grid size.
pub struct StokesSolver {
    domain: Domain,
    n: usize,
    h: f64,
    mom: MomentumSolver,
    transforms: SineTransforms,
    tol_div: f64,
    max_iters: usize,
}

impl StokesSolver {
    pub fn new(domain: &Domain) -> Result<StokesSolver> {
        if domain.shape != Shape::Square {
            return Err(Error::UnsupportedDomain(
                "the MAC Stokes solver needs an unmasked square".into(),
            ));
        }
        if domain.nx != domain.ny || (domain.dx - domain.dy).abs() > 1e-15 * domain.dx {
            return Err(Error::UnsupportedDomain(
                "the MAC Stokes solver needs square cells".into(),
            ));
        }
        let n = domain.nx - 1;
        if n < 4 {
            return Err(Error::invalid("grid too coarse for the Stokes solver"));
        }
        Ok(StokesSolver {
            domain: domain.clone(),
            n,
            h: domain.dx,
            mom: MomentumSolver::new(n - 1, n, domain.dx),
            transforms: SineTransforms::new(),
            tol_div: 1e-11,
            max_iters: 600,
        })
    }

    pub fn with_tolerance(mut self, tol_div: f64, max_iters: usize) -> Self {
        self.tol_div = tol_div;
        self.max_iters = max_iters;
        self
    }

    /// Momentum solve for both components. Inputs are interior-unknown
    /// arrays: u is `(n-1, n)` (i = 1..n-1 faces), v is `(n, n-1)`.
    fn velocity_solve(&mut self, fu: &Array2<f64>, fv: &Array2<f64>) -> (Array2<f64>, Array2<f64>) {
        let u = self.mom.solve(&mut self.transforms, fu);
        // v has roles swapped: DST-I along y, DST-II along x; transpose in
        let fv_t = fv.t().to_owned();
        let v_t = self.mom.solve(&mut self.transforms, &fv_t);
        (u, v_t.t().to_owned())
    }

    /// Gradient of a cell field at interior faces.
    fn grad(&self, p: &Array2<f64>) -> (Array2<f64>, Array2<f64>) {
        let (n, h) = (self.n, self.h);
        let gu = Array2::from_shape_fn((n - 1, n), |(i, j)| (p[[i + 1, j]] - p[[i, j]]) / h);
        let gv = Array2::from_shape_fn((n, n - 1), |(i, j)| (p[[i, j + 1]] - p[[i, j]]) / h);
        (gu, gv)
    }

    /// Divergence at cells from interior-face velocities.
    fn div(&self, u: &Array2<f64>, v: &Array2<f64>) -> Array2<f64> {
        let (n, h) = (self.n, self.h);
        Array2::from_shape_fn((n, n), |(i, j)| {
            let du = match i {
                0 => u[[0, j]],
                _ if i == n - 1 => -u[[n - 2, j]],
                _ => u[[i, j]] - u[[i - 1, j]],
            };
            let dv = match j {
                0 => v[[i, 0]],
                _ if j == n - 1 => -v[[i, n - 2]],
                _ => v[[i, j]] - v[[i, j - 1]],
            };
            (du + dv) / h
        })
    }

    /// Solve for the given face-sampled forcing.
    pub fn solve(&mut self, f: &VectorField) -> Result<StokesSolution> {
        if f.domain.nx != self.domain.nx || f.domain.ny != self.domain.ny {
            return Err(Error::invalid("forcing grid does not match solver grid"));
        }
        let n = self.n;
        // interior-unknown views of the forcing
        let fu = Array2::from_shape_fn((n - 1, n), |(i, j)| f.v1[[i + 1, j]]);
        let fv = Array2::from_shape_fn((n, n - 1), |(i, j)| f.v2[[i, j + 1]]);

        let scale = 1.0_f64.max(f.sup_norm());
        let target = self.tol_div * scale;

        // rhs of the Schur system: -(D A^-1 f), projected mean-zero
        let (au, av) = self.velocity_solve(&fu, &fv);
        let mut b = self.div(&au, &av);
        b.mapv_inplace(|x| -x);
        project_mean_zero(&mut b);

        // CG on -S = -D A^-1 G (SPD on mean-zero pressures)
        let mut p = Array2::zeros((n, n));
        let mut r = b.clone();
        let mut rho = dot(&r, &r);
        let mut search = r.clone();
        let mut iterations = 0;
        let mut res_sup = sup(&r);
        while res_sup > target && iterations < self.max_iters {
            let (gu, gv) = self.grad(&search);
            let (wu, wv) = self.velocity_solve(&gu, &gv);
            let mut m_search = self.div(&wu, &wv);
            m_search.mapv_inplace(|x| -x);
            project_mean_zero(&mut m_search);
            let alpha = rho / dot(&search, &m_search);
            p.zip_mut_with(&search, |a, &s| *a += alpha * s);
            r.zip_mut_with(&m_search, |a, &s| *a -= alpha * s);
            project_mean_zero(&mut r);
            let rho_next = dot(&r, &r);
            let beta = rho_next / rho;
            rho = rho_next;
            search.zip_mut_with(&r, |a, &b| *a = b + beta * *a);
            // searches are formed from mean-zero residuals, stay mean-zero
            res_sup = sup(&r);
            iterations += 1;
        }
        if res_sup > target {
            return Err(Error::SolverFailure {
                stage: "stokes pressure-schur cg".into(),
                residual: res_sup,
                iterations,
                target,
            });
        }

        // final velocity for this pressure
        let (gu, gv) = self.grad(&p);
        let (u, v) = self.velocity_solve(&(&fu - &gu), &(&fv - &gv));
        let div_sup = sup(&self.div(&u, &v));

        // embed into full staggered arrays (boundary faces zero)
        let mut v1 = Array2::zeros((n + 1, n));
        let mut v2 = Array2::zeros((n, n + 1));
        for i in 0..n - 1 {
            for j in 0..n {
                v1[[i + 1, j]] = u[[i, j]];
            }
        }
        for i in 0..n {
            for j in 0..n - 1 {
                v2[[i, j + 1]] = v[[i, j]];
            }
        }
        let velocity = VectorField::new(self.domain.clone(), v1, v2)?;

        // mean-zero cell-centered pressure on the dual grid
        project_mean_zero(&mut p);
        let cell_domain = Domain::rectangle(
            self.domain.x0 + 0.5 * self.h,
            self.domain.y0 + 0.5 * self.h,
            self.h,
            self.h,
            n,
            n,
        )?;
        let pressure = SampledField::new(cell_domain, p)?;

        Ok(StokesSolution {
            velocity,
            pressure,
            div_sup,
            iterations,
        })
    }
}

fn project_mean_zero(a: &mut Array2<f64>) {
    let mean = a.sum() / a.len() as f64;
    a.mapv_inplace(|x| x - mean);
}

fn dot(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

fn sup(a: &Array2<f64>) -> f64 {
    a.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// One-shot solve with default tolerances.
pub fn stokes_solve(f: &VectorField) -> Result<StokesSolution> {
    StokesSolver::new(&f.domain)?.solve(f)
}

/// Manufactured solution for convergence studies:
/// `psi = (x(1-x)y(1-y))^2`, `u = rot psi`, `p = x + y - 1`,
/// `f = -lap(u) + grad p` expanded in closed form.
pub mod manufactured {
    use crate::grid::Point;

    pub fn u1(p: Point) -> f64 {
        let (x, y) = (p.x, p.y);
        2.0 * x * x * y * (x - 1.0) * (x - 1.0) * (y - 1.0) * (2.0 * y - 1.0)
    }

    pub fn u2(p: Point) -> f64 {
        let (x, y) = (p.x, p.y);
        -2.0 * x * (x - 1.0) * (2.0 * x - 1.0) * y * y * (y - 1.0) * (y - 1.0)
    }

    pub fn pressure(p: Point) -> f64 {
        p.x + p.y - 1.0
    }

    pub fn f1(p: Point) -> f64 {
        let (x, y) = (p.x, p.y);
        x * (x * (x * (x * (12.0 - 24.0 * y) + 48.0 * y - 24.0)
            + y * (y * (72.0 - 48.0 * y) - 48.0)
            + 12.0)
            + y * (y * (48.0 * y - 72.0) + 24.0))
            + y * (y * (12.0 - 8.0 * y) - 4.0)
            + 1.0
    }

    pub fn f2(p: Point) -> f64 {
        let (x, y) = (p.x, p.y);
        x * (x * (8.0 * x - 12.0) + 4.0)
            + y * (x * (x * (72.0 - 48.0 * x) - 24.0)
                + y * (x * (x * (48.0 * x - 72.0) + 48.0)
                    + y * (-48.0 * x + y * (24.0 * x - 12.0) + 24.0)
                    - 12.0))
            + 1.0
    }
}

/// Velocity and pressure discrete-L2 errors of the manufactured solution at
/// a given node count.
pub fn manufactured_errors(n_nodes: usize) -> Result<(f64, f64)> {
    let d = Domain::unit_square(n_nodes)?;
    let f = VectorField::from_fns(d.clone(), manufactured::f1, manufactured::f2);
    let sol = StokesSolver::new(&d)?.solve(&f)?;
    let exact_u = VectorField::from_fns(d, manufactured::u1, manufactured::u2);
    let mut num = 0.0;
    let mut cnt = 0usize;
    for (a, b) in sol.velocity.v1.iter().zip(exact_u.v1.iter()) {
        num += (a - b) * (a - b);
        cnt += 1;
    }
    for (a, b) in sol.velocity.v2.iter().zip(exact_u.v2.iter()) {
        num += (a - b) * (a - b);
        cnt += 1;
    }
    let err_u = (num / cnt as f64).sqrt();
    let pd = &sol.pressure.domain;
    let mut exact_p = SampledField::from_fn(pd.clone(), manufactured::pressure)?;
    let mean = exact_p.values.sum() / exact_p.values.len() as f64;
    exact_p.values.mapv_inplace(|v| v - mean);
    let mut nump = 0.0;
    for (a, b) in sol.pressure.values.iter().zip(exact_p.values.iter()) {
        nump += (a - b) * (a - b);
    }
    let err_p = (nump / exact_p.values.len() as f64).sqrt();
    Ok((err_u, err_p))
}
