//! Uniform rectangular grids, sampled scalar fields, and staggered vector fields.
//!
//! A [`Domain`] is a uniform node lattice over a rectangle, optionally restricted
//! by a disk inclusion mask. Scalar data lives on nodes ([`SampledField`]);
//! vector data lives on edge midpoints in the staggered (MAC) layout
//! ([`VectorField`]), which is what makes the discrete `div`/`rot`/`curl`
//! identities exact.

use crate::error::{Error, Result};
use ndarray::Array2;
use serde::{Deserialize, Serialize};

/// A point in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        self.dist_sq(other).sqrt()
    }

    /// Squared distance. Pairwise kernels compare these against squared radii
    /// so that no square root enters the inclusion predicate.
    pub fn dist_sq(self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

/// Shape of the sampled region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    Square,
    DiskMask,
}

/// Uniform node lattice with geometry metadata.
///
/// Nodes sit at `(x0 + i*dx, y0 + j*dy)` for `i < nx`, `j < ny`. A disk-mask
/// domain carries a boolean inclusion grid; operations only look at included
/// nodes. `diameter` is the largest distance between included nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    pub x0: f64,
    pub y0: f64,
    pub dx: f64,
    pub dy: f64,
    pub nx: usize,
    pub ny: usize,
    pub shape: Shape,
    pub diameter: f64,
    mask: Option<Array2<bool>>,
}

impl Domain {
    /// Full rectangle `[x0, x0+(nx-1)dx] x [y0, y0+(ny-1)dy]`.
    pub fn rectangle(x0: f64, y0: f64, dx: f64, dy: f64, nx: usize, ny: usize) -> Result<Self> {
        if !(dx > 0.0) || !(dy > 0.0) {
            return Err(Error::invalid("grid spacings must be positive"));
        }
        if nx < 2 || ny < 2 {
            return Err(Error::invalid("need at least 2 nodes per direction"));
        }
        let w = (nx - 1) as f64 * dx;
        let h = (ny - 1) as f64 * dy;
        Ok(Domain {
            x0,
            y0,
            dx,
            dy,
            nx,
            ny,
            shape: Shape::Square,
            diameter: (w * w + h * h).sqrt(),
            mask: None,
        })
    }

    /// Unit square `[0,1]^2` with `n` nodes per side.
    pub fn unit_square(n: usize) -> Result<Self> {
        let h = 1.0 / (n as f64 - 1.0);
        Domain::rectangle(0.0, 0.0, h, h, n, n)
    }

    /// Disk of given center and radius, masked out of its bounding square
    /// sampled with `n` nodes per side.
    pub fn disk(center: Point, radius: f64, n: usize) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::invalid("disk radius must be positive"));
        }
        let h = 2.0 * radius / (n as f64 - 1.0);
        let x0 = center.x - radius;
        let y0 = center.y - radius;
        let r_sq = radius * radius * (1.0 + 1e-12);
        let mask = Array2::from_shape_fn((n, n), |(i, j)| {
            let p = Point::new(x0 + i as f64 * h, y0 + j as f64 * h);
            p.dist_sq(center) <= r_sq
        });
        if !mask.iter().any(|&m| m) {
            return Err(Error::invalid("disk mask contains no nodes"));
        }
        // Included nodes all lie in the disk, so 2*radius bounds the true
        // diameter within one spacing.
        Ok(Domain {
            x0,
            y0,
            dx: h,
            dy: h,
            nx: n,
            ny: n,
            shape: Shape::DiskMask,
            diameter: 2.0 * radius,
            mask: Some(mask),
        })
    }

    /// Rebuild a masked domain from raw parts (used by field deserialization).
    pub fn from_parts(
        x0: f64,
        y0: f64,
        dx: f64,
        dy: f64,
        nx: usize,
        ny: usize,
        mask: Option<Array2<bool>>,
    ) -> Result<Self> {
        let mut dom = Domain::rectangle(x0, y0, dx, dy, nx, ny)?;
        if let Some(mask) = mask {
            if mask.dim() != (nx, ny) {
                return Err(Error::invalid("mask dimensions do not match grid"));
            }
            if !mask.iter().any(|&m| m) {
                return Err(Error::invalid("mask contains no nodes"));
            }
            // Exact diameter over included nodes: max pairwise distance.
            let pts: Vec<Point> = mask
                .indexed_iter()
                .filter(|&(_, &m)| m)
                .map(|((i, j), _)| Point::new(x0 + i as f64 * dx, y0 + j as f64 * dy))
                .collect();
            let mut d_sq: f64 = 0.0;
            for (a, p) in pts.iter().enumerate() {
                for q in pts.iter().skip(a + 1) {
                    d_sq = d_sq.max(p.dist_sq(*q));
                }
            }
            dom.shape = Shape::DiskMask;
            dom.diameter = d_sq.sqrt();
            dom.mask = Some(mask);
        }
        Ok(dom)
    }

    pub fn mask(&self) -> Option<&Array2<bool>> {
        self.mask.as_ref()
    }

    #[inline]
    pub fn includes(&self, i: usize, j: usize) -> bool {
        match &self.mask {
            Some(m) => m[[i, j]],
            None => true,
        }
    }

    #[inline]
    pub fn node(&self, i: usize, j: usize) -> Point {
        Point::new(self.x0 + i as f64 * self.dx, self.y0 + j as f64 * self.dy)
    }

    /// Smaller of the two spacings; the natural resolution scale.
    pub fn spacing(&self) -> f64 {
        self.dx.min(self.dy)
    }

    pub fn x_max(&self) -> f64 {
        self.x0 + (self.nx - 1) as f64 * self.dx
    }

    pub fn y_max(&self) -> f64 {
        self.y0 + (self.ny - 1) as f64 * self.dy
    }

    /// Geometric center of the bounding rectangle.
    pub fn center(&self) -> Point {
        Point::new(
            0.5 * (self.x0 + self.x_max()),
            0.5 * (self.y0 + self.y_max()),
        )
    }

    /// Index of the node nearest to `p`, clamped into the grid.
    pub fn nearest_node(&self, p: Point) -> (usize, usize) {
        let fi = ((p.x - self.x0) / self.dx).round();
        let fj = ((p.y - self.y0) / self.dy).round();
        let i = fi.clamp(0.0, (self.nx - 1) as f64) as usize;
        let j = fj.clamp(0.0, (self.ny - 1) as f64) as usize;
        (i, j)
    }

    /// Included node points in row-major order (i outer, j inner).
    pub fn points(&self) -> Vec<Point> {
        let mut pts = Vec::with_capacity(self.nx * self.ny);
        for i in 0..self.nx {
            for j in 0..self.ny {
                if self.includes(i, j) {
                    pts.push(self.node(i, j));
                }
            }
        }
        pts
    }

    /// Clamp a point into the closed bounding rectangle. Returns the clamped
    /// point and whether clamping moved it.
    pub fn clamp(&self, p: Point) -> (Point, bool) {
        let cx = p.x.clamp(self.x0, self.x_max());
        let cy = p.y.clamp(self.y0, self.y_max());
        let moved = cx != p.x || cy != p.y;
        (Point::new(cx, cy), moved)
    }
}

/// Scalar values on the nodes of a [`Domain`].
///
/// Values at masked-out nodes are stored as 0 and never read by the kernels.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    pub domain: Domain,
    pub values: Array2<f64>,
}

impl SampledField {
    pub fn new(domain: Domain, values: Array2<f64>) -> Result<Self> {
        if values.dim() != (domain.nx, domain.ny) {
            return Err(Error::invalid(format!(
                "value array {:?} does not match grid ({}, {})",
                values.dim(),
                domain.nx,
                domain.ny
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("field contains non-finite values"));
        }
        Ok(SampledField { domain, values })
    }

    pub fn zeros(domain: Domain) -> Self {
        let values = Array2::zeros((domain.nx, domain.ny));
        SampledField { domain, values }
    }

    /// Sample `f` at every node of the bounding lattice. On masked domains
    /// the excluded nodes still carry values (interpolation near the mask rim
    /// uses them) but the pairwise kernels ignore them.
    pub fn from_fn(domain: Domain, f: impl Fn(Point) -> f64) -> Result<Self> {
        let mut values = Array2::zeros((domain.nx, domain.ny));
        for i in 0..domain.nx {
            for j in 0..domain.ny {
                values[[i, j]] = f(domain.node(i, j));
            }
        }
        SampledField::new(domain, values)
    }

    /// Sup norm over included nodes.
    pub fn sup_norm(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.domain.nx {
            for j in 0..self.domain.ny {
                if self.domain.includes(i, j) {
                    m = m.max(self.values[[i, j]].abs());
                }
            }
        }
        m
    }

    /// Bilinear interpolation at `p`, clamped to the grid hull.
    ///
    /// Bilinear weights are convex, so interpolated values never overshoot the
    /// surrounding node values; this is what keeps sup-norm transport monotone.
    pub fn interp(&self, p: Point) -> f64 {
        let d = &self.domain;
        let fx = ((p.x - d.x0) / d.dx).clamp(0.0, (d.nx - 1) as f64);
        let fy = ((p.y - d.y0) / d.dy).clamp(0.0, (d.ny - 1) as f64);
        let i0 = (fx.floor() as usize).min(d.nx - 2);
        let j0 = (fy.floor() as usize).min(d.ny - 2);
        let tx = fx - i0 as f64;
        let ty = fy - j0 as f64;
        let v = &self.values;
        let a = v[[i0, j0]] * (1.0 - tx) + v[[i0 + 1, j0]] * tx;
        let b = v[[i0, j0 + 1]] * (1.0 - tx) + v[[i0 + 1, j0 + 1]] * tx;
        a * (1.0 - ty) + b * ty
    }

    /// Apply `g` pointwise, returning a new field.
    pub fn map(&self, g: impl Fn(f64) -> f64) -> SampledField {
        SampledField {
            domain: self.domain.clone(),
            values: self.values.mapv(&g),
        }
    }
}

/// Staggered (MAC) vector field relative to a nodal domain.
///
/// For a domain with `nx x ny` nodes, component 1 lives on vertical edge
/// midpoints `(x_i, y_j + dy/2)` with shape `(nx, ny-1)` and component 2 on
/// horizontal edge midpoints `(x_i + dx/2, y_j)` with shape `(nx-1, ny)`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    pub domain: Domain,
    pub v1: Array2<f64>,
    pub v2: Array2<f64>,
}

impl VectorField {
    pub fn zeros(domain: Domain) -> Self {
        let v1 = Array2::zeros((domain.nx, domain.ny - 1));
        let v2 = Array2::zeros((domain.nx - 1, domain.ny));
        VectorField { domain, v1, v2 }
    }

    pub fn new(domain: Domain, v1: Array2<f64>, v2: Array2<f64>) -> Result<Self> {
        if v1.dim() != (domain.nx, domain.ny - 1) || v2.dim() != (domain.nx - 1, domain.ny) {
            return Err(Error::invalid("staggered component shapes do not match grid"));
        }
        if v1.iter().chain(v2.iter()).any(|v| !v.is_finite()) {
            return Err(Error::invalid("vector field contains non-finite values"));
        }
        Ok(VectorField { domain, v1, v2 })
    }

    /// Sample analytic components at their staggered locations.
    pub fn from_fns(
        domain: Domain,
        f1: impl Fn(Point) -> f64,
        f2: impl Fn(Point) -> f64,
    ) -> Self {
        let d = &domain;
        let v1 = Array2::from_shape_fn((d.nx, d.ny - 1), |(i, j)| {
            f1(Point::new(
                d.x0 + i as f64 * d.dx,
                d.y0 + (j as f64 + 0.5) * d.dy,
            ))
        });
        let v2 = Array2::from_shape_fn((d.nx - 1, d.ny), |(i, j)| {
            f2(Point::new(
                d.x0 + (i as f64 + 0.5) * d.dx,
                d.y0 + j as f64 * d.dy,
            ))
        });
        VectorField { domain, v1, v2 }
    }

    /// Location of a component-1 sample.
    #[inline]
    pub fn loc1(&self, i: usize, j: usize) -> Point {
        Point::new(
            self.domain.x0 + i as f64 * self.domain.dx,
            self.domain.y0 + (j as f64 + 0.5) * self.domain.dy,
        )
    }

    /// Location of a component-2 sample.
    #[inline]
    pub fn loc2(&self, i: usize, j: usize) -> Point {
        Point::new(
            self.domain.x0 + (i as f64 + 0.5) * self.domain.dx,
            self.domain.y0 + j as f64 * self.domain.dy,
        )
    }

    /// Bilinear sample of the vector at an arbitrary point, each component
    /// interpolated on its own staggered lattice (clamped at the lattice hull).
    pub fn interp(&self, p: Point) -> (f64, f64) {
        let d = &self.domain;
        let u = sample_lattice(&self.v1, (p.x - d.x0) / d.dx, (p.y - d.y0) / d.dy - 0.5);
        let v = sample_lattice(&self.v2, (p.x - d.x0) / d.dx - 0.5, (p.y - d.y0) / d.dy);
        (u, v)
    }

    pub fn sup_norm(&self) -> f64 {
        let m1 = self.v1.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let m2 = self.v2.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        m1.max(m2)
    }
}

/// Bilinear sample on a bare lattice given fractional indices, clamped.
#[inline]
fn sample_lattice(a: &Array2<f64>, fx: f64, fy: f64) -> f64 {
    let (ni, nj) = a.dim();
    let fx = fx.clamp(0.0, (ni - 1) as f64);
    let fy = fy.clamp(0.0, (nj - 1) as f64);
    let i0 = (fx.floor() as usize).min(ni - 1);
    let j0 = (fy.floor() as usize).min(nj - 1);
    bilin(a, i0, j0, fx - i0 as f64, fy - j0 as f64)
}

#[inline]
fn bilin(a: &Array2<f64>, i0: usize, j0: usize, tx: f64, ty: f64) -> f64 {
    let (ni, nj) = a.dim();
    let i1 = (i0 + 1).min(ni - 1);
    let j1 = (j0 + 1).min(nj - 1);
    let p = a[[i0, j0]] * (1.0 - tx) + a[[i1, j0]] * tx;
    let q = a[[i0, j1]] * (1.0 - tx) + a[[i1, j1]] * tx;
    p * (1.0 - ty) + q * ty
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rectangle_geometry() {
        let d = Domain::unit_square(33).unwrap();
        assert_eq!(d.nx, 33);
        assert!((d.dx - 1.0 / 32.0).abs() < 1e-15);
        assert!((d.diameter - 2.0_f64.sqrt()).abs() < 1e-12);
        let c = d.center();
        assert!((c.x - 0.5).abs() < 1e-15 && (c.y - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_degenerate_grids() {
        assert!(Domain::rectangle(0.0, 0.0, 0.0, 1.0, 4, 4).is_err());
        assert!(Domain::rectangle(0.0, 0.0, 0.1, 0.1, 1, 4).is_err());
    }

    #[test]
    fn disk_mask_includes_center_excludes_corner() {
        let d = Domain::disk(Point::new(0.0, 0.0), 1.0, 33).unwrap();
        let m = d.mask().unwrap();
        assert!(m[[16, 16]]); // center
        assert!(!m[[0, 0]]); // corner of bounding box
        assert!((d.diameter - 2.0).abs() < 1e-12);
    }

    #[test]
    fn masked_diameter_matches_brute_force() {
        let d = Domain::disk(Point::new(0.0, 0.0), 0.5, 17).unwrap();
        let pts = d.points();
        let mut best: f64 = 0.0;
        for (a, p) in pts.iter().enumerate() {
            for q in pts.iter().skip(a + 1) {
                best = best.max(p.dist(*q));
            }
        }
        // within one spacing of the nominal diameter
        assert!((best - d.diameter).abs() <= d.spacing() + 1e-12);
    }

    #[test]
    fn bilinear_reproduces_bilinear_functions() {
        let d = Domain::unit_square(17).unwrap();
        let f = SampledField::from_fn(d, |p| 2.0 + 3.0 * p.x - p.y + 0.5 * p.x * p.y).unwrap();
        let p = Point::new(0.3141, 0.2718);
        let exact = 2.0 + 3.0 * p.x - p.y + 0.5 * p.x * p.y;
        assert!((f.interp(p) - exact).abs() < 1e-13);
    }

    #[test]
    fn interp_clamps_outside_points() {
        let d = Domain::unit_square(9).unwrap();
        let f = SampledField::from_fn(d, |p| p.x).unwrap();
        assert!((f.interp(Point::new(1.5, 0.5)) - 1.0).abs() < 1e-14);
        assert!((f.interp(Point::new(-0.5, 0.5)) - 0.0).abs() < 1e-14);
    }

    #[test]
    fn staggered_sampling_locations() {
        let d = Domain::unit_square(5).unwrap();
        let v = VectorField::from_fns(d, |p| p.y, |p| p.x);
        // v1 at (x_i, y_j + dy/2): first sample is y = dy/2
        assert!((v.v1[[0, 0]] - 0.125).abs() < 1e-15);
        // v2 at (x_i + dx/2, y_j): first sample is x = dx/2
        assert!((v.v2[[0, 0]] - 0.125).abs() < 1e-15);
    }

    #[test]
    fn vector_interp_linear_exact() {
        let d = Domain::unit_square(17).unwrap();
        let v = VectorField::from_fns(d, |p| 1.0 + p.x + 2.0 * p.y, |p| p.x - p.y);
        let p = Point::new(0.4, 0.6);
        let (u1, u2) = v.interp(p);
        assert!((u1 - (1.0 + 0.4 + 1.2)).abs() < 1e-13);
        assert!((u2 - (0.4 - 0.6)).abs() < 1e-13);
    }

    #[test]
    fn rejects_non_finite_values() {
        let d = Domain::unit_square(5).unwrap();
        let mut vals = Array2::zeros((5, 5));
        vals[[2, 2]] = f64::NAN;
        assert!(SampledField::new(d, vals).is_err());
    }
}
