//! Composition of a sampled field with a discrete self-map of the domain,
//! plus constructed Hölder maps for the composition checks.

use crate::error::{Error, Result};
use crate::grid::{Domain, Point, SampledField};
use ndarray::Array2;

/// A map from grid nodes into the domain: one target point per node.
#[derive(Debug, Clone)]
pub struct GridMap {
    pub domain: Domain,
    pub tx: Array2<f64>,
    pub ty: Array2<f64>,
}

impl GridMap {
    pub fn from_fn(domain: Domain, map: impl Fn(Point) -> Point) -> GridMap {
        let tx = Array2::from_shape_fn((domain.nx, domain.ny), |(i, j)| map(domain.node(i, j)).x);
        let ty = Array2::from_shape_fn((domain.nx, domain.ny), |(i, j)| map(domain.node(i, j)).y);
        GridMap { domain, tx, ty }
    }

    pub fn identity(domain: Domain) -> GridMap {
        GridMap::from_fn(domain, |p| p)
    }

    /// Rigid rotation about the domain center (an isometry of a disk mask).
    pub fn rotation(domain: Domain, angle: f64) -> GridMap {
        let c = domain.center();
        let (s, co) = angle.sin_cos();
        GridMap::from_fn(domain, move |p| {
            let (dx, dy) = (p.x - c.x, p.y - c.y);
            Point::new(c.x + co * dx - s * dy, c.y + s * dx + co * dy)
        })
    }

    /// Direction-preserving radial power map about the center:
    /// `|p - c| -> shrink * R * (|p - c| / R)^delta` where `R` is half the
    /// domain diameter. For `delta < 1` this is delta-Hölder; `shrink`
    /// controls the Hölder constant.
    pub fn radial_power(domain: Domain, delta: f64, shrink: f64) -> GridMap {
        let c = domain.center();
        let cap = 0.5 * domain.diameter;
        GridMap::from_fn(domain, move |p| {
            let r = p.dist(c);
            if r == 0.0 {
                return c;
            }
            let rr = shrink * cap * (r / cap).powf(delta);
            let scale = rr / r;
            Point::new(c.x + scale * (p.x - c.x), c.y + scale * (p.y - c.y))
        })
    }

    #[inline]
    pub fn target(&self, i: usize, j: usize) -> Point {
        Point::new(self.tx[[i, j]], self.ty[[i, j]])
    }

    /// Empirical Hölder constant of exponent `delta`: max over included node
    /// pairs of `|U(x) - U(y)| / |x - y|^delta`.
    pub fn holder_constant(&self, delta: f64) -> f64 {
        let d = &self.domain;
        let mut nodes = Vec::new();
        for i in 0..d.nx {
            for j in 0..d.ny {
                if d.includes(i, j) {
                    nodes.push((d.node(i, j), self.target(i, j)));
                }
            }
        }
        let mut m: f64 = 0.0;
        for a in 0..nodes.len() {
            for b in a + 1..nodes.len() {
                let num = nodes[a].1.dist(nodes[b].1);
                let den = nodes[a].0.dist(nodes[b].0).powf(delta);
                let q = num / den;
                if q > m {
                    m = q;
                }
            }
        }
        m
    }

    /// Rescale the displacement about the center so the empirical Hölder
    /// constant becomes `target`.
    pub fn normalized_to(mut self, delta: f64, target: f64) -> GridMap {
        let current = self.holder_constant(delta);
        if current == 0.0 {
            return self;
        }
        let c = self.domain.center();
        let s = target / current;
        for i in 0..self.domain.nx {
            for j in 0..self.domain.ny {
                self.tx[[i, j]] = c.x + s * (self.tx[[i, j]] - c.x);
                self.ty[[i, j]] = c.y + s * (self.ty[[i, j]] - c.y);
            }
        }
        self
    }
}

/// Pointwise composition `x -> a(U(x))` with bilinear interpolation off-grid.
///
/// Targets may graze the boundary by up to half a spacing (they are clamped);
/// anything further out is a range error that reports the offenders.
pub fn compose(a: &SampledField, u: &GridMap) -> Result<SampledField> {
    let d = &a.domain;
    if u.domain.nx != d.nx || u.domain.ny != d.ny {
        return Err(Error::invalid("map grid does not match field grid"));
    }
    let slack = 0.5 * d.spacing();
    let mut escape_count = 0usize;
    let mut first_index = 0usize;
    let mut max_excess: f64 = 0.0;
    let mut values = Array2::zeros((d.nx, d.ny));
    for i in 0..d.nx {
        for j in 0..d.ny {
            let t = u.target(i, j);
            let ex = (d.x0 - t.x)
                .max(t.x - d.x_max())
                .max(d.y0 - t.y)
                .max(t.y - d.y_max())
                .max(0.0);
            if ex > slack {
                if escape_count == 0 {
                    first_index = i * d.ny + j;
                }
                escape_count += 1;
                max_excess = max_excess.max(ex);
                continue;
            }
            let (t, _) = d.clamp(t);
            values[[i, j]] = a.interp(t);
        }
    }
    if escape_count > 0 {
        return Err(Error::RangeError {
            count: escape_count,
            first_index,
            max_excess,
        });
    }
    SampledField::new(d.clone(), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::seminorm::{seminorm_cstar, Cutoffs};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn smooth_disk_field(n: usize, seed: u64) -> SampledField {
        let d = Domain::disk(Point::new(0.0, 0.0), 0.5, n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (rng.random::<f64>() * 4.0, rng.random::<f64>() * 4.0);
        SampledField::from_fn(d, |p| (a * p.x + b * p.y).sin()).unwrap()
    }

    #[test]
    fn identity_composition_is_identity() {
        let f = smooth_disk_field(33, 1);
        let u = GridMap::identity(f.domain.clone());
        let g = compose(&f, &u).unwrap();
        let cut = Cutoffs::defaults_for(&f);
        let a = seminorm_cstar(&f, cut).unwrap().value;
        let b = seminorm_cstar(&g, cut).unwrap().value;
        assert!((a - b).abs() <= 1e-12 * (1.0 + a));
    }

    #[test]
    fn rotation_preserves_cstar_on_disk() {
        // rigid rotation is an isometry of the disk (delta = 1)
        for seed in 0..3 {
            let f = smooth_disk_field(65, seed);
            let u = GridMap::rotation(f.domain.clone(), 0.7);
            let g = compose(&f, &u).unwrap();
            let cut = Cutoffs::defaults_for(&f);
            let a = seminorm_cstar(&f, cut).unwrap().value;
            let b = seminorm_cstar(&g, cut).unwrap().value;
            assert!(
                (a - b).abs() <= 0.02 * a,
                "seed {seed}: [f]* = {a}, rotated {b}"
            );
        }
    }

    #[test]
    fn radial_power_map_is_delta_hoelder() {
        let d = Domain::disk(Point::new(0.0, 0.0), 0.5, 33).unwrap();
        let u = GridMap::radial_power(d, 0.5, 1.0);
        let m = u.holder_constant(0.5);
        // the power map on a radius-1/2 disk has a modest constant
        assert!(m < 2.0, "constant {m}");
        let un = u.normalized_to(0.5, 0.8);
        let mn = un.holder_constant(0.5);
        assert!((mn - 0.8).abs() < 1e-9, "normalized constant {mn}");
    }

    #[test]
    fn composition_lemma_bound() {
        // [a o U]* <= (1/delta) [a]* once the map's Hölder constant is
        // normalized below rho^(1-delta); 5% quadrature slack.
        for &delta in &[1.0, 0.75, 0.5] {
            for seed in 0..10 {
                let f = smooth_disk_field(49, seed);
                let cut = Cutoffs::defaults_for(&f);
                let target = 0.9 * cut.rho.powf(1.0 - delta);
                let u = GridMap::radial_power(f.domain.clone(), delta, 1.0)
                    .normalized_to(delta, target);
                let g = compose(&f, &u).unwrap();
                let a = seminorm_cstar(&f, cut).unwrap().value;
                let b = seminorm_cstar(&g, cut).unwrap().value;
                assert!(
                    b <= a / delta * 1.05 + 1e-9,
                    "delta {delta} seed {seed}: composed {b} vs bound {}",
                    a / delta
                );
            }
        }
    }

    #[test]
    fn escaping_map_reports_range_error() {
        let f = smooth_disk_field(17, 0);
        let u = GridMap::from_fn(f.domain.clone(), |p| Point::new(p.x + 10.0, p.y));
        match compose(&f, &u) {
            Err(Error::RangeError { count, .. }) => assert!(count > 0),
            other => panic!("expected range error, got {other:?}"),
        }
    }
}
