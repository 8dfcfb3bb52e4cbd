//! Moduli of continuity on sampled fields.
//!
//! The discrete modulus at radius `r` is the max of `|f(x) - f(y)|` over node
//! pairs with `|x - y| <= r` (global), over pairs anchored at a point (ball),
//! or over an annular shell about an anchor (sphere). All inclusion tests
//! compare squared distances against squared radii, so an optimized pass and
//! a naive double loop see exactly the same pair sets and produce bit-equal
//! maxima.
//!
//! The optimized pass groups pairs by lattice offset class: all pairs with
//! node offset `(di, dj)` share one distance, so each class is scanned once
//! and its maximum difference is filed into the distance bucket of the class.
//! This turns the per-radius `O(N^2)` rescan into a single `O(N^2)` sweep.

use crate::error::{Error, Result};
use crate::grid::{Point, SampledField};
use serde::{Deserialize, Serialize};

/// Which supremum a [`ModulusProfile`] tabulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModulusKind {
    Global,
    Pointwise,
    Sphere,
}

/// Monotone table `r -> omega(r)` of a modulus of continuity.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModulusProfile {
    pub radii: Vec<f64>,
    pub omegas: Vec<f64>,
    pub kind: ModulusKind,
    pub anchor: Option<Point>,
    /// Set when a query radius exceeded the largest pair distance, so the
    /// tail of the table is a clamped copy of the last attained supremum.
    pub clamped: bool,
    /// Number of empty shells (sphere kind only); their omega is zero.
    pub empty_shells: usize,
}

impl ModulusProfile {
    /// Piecewise-linear evaluation; below the first node the profile is
    /// interpolated from `(0, 0)`, beyond the last it is clamped.
    pub fn omega_at(&self, r: f64) -> f64 {
        let n = self.radii.len();
        if r <= 0.0 {
            return 0.0;
        }
        if r >= self.radii[n - 1] {
            return self.omegas[n - 1];
        }
        let k = self.radii.partition_point(|&x| x < r);
        let (r0, w0) = if k == 0 {
            (0.0, 0.0)
        } else {
            (self.radii[k - 1], self.omegas[k - 1])
        };
        let (r1, w1) = (self.radii[k], self.omegas[k]);
        let t = (r - r0) / (r1 - r0);
        w0 + t * (w1 - w0)
    }

    /// True when omegas are nondecreasing (required for global/pointwise).
    pub fn is_monotone(&self) -> bool {
        self.omegas.windows(2).all(|w| w[0] <= w[1])
    }
}

fn validate_radii(radii: &[f64]) -> Result<()> {
    if radii.is_empty() {
        return Err(Error::invalid("radii list must not be empty"));
    }
    if radii[0] <= 0.0 {
        return Err(Error::invalid("radii must be positive"));
    }
    if radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("radii must be strictly increasing"));
    }
    Ok(())
}

/// Default profile radii for a field: bucket edges at integer multiples of
/// the grid spacing, covering the full diameter.
pub fn default_radii(f: &SampledField) -> Vec<f64> {
    let w = f.domain.spacing();
    let k = (f.domain.diameter / w).ceil() as usize + 1;
    (1..=k).map(|i| i as f64 * w).collect()
}

/// Bucket index of a squared distance in the squared radii edge table:
/// the first edge at or above the distance, `len` if beyond the last.
#[inline]
fn bucket(radii_sq: &[f64], d_sq: f64) -> usize {
    radii_sq.partition_point(|&e| e < d_sq)
}

/// Global modulus of continuity at each query radius.
pub fn modulus_global(f: &SampledField, radii: &[f64]) -> Result<ModulusProfile> {
    validate_radii(radii)?;
    let n_included = included_count(f);
    if n_included < 2 {
        return Err(Error::invalid("field must have at least 2 sampled nodes"));
    }
    let radii_sq: Vec<f64> = radii.iter().map(|r| r * r).collect();
    let k = radii.len();
    let mut shells = vec![f64::NEG_INFINITY; k + 1];
    scan_offset_classes(f, |d_sq, class_max| {
        let b = bucket(&radii_sq, d_sq);
        if class_max > shells[b] {
            shells[b] = class_max;
        }
    });
    // prefix max over shells; pairs beyond the last edge only decide the
    // clamped flag
    let mut omegas = Vec::with_capacity(k);
    let mut run: f64 = 0.0;
    for s in shells.iter().take(k) {
        if *s > run {
            run = *s;
        }
        omegas.push(run);
    }
    let clamped = radii_sq[k - 1] > max_pair_distance_sq(f);
    Ok(ModulusProfile {
        radii: radii.to_vec(),
        omegas,
        kind: ModulusKind::Global,
        anchor: None,
        clamped,
        empty_shells: 0,
    })
}

/// Pointwise (ball) modulus about an anchor node.
pub fn modulus_pointwise(f: &SampledField, anchor: Point, radii: &[f64]) -> Result<ModulusProfile> {
    validate_radii(radii)?;
    let (ai, aj) = anchor_index(f, anchor)?;
    let radii_sq: Vec<f64> = radii.iter().map(|r| r * r).collect();
    let k = radii.len();
    let shells = anchor_shell_maxima(f, ai, aj, &radii_sq);
    let mut omegas = Vec::with_capacity(k);
    let mut run: f64 = 0.0;
    for s in shells.iter().take(k) {
        if *s > run {
            run = *s;
        }
        omegas.push(run);
    }
    Ok(ModulusProfile {
        radii: radii.to_vec(),
        omegas,
        kind: ModulusKind::Pointwise,
        anchor: Some(f.domain.node(ai, aj)),
        clamped: false,
        empty_shells: 0,
    })
}

/// Sphere modulus: sup over the annulus `|y - x0| in [r - w/2, r + w/2]`
/// for each query radius. Monotonicity is not expected; empty shells give 0
/// and are counted.
pub fn modulus_sphere(
    f: &SampledField,
    anchor: Point,
    radii: &[f64],
    shell_width: f64,
) -> Result<ModulusProfile> {
    validate_radii(radii)?;
    if shell_width < f.domain.spacing() {
        return Err(Error::invalid(
            "shell width below the grid spacing: shells may contain no samples",
        ));
    }
    let (ai, aj) = anchor_index(f, anchor)?;
    let d = &f.domain;
    let fa = f.values[[ai, aj]];
    let half = 0.5 * shell_width;
    let mut omegas = Vec::with_capacity(radii.len());
    let mut empty = 0usize;
    for &r in radii {
        let lo = (r - half).max(0.0);
        let (lo_sq, hi_sq) = (lo * lo, (r + half) * (r + half));
        let mut best = f64::NEG_INFINITY;
        for i in 0..d.nx {
            for j in 0..d.ny {
                if (i == ai && j == aj) || !d.includes(i, j) {
                    continue;
                }
                let d_sq = d.node(i, j).dist_sq(d.node(ai, aj));
                if d_sq >= lo_sq && d_sq <= hi_sq {
                    let diff = (f.values[[i, j]] - fa).abs();
                    if diff > best {
                        best = diff;
                    }
                }
            }
        }
        if best == f64::NEG_INFINITY {
            empty += 1;
            best = 0.0;
        }
        omegas.push(best);
    }
    Ok(ModulusProfile {
        radii: radii.to_vec(),
        omegas,
        kind: ModulusKind::Sphere,
        anchor: Some(d.node(ai, aj)),
        clamped: false,
        empty_shells: empty,
    })
}

pub(crate) fn included_count(f: &SampledField) -> usize {
    match f.domain.mask() {
        Some(m) => m.iter().filter(|&&b| b).count(),
        None => f.domain.nx * f.domain.ny,
    }
}

pub(crate) fn anchor_index(f: &SampledField, anchor: Point) -> Result<(usize, usize)> {
    let d = &f.domain;
    let (i, j) = d.nearest_node(anchor);
    let p = d.node(i, j);
    let tol = 1e-9 * d.spacing();
    if (p.x - anchor.x).abs() > tol || (p.y - anchor.y).abs() > tol {
        return Err(Error::invalid(format!(
            "anchor ({}, {}) is not a grid node",
            anchor.x, anchor.y
        )));
    }
    if !d.includes(i, j) {
        return Err(Error::invalid("anchor lies outside the domain mask"));
    }
    Ok((i, j))
}

/// Shell maxima (length `radii_sq.len() + 1`, overflow last) for one anchor.
pub(crate) fn anchor_shell_maxima(
    f: &SampledField,
    ai: usize,
    aj: usize,
    radii_sq: &[f64],
) -> Vec<f64> {
    let mut shells = vec![f64::NEG_INFINITY; radii_sq.len() + 1];
    fill_anchor_shells(f, ai, aj, radii_sq, &mut shells);
    shells
}

/// Same, writing into a caller-provided buffer (reset to -inf first).
pub(crate) fn fill_anchor_shells(
    f: &SampledField,
    ai: usize,
    aj: usize,
    radii_sq: &[f64],
    shells: &mut [f64],
) {
    shells.fill(f64::NEG_INFINITY);
    let d = &f.domain;
    let fa = f.values[[ai, aj]];
    let ax = d.x0 + ai as f64 * d.dx;
    let ay = d.y0 + aj as f64 * d.dy;
    for i in 0..d.nx {
        let ddx = d.x0 + i as f64 * d.dx - ax;
        for j in 0..d.ny {
            if (i == ai && j == aj) || !d.includes(i, j) {
                continue;
            }
            let ddy = d.y0 + j as f64 * d.dy - ay;
            let d_sq = ddx * ddx + ddy * ddy;
            let b = bucket(radii_sq, d_sq);
            let diff = (f.values[[i, j]] - fa).abs();
            if diff > shells[b] {
                shells[b] = diff;
            }
        }
    }
}

/// Visit every lattice offset class once with the squared distance of the
/// class and the maximum `|f(x) - f(y)|` over its pairs.
pub(crate) fn scan_offset_classes(f: &SampledField, mut visit: impl FnMut(f64, f64)) {
    let d = &f.domain;
    let v = &f.values;
    let masked = d.mask().is_some();
    for di in 0..d.nx {
        let dj_lo = if di == 0 { 1 } else { -(d.ny as isize - 1) };
        for dj in dj_lo..d.ny as isize {
            let ddx = di as f64 * d.dx;
            let ddy = dj as f64 * d.dy;
            let d_sq = ddx * ddx + ddy * ddy;
            let mut class_max = f64::NEG_INFINITY;
            let (j_lo, j_hi) = if dj >= 0 {
                (0usize, d.ny - dj as usize)
            } else {
                ((-dj) as usize, d.ny)
            };
            for i in 0..d.nx - di {
                for j in j_lo..j_hi {
                    let jj = (j as isize + dj) as usize;
                    if masked && !(d.includes(i, j) && d.includes(i + di, jj)) {
                        continue;
                    }
                    let diff = (v[[i + di, jj]] - v[[i, j]]).abs();
                    if diff > class_max {
                        class_max = diff;
                    }
                }
            }
            if class_max > f64::NEG_INFINITY {
                visit(d_sq, class_max);
            }
        }
    }
}

fn max_pair_distance_sq(f: &SampledField) -> f64 {
    let d = &f.domain;
    match d.mask() {
        None => {
            let w = (d.nx - 1) as f64 * d.dx;
            let h = (d.ny - 1) as f64 * d.dy;
            w * w + h * h
        }
        Some(_) => {
            let pts = d.points();
            let mut m: f64 = 0.0;
            for (a, p) in pts.iter().enumerate() {
                for q in pts.iter().skip(a + 1) {
                    m = m.max(p.dist_sq(*q));
                }
            }
            m
        }
    }
}
