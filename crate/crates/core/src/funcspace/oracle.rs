//! Naive reference implementations of the pairwise computations.
//!
//! These are the independent oracles the test suites compare against: a
//! per-radius `O(N^2 * |radii|)` double loop over node pairs with the same
//! squared-distance inclusion predicate and the same fixed reduction order
//! as the optimized kernels, but none of their bucketing machinery. They are
//! deliberately simple; do not "improve" them.

use crate::grid::{Point, SampledField};

fn included_points(f: &SampledField) -> Vec<(Point, f64)> {
    let d = &f.domain;
    let mut pts = Vec::new();
    for i in 0..d.nx {
        for j in 0..d.ny {
            if d.includes(i, j) {
                pts.push((d.node(i, j), f.values[[i, j]]));
            }
        }
    }
    pts
}

/// Global modulus by a full pair scan per radius.
pub fn modulus_global_naive(f: &SampledField, radii: &[f64]) -> Vec<f64> {
    let pts = included_points(f);
    let n = pts.len();
    // distances and differences once per pair, scans per radius
    let mut d_sq = Vec::with_capacity(n * (n - 1) / 2);
    let mut diff = Vec::with_capacity(n * (n - 1) / 2);
    for a in 0..n {
        for b in a + 1..n {
            d_sq.push(pts[a].0.dist_sq(pts[b].0));
            diff.push((pts[a].1 - pts[b].1).abs());
        }
    }
    radii
        .iter()
        .map(|r| {
            let r_sq = r * r;
            let mut m: f64 = 0.0;
            for (k, &ds) in d_sq.iter().enumerate() {
                if ds <= r_sq && diff[k] > m {
                    m = diff[k];
                }
            }
            m
        })
        .collect()
}

/// Pointwise (ball) modulus about an anchor by a scan per radius.
pub fn modulus_pointwise_naive(f: &SampledField, anchor: Point, radii: &[f64]) -> Vec<f64> {
    let pts = included_points(f);
    let fa = f.interp(anchor); // anchor is a node, interp returns the node value
    radii
        .iter()
        .map(|r| {
            let r_sq = r * r;
            let mut m: f64 = 0.0;
            for (p, v) in &pts {
                let ds = p.dist_sq(anchor);
                if ds > 0.0 && ds <= r_sq {
                    let diff = (v - fa).abs();
                    if diff > m {
                        m = diff;
                    }
                }
            }
            m
        })
        .collect()
}

/// Sphere modulus about an anchor: annulus `[r - w/2, r + w/2]` per radius.
pub fn modulus_sphere_naive(
    f: &SampledField,
    anchor: Point,
    radii: &[f64],
    shell_width: f64,
) -> Vec<f64> {
    let pts = included_points(f);
    let fa = f.interp(anchor);
    let half = 0.5 * shell_width;
    radii
        .iter()
        .map(|r| {
            let lo = (r - half).max(0.0);
            let (lo_sq, hi_sq) = (lo * lo, (r + half) * (r + half));
            let mut m: f64 = 0.0;
            for (p, v) in &pts {
                let ds = p.dist_sq(anchor);
                if ds > 0.0 && ds >= lo_sq && ds <= hi_sq {
                    let diff = (v - fa).abs();
                    if diff > m {
                        m = diff;
                    }
                }
            }
            m
        })
        .collect()
}

/// Hölder seminorm by full pair scan: `max |f(x)-f(y)| / |x-y|^lambda`.
pub fn seminorm_holder_naive(f: &SampledField, lambda: f64) -> f64 {
    let pts = included_points(f);
    let mut m: f64 = 0.0;
    for a in 0..pts.len() {
        for b in a + 1..pts.len() {
            let d = pts[a].0.dist(pts[b].0);
            let q = (pts[a].1 - pts[b].1).abs() / d.powf(lambda);
            if q > m {
                m = q;
            }
        }
    }
    m
}

/// Hölder-log seminorm by full pair scan over pairs with `|x-y| < 1`:
/// `max |f(x)-f(y)| * (-log |x-y|)^alpha`.
pub fn seminorm_holderlog_naive(f: &SampledField, alpha: f64) -> f64 {
    let pts = included_points(f);
    let mut m: f64 = 0.0;
    for a in 0..pts.len() {
        for b in a + 1..pts.len() {
            let d = pts[a].0.dist(pts[b].0);
            if d >= 1.0 {
                continue;
            }
            let q = (pts[a].1 - pts[b].1).abs() * (-d.ln()).powf(alpha);
            if q > m {
                m = q;
            }
        }
    }
    m
}
