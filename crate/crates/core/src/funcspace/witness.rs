//! Witness fields that separate the function-space families.
//!
//! Each kind is a deterministic analytic function sampled on the requested
//! domain:
//!
//! * `constant`, `linear` — trivial baselines;
//! * `holder(l)` — `|p - c|^l`, finite Hölder seminorm with constant about 1;
//! * `holderlog(a)` — `(-log |p - c|)^(-a)` clipped at radius `1/e`; finite
//!   log-Hölder seminorm, Dini iff `a > 1`;
//! * `log_reciprocal` — `1 / log(e * diam / |p - c|)`, continuous but not
//!   Dini (the cutoff-refinement increments of `[f]*` do not decay);
//! * `bump_cascade(depth)` — disjoint radial bumps with geometrically
//!   shrinking radii and heights `1/k`, placed at mutually distant centers:
//!   any single anchor integrates only its own bump at small scales, so
//!   `<f>*` stays bounded while `[f]*` keeps growing with depth;
//! * `eigen_sine` — product sine eigenmode of the Dirichlet Laplacian.

use crate::error::{Error, Result};
use crate::grid::{Domain, Point, SampledField};
use serde::{Deserialize, Serialize};

/// Witness selector, serializable for configs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessKind {
    Constant { value: f64 },
    Linear,
    Holder { lambda: f64 },
    HolderLog { alpha: f64 },
    LogReciprocal,
    BumpCascade { depth: usize },
    EigenSine { amplitude: f64 },
}

impl WitnessKind {
    /// Parse a CLI-style name such as `holder:0.5`, `bump_cascade:3`.
    pub fn parse(s: &str) -> Result<WitnessKind> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let num = |default: f64| -> Result<f64> {
            match arg {
                None => Ok(default),
                Some(a) => a
                    .parse::<f64>()
                    .map_err(|_| Error::invalid(format!("bad witness parameter {a:?}"))),
            }
        };
        match name {
            "constant" => Ok(WitnessKind::Constant { value: num(1.0)? }),
            "linear" => Ok(WitnessKind::Linear),
            "holder" => Ok(WitnessKind::Holder { lambda: num(0.5)? }),
            "holderlog" => Ok(WitnessKind::HolderLog { alpha: num(2.0)? }),
            "log_reciprocal" => Ok(WitnessKind::LogReciprocal),
            "bump_cascade" => Ok(WitnessKind::BumpCascade {
                depth: num(3.0)? as usize,
            }),
            "eigen_sine" => Ok(WitnessKind::EigenSine {
                amplitude: num(1.0)?,
            }),
            other => Err(Error::invalid(format!("unknown witness kind {other:?}"))),
        }
    }
}

/// Geometry of one cascade bump.
#[derive(Debug, Clone, Copy)]
pub struct Bump {
    pub center: Point,
    pub radius: f64,
    pub height: f64,
}

/// Cascade schedule: bump `k` (1-based) has radius `base_radius * ratio^(k-1)`
/// and height `1/k`. The default follows the quarter-ratio schedule; studies
/// that must resolve deep bumps on coarse grids pass a milder ratio.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CascadeParams {
    pub depth: usize,
    pub base_radius: f64,
    pub ratio: f64,
}

impl CascadeParams {
    pub fn new(depth: usize) -> CascadeParams {
        CascadeParams {
            depth,
            base_radius: 0.25,
            ratio: 0.25,
        }
    }

    pub fn with_ratio(mut self, ratio: f64) -> Self {
        self.ratio = ratio;
        self
    }

    pub fn with_base_radius(mut self, r: f64) -> Self {
        self.base_radius = r;
        self
    }
}

/// Fixed center list in unit-square coordinates. The first center is kept
/// far from the rest so the tall bump never crowds the small ones; the rest
/// sit on a coarse sublattice with pairwise separation >= 0.3.
const CASCADE_CENTERS: [(f64, f64); 12] = [
    (0.25, 0.25),
    (0.84375, 0.84375),
    (0.84375, 0.53125),
    (0.53125, 0.84375),
    (0.84375, 0.21875),
    (0.21875, 0.84375),
    (0.59375, 0.59375),
    (0.59375, 0.28125),
    (0.28125, 0.59375),
    (0.96875, 0.65625),
    (0.65625, 0.96875),
    (0.96875, 0.96875),
];

/// Resolve the cascade geometry on a domain; errors if bumps would overlap.
pub fn cascade_bumps(domain: &Domain, params: &CascadeParams) -> Result<Vec<Bump>> {
    if params.depth == 0 || params.depth > CASCADE_CENTERS.len() {
        return Err(Error::invalid(format!(
            "cascade depth must be in 1..={}",
            CASCADE_CENTERS.len()
        )));
    }
    if !(params.ratio > 0.0 && params.ratio < 1.0) {
        return Err(Error::invalid("cascade ratio must lie in (0, 1)"));
    }
    let scale = (domain.x_max() - domain.x0).min(domain.y_max() - domain.y0);
    let bumps: Vec<Bump> = (0..params.depth)
        .map(|k| {
            let (cx, cy) = CASCADE_CENTERS[k];
            Bump {
                center: Point::new(domain.x0 + cx * scale, domain.y0 + cy * scale),
                radius: params.base_radius * params.ratio.powi(k as i32) * scale,
                height: 1.0 / (k + 1) as f64,
            }
        })
        .collect();
    for (a, p) in bumps.iter().enumerate() {
        for q in bumps.iter().skip(a + 1) {
            if p.center.dist(q.center) < p.radius + q.radius {
                return Err(Error::invalid(
                    "cascade bumps overlap; shrink base_radius or ratio",
                ));
            }
        }
    }
    Ok(bumps)
}

/// Quartic compactly supported radial bump profile, `(1 - s^2)^2` on `s <= 1`.
#[inline]
fn bump_profile(s: f64) -> f64 {
    if s >= 1.0 {
        0.0
    } else {
        let t = 1.0 - s * s;
        t * t
    }
}

/// Evaluate the cascade as an analytic function.
pub fn cascade_value(bumps: &[Bump], p: Point) -> f64 {
    let mut v = 0.0;
    for b in bumps {
        v += b.height * bump_profile(p.dist(b.center) / b.radius);
    }
    v
}

/// Generate a witness field on the given domain.
pub fn make_witness(domain: &Domain, kind: WitnessKind) -> Result<SampledField> {
    let c = domain.center();
    let diam = domain.diameter;
    match kind {
        WitnessKind::Constant { value } => SampledField::from_fn(domain.clone(), |_| value),
        WitnessKind::Linear => SampledField::from_fn(domain.clone(), |p| p.x),
        WitnessKind::Holder { lambda } => {
            if !(lambda > 0.0 && lambda <= 1.0) {
                return Err(Error::invalid("Hölder witness exponent must be in (0, 1]"));
            }
            SampledField::from_fn(domain.clone(), move |p| p.dist(c).powf(lambda))
        }
        WitnessKind::HolderLog { alpha } => {
            if !(alpha > 0.0) {
                return Err(Error::invalid("log-Hölder witness exponent must be > 0"));
            }
            let clip = (-1.0_f64).exp();
            SampledField::from_fn(domain.clone(), move |p| {
                let d = p.dist(c).min(clip);
                if d == 0.0 {
                    0.0
                } else {
                    (-d.ln()).powf(-alpha)
                }
            })
        }
        WitnessKind::LogReciprocal => SampledField::from_fn(domain.clone(), move |p| {
            let d = p.dist(c);
            if d == 0.0 {
                0.0
            } else {
                1.0 / (std::f64::consts::E * diam / d).ln()
            }
        }),
        WitnessKind::BumpCascade { depth } => {
            make_cascade_witness(domain, &CascadeParams::new(depth))
        }
        WitnessKind::EigenSine { amplitude } => {
            let (x0, y0) = (domain.x0, domain.y0);
            let w = domain.x_max() - domain.x0;
            let h = domain.y_max() - domain.y0;
            SampledField::from_fn(domain.clone(), move |p| {
                let sx = (std::f64::consts::PI * (p.x - x0) / w).sin();
                let sy = (std::f64::consts::PI * (p.y - y0) / h).sin();
                amplitude * sx * sy
            })
        }
    }
}

/// Cascade witness with explicit schedule parameters.
pub fn make_cascade_witness(domain: &Domain, params: &CascadeParams) -> Result<SampledField> {
    let bumps = cascade_bumps(domain, params)?;
    SampledField::from_fn(domain.clone(), |p| cascade_value(&bumps, p))
}
