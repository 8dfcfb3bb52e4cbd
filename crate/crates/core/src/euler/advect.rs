//! Characteristic tracing: classical RK4 integration of `dU/ds = v(s, U)`
//! with bilinear interpolation in space and linear interpolation in time.

use crate::error::{Error, Result};
use crate::grid::{Domain, Point, VectorField};
use ndarray::Array2;

/// Velocity snapshots at increasing times; sampled linearly in time.
pub struct VelocitySeries {
    pub times: Vec<f64>,
    pub fields: Vec<VectorField>,
}

impl VelocitySeries {
    pub fn new(times: Vec<f64>, fields: Vec<VectorField>) -> Result<VelocitySeries> {
        if times.len() != fields.len() || times.is_empty() {
            return Err(Error::invalid("velocity series needs matching times and fields"));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("velocity series times must increase"));
        }
        Ok(VelocitySeries { times, fields })
    }

    /// Steady series: one snapshot, constant in time.
    pub fn steady(field: VectorField) -> VelocitySeries {
        VelocitySeries {
            times: vec![0.0],
            fields: vec![field],
        }
    }

    pub fn domain(&self) -> &Domain {
        &self.fields[0].domain
    }

    pub fn t_min(&self) -> f64 {
        self.times[0]
    }

    pub fn t_max(&self) -> f64 {
        *self.times.last().unwrap()
    }

    /// Velocity at `(t, p)`; clamped to the series endpoints in time.
    pub fn sample(&self, t: f64, p: Point) -> (f64, f64) {
        let n = self.times.len();
        if n == 1 || t <= self.times[0] {
            return self.fields[0].interp(p);
        }
        if t >= self.times[n - 1] {
            return self.fields[n - 1].interp(p);
        }
        let k = self.times.partition_point(|&x| x <= t) - 1;
        let k = k.min(n - 2);
        let w = (t - self.times[k]) / (self.times[k + 1] - self.times[k]);
        let (a1, a2) = self.fields[k].interp(p);
        let (b1, b2) = self.fields[k + 1].interp(p);
        (a1 + w * (b1 - a1), a2 + w * (b2 - a2))
    }
}

/// Result of one characteristic trace.
#[derive(Debug, Clone, Copy)]
pub struct TraceResult {
    pub point: Point,
    /// Set when any step had to be clamped back into the closed domain.
    pub grazed: bool,
}

/// Integrate the characteristic through `x` from time `t` to time `s` with
/// `steps` RK4 steps. Positions are clamped to the closed bounding rectangle
/// after each step; clamping sets the grazing flag.
pub fn advect_trace(
    v: &VelocitySeries,
    t: f64,
    s: f64,
    x: Point,
    steps: usize,
) -> Result<TraceResult> {
    if steps == 0 {
        return Err(Error::invalid("trace step count must be positive"));
    }
    let dom = v.domain();
    let (mut p, mut grazed) = dom.clamp(x);
    if t == s {
        return Ok(TraceResult { point: p, grazed });
    }
    let h = (s - t) / steps as f64;
    let mut tau = t;
    for _ in 0..steps {
        p = rk4_step(v, tau, p, h);
        let (q, moved) = dom.clamp(p);
        grazed |= moved;
        p = q;
        tau += h;
    }
    Ok(TraceResult { point: p, grazed })
}

#[inline]
fn rk4_step(v: &VelocitySeries, t: f64, p: Point, h: f64) -> Point {
    let (k1x, k1y) = v.sample(t, p);
    let (k2x, k2y) = v.sample(t + 0.5 * h, Point::new(p.x + 0.5 * h * k1x, p.y + 0.5 * h * k1y));
    let (k3x, k3y) = v.sample(t + 0.5 * h, Point::new(p.x + 0.5 * h * k2x, p.y + 0.5 * h * k2y));
    let (k4x, k4y) = v.sample(t + h, Point::new(p.x + h * k3x, p.y + h * k3y));
    Point::new(
        p.x + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
        p.y + h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y),
    )
}

/// Backward flow map: positions `U(s, t, x)` for every grid node `x`, stored
/// at each of the given departure times (ascending, last equals `t`).
pub struct FlowMap {
    pub domain: Domain,
    pub arrival: f64,
    /// Departure times, ascending; `times[last] = arrival` holds positions
    /// `U(t, t, x) = x`.
    pub times: Vec<f64>,
    pub x: Vec<Array2<f64>>,
    pub y: Vec<Array2<f64>>,
    pub grazed: usize,
}

impl FlowMap {
    /// Position array index for a departure time.
    pub fn index_of(&self, s: f64) -> Option<usize> {
        self.times
            .iter()
            .position(|&x| (x - s).abs() <= 1e-12 * (1.0 + s.abs()))
    }

    /// Position of the particle arriving at node `(i, j)`, at departure slot `k`.
    #[inline]
    pub fn position(&self, k: usize, i: usize, j: usize) -> Point {
        Point::new(self.x[k][[i, j]], self.y[k][[i, j]])
    }

    /// Bilinear interpolation of the earliest-time position field at `p`
    /// (used to compose flow maps across solver windows).
    pub fn interp_start(&self, p: Point) -> Point {
        let d = &self.domain;
        let fx = ((p.x - d.x0) / d.dx).clamp(0.0, (d.nx - 1) as f64);
        let fy = ((p.y - d.y0) / d.dy).clamp(0.0, (d.ny - 1) as f64);
        let i0 = (fx.floor() as usize).min(d.nx - 2);
        let j0 = (fy.floor() as usize).min(d.ny - 2);
        let (tx, ty) = (fx - i0 as f64, fy - j0 as f64);
        let at = |a: &Array2<f64>| {
            let p00 = a[[i0, j0]];
            let p10 = a[[i0 + 1, j0]];
            let p01 = a[[i0, j0 + 1]];
            let p11 = a[[i0 + 1, j0 + 1]];
            (p00 * (1.0 - tx) + p10 * tx) * (1.0 - ty) + (p01 * (1.0 - tx) + p11 * tx) * ty
        };
        Point::new(at(&self.x[0]), at(&self.y[0]))
    }

    /// Max deviation of the discrete Jacobian determinant of `U(s0, t, .)`
    /// from 1, over interior nodes (centered differences).
    pub fn jacobian_defect(&self) -> f64 {
        let d = &self.domain;
        let (ux, uy) = (&self.x[0], &self.y[0]);
        let mut worst: f64 = 0.0;
        for i in 1..d.nx - 1 {
            for j in 1..d.ny - 1 {
                let dxx = (ux[[i + 1, j]] - ux[[i - 1, j]]) / (2.0 * d.dx);
                let dxy = (ux[[i, j + 1]] - ux[[i, j - 1]]) / (2.0 * d.dy);
                let dyx = (uy[[i + 1, j]] - uy[[i - 1, j]]) / (2.0 * d.dx);
                let dyy = (uy[[i, j + 1]] - uy[[i, j - 1]]) / (2.0 * d.dy);
                let det = dxx * dyy - dxy * dyx;
                worst = worst.max((det - 1.0).abs());
            }
        }
        worst
    }
}

/// Trace every grid node backward from `t` through the given departure
/// times (ascending, each `<= t`; `t` itself is appended as the identity
/// slot). One RK4 step spans each consecutive time gap.
pub fn flow_map(v: &VelocitySeries, t: f64, departure_times: &[f64]) -> Result<FlowMap> {
    let dom = v.domain().clone();
    if departure_times.is_empty() {
        return Err(Error::invalid("flow map needs at least one departure time"));
    }
    if departure_times.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("departure times must increase"));
    }
    if *departure_times.last().unwrap() > t + 1e-12 {
        return Err(Error::invalid("departure times must not exceed the arrival time"));
    }
    let mut times: Vec<f64> = departure_times.to_vec();
    let append_identity = (times.last().unwrap() - t).abs() > 1e-12 * (1.0 + t.abs());
    if append_identity {
        times.push(t);
    }
    let m = times.len();
    let mut xs = vec![Array2::zeros((dom.nx, dom.ny)); m];
    let mut ys = vec![Array2::zeros((dom.nx, dom.ny)); m];
    // identity at the arrival slot
    for i in 0..dom.nx {
        for j in 0..dom.ny {
            let p = dom.node(i, j);
            xs[m - 1][[i, j]] = p.x;
            ys[m - 1][[i, j]] = p.y;
        }
    }
    let mut grazed = 0usize;
    // march backward slot by slot
    for k in (0..m - 1).rev() {
        let (t_from, t_to) = (times[k + 1], times[k]);
        for i in 0..dom.nx {
            for j in 0..dom.ny {
                let p = Point::new(xs[k + 1][[i, j]], ys[k + 1][[i, j]]);
                let r = advect_trace(v, t_from, t_to, p, 1)?;
                if r.grazed {
                    grazed += 1;
                }
                xs[k][[i, j]] = r.point.x;
                ys[k][[i, j]] = r.point.y;
            }
        }
    }
    Ok(FlowMap {
        domain: dom,
        arrival: t,
        times,
        x: xs,
        y: ys,
        grazed,
    })
}
