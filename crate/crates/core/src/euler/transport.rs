//! Vorticity transport along traced characteristics:
//! `zeta(t, x) = zeta0(U(0, t, x)) + int_0^t phi(s, U(s, t, x)) ds`.

use crate::error::{Error, Result};
use crate::euler::advect::FlowMap;
use crate::grid::{Point, SampledField};
use ndarray::Array2;

/// Scalar forcing snapshots at increasing times, sampled linearly in time.
pub struct ForcingSeries {
    pub times: Vec<f64>,
    pub fields: Vec<SampledField>,
}

impl ForcingSeries {
    pub fn new(times: Vec<f64>, fields: Vec<SampledField>) -> Result<ForcingSeries> {
        if times.len() != fields.len() || times.is_empty() {
            return Err(Error::invalid("forcing series needs matching times and fields"));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("forcing series times must increase"));
        }
        Ok(ForcingSeries { times, fields })
    }

    pub fn sample(&self, t: f64, p: Point) -> f64 {
        let n = self.times.len();
        if n == 1 || t <= self.times[0] {
            return self.fields[0].interp(p);
        }
        if t >= self.times[n - 1] {
            return self.fields[n - 1].interp(p);
        }
        let k = (self.times.partition_point(|&x| x <= t) - 1).min(n - 2);
        let w = (t - self.times[k]) / (self.times[k + 1] - self.times[k]);
        let a = self.fields[k].interp(p);
        let b = self.fields[k + 1].interp(p);
        a + w * (b - a)
    }

    /// Trapezoid of `||phi(s)||` over `[0, t]` on the series' own times.
    pub fn sup_norm_integral(&self, t: f64) -> f64 {
        let mut nodes: Vec<f64> = self.times.iter().cloned().filter(|&s| s < t).collect();
        if nodes.is_empty() || nodes[0] > 0.0 {
            nodes.insert(0, 0.0);
        }
        nodes.push(t);
        let mut acc = 0.0;
        for w in nodes.windows(2) {
            let na = self.sup_at(w[0]);
            let nb = self.sup_at(w[1]);
            acc += 0.5 * (na + nb) * (w[1] - w[0]);
        }
        acc
    }

    fn sup_at(&self, t: f64) -> f64 {
        let n = self.times.len();
        if n == 1 || t <= self.times[0] {
            return self.fields[0].sup_norm();
        }
        if t >= self.times[n - 1] {
            return self.fields[n - 1].sup_norm();
        }
        let k = (self.times.partition_point(|&x| x <= t) - 1).min(n - 2);
        let w = (t - self.times[k]) / (self.times[k + 1] - self.times[k]);
        let a = self.fields[k].sup_norm();
        let b = self.fields[k + 1].sup_norm();
        a + w * (b - a)
    }
}

/// Pull the initial vorticity through the flow map and add the forcing
/// integral along each characteristic (trapezoid over the map's stored
/// departure times).
pub fn transport_vorticity(
    zeta0: &SampledField,
    phi: Option<&ForcingSeries>,
    fm: &FlowMap,
) -> Result<SampledField> {
    let d = &fm.domain;
    if zeta0.domain.nx != d.nx || zeta0.domain.ny != d.ny {
        return Err(Error::invalid("initial vorticity grid does not match flow map"));
    }
    let m = fm.times.len();
    let mut values = Array2::zeros((d.nx, d.ny));
    for i in 0..d.nx {
        for j in 0..d.ny {
            let foot = fm.position(0, i, j);
            let mut z = zeta0.interp(foot);
            if let Some(phi) = phi {
                let mut acc = 0.0;
                for k in 0..m - 1 {
                    let (s0, s1) = (fm.times[k], fm.times[k + 1]);
                    let f0 = phi.sample(s0, fm.position(k, i, j));
                    let f1 = phi.sample(s1, fm.position(k + 1, i, j));
                    acc += 0.5 * (f0 + f1) * (s1 - s0);
                }
                z += acc;
            }
            values[[i, j]] = z;
        }
    }
    SampledField::new(zeta0.domain.clone(), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::advect::{flow_map, VelocitySeries};
    use crate::grid::{Domain, VectorField};

    #[test]
    fn constant_vorticity_stays_constant() {
        let d = Domain::unit_square(33).unwrap();
        let v = VelocitySeries::steady(VectorField::from_fns(
            d.clone(),
            |p| -(p.y - 0.5),
            |p| p.x - 0.5,
        ));
        let times: Vec<f64> = (0..=8).map(|k| k as f64 / 8.0).collect();
        let fm = flow_map(&v, 1.0, &times).unwrap();
        let z0 = SampledField::from_fn(d, |_| 2.5).unwrap();
        let z = transport_vorticity(&z0, None, &fm).unwrap();
        for v in z.values.iter() {
            assert!((v - 2.5).abs() < 1e-14);
        }
    }

    #[test]
    fn spatially_constant_forcing_integrates_in_time() {
        // v = 0: characteristics are stationary, so
        // zeta(t) = zeta0 + int_0^t g(s) ds with g(s) = s
        let d = Domain::unit_square(17).unwrap();
        let v = VelocitySeries::steady(VectorField::zeros(d.clone()));
        let times: Vec<f64> = (0..=16).map(|k| k as f64 / 16.0).collect();
        let fm = flow_map(&v, 1.0, &times).unwrap();
        let phi_fields: Vec<SampledField> = times
            .iter()
            .map(|&s| SampledField::from_fn(d.clone(), move |_| s).unwrap())
            .collect();
        let phi = ForcingSeries::new(times.clone(), phi_fields).unwrap();
        let z0 = SampledField::from_fn(d, |p| p.x).unwrap();
        let z = transport_vorticity(&z0, Some(&phi), &fm).unwrap();
        // int_0^1 s ds = 1/2, trapezoid exact for linear integrands
        let expect = |p: crate::grid::Point| p.x + 0.5;
        for i in 0..17 {
            for j in 0..17 {
                let p = z.domain.node(i, j);
                assert!((z.values[[i, j]] - expect(p)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sup_norm_never_grows_without_forcing() {
        // bilinear pull-back is a convex combination of node values
        let d = Domain::unit_square(33).unwrap();
        let v = VelocitySeries::steady(VectorField::from_fns(
            d.clone(),
            |p| -(p.y - 0.5),
            |p| p.x - 0.5,
        ));
        let times: Vec<f64> = (0..=8).map(|k| k as f64 / 8.0).collect();
        let fm = flow_map(&v, 1.0, &times).unwrap();
        let z0 = SampledField::from_fn(d, |p| (7.0 * p.x).sin() * (3.0 * p.y).cos()).unwrap();
        let z = transport_vorticity(&z0, None, &fm).unwrap();
        assert!(z.sup_norm() <= z0.sup_norm() + 1e-14);
    }

    #[test]
    fn forcing_norm_integral_trapezoid() {
        let d = Domain::unit_square(9).unwrap();
        let times = vec![0.0, 0.5, 1.0];
        let fields = vec![
            SampledField::from_fn(d.clone(), |_| 1.0).unwrap(),
            SampledField::from_fn(d.clone(), |_| 2.0).unwrap(),
            SampledField::from_fn(d, |_| 3.0).unwrap(),
        ];
        let phi = ForcingSeries::new(times, fields).unwrap();
        // int ||phi|| = 0.5*(1+2)/2 + 0.5*(2+3)/2 = 2.0
        assert!((phi.sup_norm_integral(1.0) - 2.0).abs() < 1e-14);
    }
}
