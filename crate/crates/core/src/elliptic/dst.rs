//! Discrete sine transforms backed by complex FFTs.
//!
//! Three flavours are needed by the solvers:
//!
//! * DST-I  on interior nodes (Dirichlet boundary on the lattice),
//!   `S_k = sum_j x_j sin(pi j k / (m+1))`, self-inverse up to `(m+1)/2`.
//! * DST-II on half-offset (cell) lattices,
//!   `X_k = sum_j x_j sin(pi (j+1/2) k / n)`, `k = 1..n`.
//! * DST-III, the inverse companion of DST-II (last coefficient halved),
//!   `x_j = X_n (-1)^j / 2 + sum_{k<n} X_k sin(pi (j+1/2) k / n)`;
//!   `dst3(dst2(x)) = (n/2) x`.
//!
//! All are computed by embedding into a complex FFT; the unit tests pin each
//! one against the naive O(n^2) definition.

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use std::collections::HashMap;
use std::sync::Arc;

/// Plan cache for the sine transforms.
pub struct SineTransforms {
    planner: FftPlanner<f64>,
    plans: HashMap<usize, Arc<dyn Fft<f64>>>,
    scratch: Vec<Complex<f64>>,
}

impl Default for SineTransforms {
    fn default() -> Self {
        Self::new()
    }
}

impl SineTransforms {
    pub fn new() -> Self {
        SineTransforms {
            planner: FftPlanner::new(),
            plans: HashMap::new(),
            scratch: Vec::new(),
        }
    }

    fn plan(&mut self, len: usize) -> Arc<dyn Fft<f64>> {
        let planner = &mut self.planner;
        self.plans
            .entry(len)
            .or_insert_with(|| planner.plan_fft_forward(len))
            .clone()
    }

    fn run(&mut self, len: usize, fill: impl Fn(&mut [Complex<f64>])) -> &[Complex<f64>] {
        self.scratch.clear();
        self.scratch.resize(len, Complex::new(0.0, 0.0));
        fill(&mut self.scratch);
        let plan = self.plan(len);
        plan.process(&mut self.scratch);
        &self.scratch
    }

    /// In-place DST-I of length `m` (unnormalized). Applying it twice scales
    /// by `(m+1)/2`.
    pub fn dst1(&mut self, x: &mut [f64]) {
        let m = x.len();
        let len = 2 * (m + 1);
        let spectrum = self.run(len, |buf| {
            for (j, &v) in x.iter().enumerate() {
                buf[j + 1] = Complex::new(v, 0.0);
            }
        });
        for k in 1..=m {
            x[k - 1] = -spectrum[k].im;
        }
    }

    /// In-place DST-II of length `n` (unnormalized); slot `k-1` holds the
    /// coefficient of `sin(pi (j+1/2) k / n)`.
    pub fn dst2(&mut self, x: &mut [f64]) {
        let n = x.len();
        let len = 4 * n;
        let spectrum = self.run(len, |buf| {
            for (j, &v) in x.iter().enumerate() {
                buf[2 * j + 1] = Complex::new(v, 0.0);
            }
        });
        for k in 1..=n {
            x[k - 1] = -spectrum[k].im;
        }
    }

    /// In-place DST-III of length `n` (unnormalized inverse companion of
    /// [`dst2`](Self::dst2)): `dst3(dst2(x)) = (n/2) x`.
    pub fn dst3(&mut self, x: &mut [f64]) {
        let n = x.len();
        let len = 4 * n;
        let last = x[n - 1];
        let spectrum = self.run(len, |buf| {
            for (k, &c) in x.iter().enumerate().take(n - 1) {
                buf[k + 1] = Complex::new(c, 0.0);
            }
            buf[n] = Complex::new(last * 0.5, 0.0);
        });
        for j in 0..n {
            x[j] = -spectrum[2 * j + 1].im;
        }
    }
}

/// Dirichlet eigenvalue of the 1-D second-difference operator on interior
/// nodes: mode `k` of DST-I, `k = 1..m`, spacing `h`.
#[inline]
pub fn eigenvalue_dst1(k: usize, m: usize, h: f64) -> f64 {
    let s = (0.5 * std::f64::consts::PI * k as f64 / (m + 1) as f64).sin();
    4.0 * s * s / (h * h)
}

/// Eigenvalue of the 1-D second-difference operator on a cell lattice with
/// reflection (no-slip) ghosts: mode `k` of DST-II, `k = 1..n`, spacing `h`.
#[inline]
pub fn eigenvalue_dst2(k: usize, n: usize, h: f64) -> f64 {
    let s = (0.5 * std::f64::consts::PI * k as f64 / n as f64).sin();
    4.0 * s * s / (h * h)
}
