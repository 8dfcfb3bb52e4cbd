//! The four semi-norm families on sampled fields.
//!
//! * `[f]*`   — Dini integral of the global modulus (C* family),
//! * `<f>*`   — sup over anchors of the pointwise-ball Dini integral (B*),
//! * `(f)*`   — sup over anchors of the shell Dini integral (D*),
//! * `[f]_{0;a}` and `[f]_{0,l}` — Hölder-log and Hölder seminorms.
//!
//! The singular `dr/r` integral always carries a strictly positive lower
//! cutoff: a sampled field has no information below the grid scale, so
//! divergence is only ever diagnosed by refining the cutoff, never by
//! evaluating at zero. Reports record the cutoffs they were computed with.

use crate::error::{Error, Result};
use crate::funcspace::modulus::{
    default_radii, fill_anchor_shells, included_count, scan_offset_classes, ModulusProfile,
};
use crate::grid::SampledField;
use serde::{Deserialize, Serialize};

/// Cutoffs and quadrature resolution for the Dini integrals.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Cutoffs {
    /// Lower cutoff of the `dr/r` integral.
    pub r_lo: f64,
    /// Upper cutoff.
    pub rho: f64,
    /// Number of log-spaced trapezoid nodes (odd; default 513).
    pub quad_nodes: usize,
}

impl Cutoffs {
    /// Spec defaults: `r_lo = 2 * spacing`, `rho = diameter / 2`.
    pub fn defaults_for(f: &SampledField) -> Cutoffs {
        Cutoffs {
            r_lo: 2.0 * f.domain.spacing(),
            rho: 0.5 * f.domain.diameter,
            quad_nodes: 513,
        }
    }

    pub fn with_r_lo(mut self, r_lo: f64) -> Self {
        self.r_lo = r_lo;
        self
    }

    pub fn with_rho(mut self, rho: f64) -> Self {
        self.rho = rho;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.r_lo > 0.0) {
            return Err(Error::invalid(
                "lower cutoff must be positive: the dr/r integrand is singular at 0",
            ));
        }
        if !(self.rho > self.r_lo) {
            return Err(Error::invalid("upper cutoff must exceed the lower cutoff"));
        }
        if self.quad_nodes < 5 {
            return Err(Error::invalid("need at least 5 quadrature nodes"));
        }
        Ok(())
    }
}

/// A quadrature value with a conservative error estimate (full- vs
/// half-resolution trapezoid difference).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Quadrature {
    pub value: f64,
    pub error_bound: f64,
}

/// Trapezoid rule for `int omega(r) dr / r` on log-spaced nodes, with the
/// piecewise-linear profile evaluation folded into fixed nonnegative weights.
/// Applying one plan to pointwise-ordered tables preserves the order exactly.
struct QuadPlan {
    terms: Vec<(usize, f64)>,
}

impl QuadPlan {
    /// `radii` is the profile node table the plan will index into.
    fn new(radii: &[f64], r_lo: f64, r_hi: f64, nodes: usize, stride: usize) -> QuadPlan {
        let m = (nodes - 1) / stride + 1;
        let ts: Vec<f64> = (0..m)
            .map(|j| {
                let u = j as f64 / (m - 1) as f64;
                r_lo * (r_hi / r_lo).powf(u)
            })
            .collect();
        let mut terms = Vec::new();
        for j in 0..m {
            let w = match j {
                0 => 0.5 * (ts[1] - ts[0]),
                _ if j == m - 1 => 0.5 * (ts[m - 1] - ts[m - 2]),
                _ => 0.5 * (ts[j + 1] - ts[j - 1]),
            };
            let c = w / ts[j]; // trapezoid weight of omega(t)/t
            let t = ts[j];
            let n = radii.len();
            if t >= radii[n - 1] {
                terms.push((n - 1, c));
            } else {
                let k = radii.partition_point(|&x| x < t);
                if k == 0 {
                    // segment from the virtual (0, 0) node
                    terms.push((0, c * t / radii[0]));
                } else {
                    let (r0, r1) = (radii[k - 1], radii[k]);
                    let s = (t - r0) / (r1 - r0);
                    terms.push((k - 1, c * (1.0 - s)));
                    terms.push((k, c * s));
                }
            }
        }
        QuadPlan { terms }
    }

    fn apply(&self, omegas: &[f64]) -> f64 {
        let mut acc = 0.0;
        for &(k, w) in &self.terms {
            acc += w * omegas[k];
        }
        acc
    }
}

/// Dini integral of a modulus profile over `[r_lo, r_hi]`.
pub fn dini_integral(
    profile: &ModulusProfile,
    r_lo: f64,
    r_hi: f64,
    nodes: usize,
) -> Result<Quadrature> {
    let cut = Cutoffs {
        r_lo,
        rho: r_hi,
        quad_nodes: nodes,
    };
    cut.validate()?;
    let full = QuadPlan::new(&profile.radii, r_lo, r_hi, nodes, 1);
    let half = QuadPlan::new(&profile.radii, r_lo, r_hi, nodes, 2);
    let value = full.apply(&profile.omegas);
    let coarse = half.apply(&profile.omegas);
    Ok(Quadrature {
        value,
        error_bound: (value - coarse).abs() + f64::EPSILON * value.abs(),
    })
}

/// All pairwise semi-norms of one field computed in a single sweep, at shared
/// cutoffs. The shared sweep is what makes `(f)* <= <f>* <= [f]*` exact.
#[derive(Debug, Clone)]
pub struct PairwiseSeminorms {
    pub cstar: Quadrature,
    pub bstar: Quadrature,
    pub dstar: Quadrature,
    pub bstar_anchor: Option<(usize, usize)>,
    pub dstar_anchor: Option<(usize, usize)>,
}

pub fn pairwise_seminorms(f: &SampledField, cutoffs: Cutoffs) -> Result<PairwiseSeminorms> {
    cutoffs.validate()?;
    if included_count(f) < 2 {
        return Err(Error::invalid("field must have at least 2 sampled nodes"));
    }
    let radii = default_radii(f);
    let radii_sq: Vec<f64> = radii.iter().map(|r| r * r).collect();
    let k = radii.len();
    let full = QuadPlan::new(&radii, cutoffs.r_lo, cutoffs.rho, cutoffs.quad_nodes, 1);
    let half = QuadPlan::new(&radii, cutoffs.r_lo, cutoffs.rho, cutoffs.quad_nodes, 2);

    let d = &f.domain;
    let mut shells = vec![f64::NEG_INFINITY; k + 1];
    let mut ball = vec![0.0; k];
    let mut sphere = vec![0.0; k];
    let mut global = vec![f64::NEG_INFINITY; k + 1];
    let mut bstar = Quadrature {
        value: f64::NEG_INFINITY,
        error_bound: 0.0,
    };
    let mut dstar = bstar;
    let mut bstar_anchor = None;
    let mut dstar_anchor = None;

    for i in 0..d.nx {
        for j in 0..d.ny {
            if !d.includes(i, j) {
                continue;
            }
            fill_anchor_shells(f, i, j, &radii_sq, &mut shells);
            let mut run: f64 = 0.0;
            for b in 0..k {
                if shells[b] > global[b] {
                    global[b] = shells[b];
                }
                if shells[b] > run {
                    run = shells[b];
                }
                ball[b] = run;
                sphere[b] = if shells[b] == f64::NEG_INFINITY {
                    0.0
                } else {
                    shells[b]
                };
            }
            if shells[k] > global[k] {
                global[k] = shells[k];
            }
            let bv = full.apply(&ball);
            if bv > bstar.value {
                bstar = Quadrature {
                    value: bv,
                    error_bound: (bv - half.apply(&ball)).abs(),
                };
                bstar_anchor = Some((i, j));
            }
            let dv = full.apply(&sphere);
            if dv > dstar.value {
                dstar = Quadrature {
                    value: dv,
                    error_bound: (dv - half.apply(&sphere)).abs(),
                };
                dstar_anchor = Some((i, j));
            }
        }
    }

    // global profile: prefix max over shells
    let mut omegas = vec![0.0; k];
    let mut run: f64 = 0.0;
    for b in 0..k {
        if global[b] > run {
            run = global[b];
        }
        omegas[b] = run;
    }
    let cv = full.apply(&omegas);
    let cstar = Quadrature {
        value: cv,
        error_bound: (cv - half.apply(&omegas)).abs(),
    };

    Ok(PairwiseSeminorms {
        cstar,
        bstar,
        dstar,
        bstar_anchor,
        dstar_anchor,
    })
}

/// `[f]*`: Dini integral of the global modulus at the given cutoffs.
pub fn seminorm_cstar(f: &SampledField, cutoffs: Cutoffs) -> Result<Quadrature> {
    cutoffs.validate()?;
    let radii = default_radii(f);
    let prof = crate::funcspace::modulus::modulus_global(f, &radii)?;
    dini_integral(&prof, cutoffs.r_lo, cutoffs.rho, cutoffs.quad_nodes)
}

/// `<f>*`: sup over anchors of the pointwise Dini integral.
pub fn seminorm_bstar(f: &SampledField, cutoffs: Cutoffs) -> Result<Quadrature> {
    Ok(pairwise_seminorms(f, cutoffs)?.bstar)
}

/// `(f)*`: sup over anchors of the shell Dini integral. The discrete sphere
/// is the annulus partition of width one spacing.
pub fn seminorm_dstar(f: &SampledField, cutoffs: Cutoffs) -> Result<Quadrature> {
    Ok(pairwise_seminorms(f, cutoffs)?.dstar)
}

/// Hölder seminorm `max |f(x)-f(y)| / |x-y|^lambda`, `lambda` in (0, 1].
pub fn seminorm_holder(f: &SampledField, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::invalid("Hölder exponent must lie in (0, 1]"));
    }
    let mut m: f64 = 0.0;
    scan_offset_classes(f, |d_sq, class_max| {
        let q = class_max / d_sq.sqrt().powf(lambda);
        if q > m {
            m = q;
        }
    });
    Ok(m)
}

/// Hölder-log seminorm `max |f(x)-f(y)| (-log |x-y|)^alpha` over pairs with
/// `|x-y| < 1`, `alpha > 0`.
pub fn seminorm_holderlog(f: &SampledField, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::invalid("log-Hölder exponent must be positive"));
    }
    let mut m: f64 = 0.0;
    scan_offset_classes(f, |d_sq, class_max| {
        let dist = d_sq.sqrt();
        if dist >= 1.0 {
            return;
        }
        let q = class_max * (-dist.ln()).powf(alpha);
        if q > m {
            m = q;
        }
    });
    Ok(m)
}

/// All computed semi-norms of a field plus the cutoffs used.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeminormReport {
    pub sup: f64,
    pub cstar: f64,
    pub bstar: f64,
    pub dstar: f64,
    /// Largest of the three Dini quadrature error estimates.
    pub quad_error: f64,
    /// `(lambda, value)` pairs.
    pub holder: Vec<(f64, f64)>,
    /// `(alpha, value)` pairs.
    pub holderlog: Vec<(f64, f64)>,
    pub r_lo: f64,
    pub rho: f64,
    pub quad_nodes: usize,
}

impl SeminormReport {
    /// Ordering and sign invariants; the ordering is exact at shared cutoffs.
    pub fn validate(&self) -> Result<()> {
        let tol = 1e-12 * (1.0 + self.cstar.abs());
        if self.dstar > self.bstar + tol || self.bstar > self.cstar + tol {
            return Err(Error::InvariantViolation(format!(
                "seminorm ordering violated: ({}) <= <{}> <= [{}] expected",
                self.dstar, self.bstar, self.cstar
            )));
        }
        let all = [self.sup, self.cstar, self.bstar, self.dstar];
        if all.iter().any(|v| *v < 0.0 || !v.is_finite()) {
            return Err(Error::InvariantViolation(
                "semi-norms must be finite and nonnegative".into(),
            ));
        }
        Ok(())
    }
}

/// Compute a full report at the given cutoffs.
pub fn seminorm_report(
    f: &SampledField,
    cutoffs: Cutoffs,
    holder_lambdas: &[f64],
    holderlog_alphas: &[f64],
) -> Result<SeminormReport> {
    let pw = pairwise_seminorms(f, cutoffs)?;
    let holder = holder_lambdas
        .iter()
        .map(|&l| seminorm_holder(f, l).map(|v| (l, v)))
        .collect::<Result<Vec<_>>>()?;
    let holderlog = holderlog_alphas
        .iter()
        .map(|&a| seminorm_holderlog(f, a).map(|v| (a, v)))
        .collect::<Result<Vec<_>>>()?;
    let report = SeminormReport {
        sup: f.sup_norm(),
        cstar: pw.cstar.value,
        bstar: pw.bstar.value,
        dstar: pw.dstar.value,
        quad_error: pw
            .cstar
            .error_bound
            .max(pw.bstar.error_bound)
            .max(pw.dstar.error_bound),
        holder,
        holderlog,
        r_lo: cutoffs.r_lo,
        rho: cutoffs.rho,
        quad_nodes: cutoffs.quad_nodes,
    };
    report.validate()?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::modulus::{modulus_global, ModulusKind};
    use crate::funcspace::oracle;
    use crate::grid::Domain;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    /// Dyadic spacing keeps all pair distances exact, so bitwise comparisons
    /// against the oracle are meaningful.
    fn dyadic_field(n: usize, seed: u64) -> SampledField {
        let d = Domain::rectangle(0.0, 0.0, 1.0 / 32.0, 1.0 / 32.0, n, n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = ndarray::Array2::from_shape_fn((n, n), |_| rng.random::<f64>() - 0.5);
        SampledField::new(d, values).unwrap()
    }

    fn smooth_field(n: usize, seed: u64) -> SampledField {
        let d = Domain::unit_square(n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (
            rng.random::<f64>() * 3.0,
            rng.random::<f64>() * 2.0,
            rng.random::<f64>(),
        );
        SampledField::from_fn(d, |p| {
            (a * p.x + b * p.y).sin() + c * (2.0 * p.x * p.y).cos()
        })
        .unwrap()
    }

    fn profile_from_fn(omega: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> ModulusProfile {
        let radii: Vec<f64> = (0..n)
            .map(|j| lo * (hi / lo).powf(j as f64 / (n - 1) as f64))
            .collect();
        let omegas = radii.iter().map(|&r| omega(r)).collect();
        ModulusProfile {
            radii,
            omegas,
            kind: ModulusKind::Global,
            anchor: None,
            clamped: false,
            empty_shells: 0,
        }
    }

    #[test]
    fn dini_of_zero_profile_is_zero() {
        let prof = profile_from_fn(|_| 0.0, 1e-3, 1.0, 64);
        let q = dini_integral(&prof, 1e-2, 0.5, 513).unwrap();
        assert_eq!(q.value, 0.0);
    }

    #[test]
    fn dini_of_linear_profile_is_range() {
        // omega(r) = r: integrand is 1, trapezoid exact
        let prof = profile_from_fn(|r| r, 1e-3, 1.0, 512);
        let q = dini_integral(&prof, 0.02, 0.75, 513).unwrap();
        assert!((q.value - 0.73).abs() < 1e-6, "value {}", q.value);
    }

    #[test]
    fn dini_of_sqrt_profile_matches_analytic() {
        // omega(r) = r^1/2 on [0.01, 0.5]: integral = (b^l - a^l)/l = 1.2142...
        let prof = profile_from_fn(|r| r.sqrt(), 1e-4, 1.0, 2048);
        let q = dini_integral(&prof, 0.01, 0.5, 513).unwrap();
        let exact = (0.5_f64.sqrt() - 0.01_f64.sqrt()) / 0.5;
        assert!((q.value - exact).abs() < 1e-4, "{} vs {exact}", q.value);
        assert!(q.error_bound < 1e-4);
    }

    #[test]
    fn dini_rejects_zero_cutoff() {
        let prof = profile_from_fn(|r| r, 1e-3, 1.0, 64);
        assert!(dini_integral(&prof, 0.0, 0.5, 513).is_err());
    }

    #[test]
    fn cstar_of_constant_is_zero() {
        let d = Domain::unit_square(17).unwrap();
        let f = SampledField::from_fn(d, |_| 1.0).unwrap();
        let cut = Cutoffs::defaults_for(&f);
        assert_eq!(seminorm_cstar(&f, cut).unwrap().value, 0.0);
    }

    #[test]
    fn cstar_of_holder_field_matches_analytic() {
        // f = |p - c|^l has omega(r) = r^l (L = 1), so
        // [f]* ~ (rho^l - r_lo^l)/l. Larger r_lo keeps the profile out of the
        // grid-resolution regime.
        let d = Domain::unit_square(129).unwrap();
        let c = d.center();
        let lam = 0.5;
        let f = SampledField::from_fn(d, |p| p.dist(c).powf(lam)).unwrap();
        let cut = Cutoffs::defaults_for(&f).with_r_lo(16.0 / 128.0);
        let got = seminorm_cstar(&f, cut).unwrap().value;
        let exact = (cut.rho.powf(lam) - cut.r_lo.powf(lam)) / lam;
        assert!(
            (got - exact).abs() < 0.05 * exact,
            "got {got}, analytic {exact}"
        );
    }

    #[test]
    fn ordering_chain_is_exact_at_shared_cutoffs() {
        for seed in 0..30 {
            let f = if seed % 2 == 0 {
                dyadic_field(16, seed)
            } else {
                smooth_field(21, seed)
            };
            let cut = Cutoffs::defaults_for(&f);
            let pw = pairwise_seminorms(&f, cut).unwrap();
            assert!(
                pw.dstar.value <= pw.bstar.value + 1e-12,
                "seed {seed}: ({}) > <{}>",
                pw.dstar.value,
                pw.bstar.value
            );
            assert!(
                pw.bstar.value <= pw.cstar.value + 1e-12,
                "seed {seed}: <{}> > [{}]",
                pw.bstar.value,
                pw.cstar.value
            );
        }
    }

    #[test]
    fn bstar_below_cstar_on_smooth_fields() {
        for seed in 0..10 {
            let f = smooth_field(17, seed);
            let cut = Cutoffs::defaults_for(&f);
            let b = seminorm_bstar(&f, cut).unwrap().value;
            let c = seminorm_cstar(&f, cut).unwrap().value;
            assert!(b <= c + 1e-12);
        }
    }

    #[test]
    fn cstar_from_sweep_matches_modulus_route() {
        // the one-sweep engine and the explicit global-profile route agree
        for seed in 0..5 {
            let f = dyadic_field(14, seed);
            let cut = Cutoffs::defaults_for(&f);
            let a = pairwise_seminorms(&f, cut).unwrap().cstar.value;
            let b = seminorm_cstar(&f, cut).unwrap().value;
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn rho_rescaling_inequality() {
        // [f]_{*,r1} <= [f]_{*,r2} <= [f]_{*,r1} + 2 log(r2/r1) ||f||
        for seed in 0..10 {
            let f = smooth_field(17, seed);
            let sup = f.sup_norm();
            let base = Cutoffs::defaults_for(&f);
            for (r1, r2) in [(0.2, 0.4), (0.25, 0.7), (0.1, 0.6)] {
                let q1 = seminorm_cstar(&f, base.with_rho(r1)).unwrap();
                let q2 = seminorm_cstar(&f, base.with_rho(r2)).unwrap();
                let tol = q1.error_bound + q2.error_bound + 1e-12;
                assert!(q1.value <= q2.value + tol, "seed {seed}");
                let cap = q1.value + 2.0 * (r2 / r1).ln() * sup;
                assert!(q2.value <= cap + tol, "seed {seed}");
            }
        }
    }

    #[test]
    fn homogeneity_is_exact_for_doubling() {
        for seed in 0..5 {
            let f = dyadic_field(12, seed);
            let g = f.map(|v| 2.0 * v);
            let cut = Cutoffs::defaults_for(&f);
            let pf = pairwise_seminorms(&f, cut).unwrap();
            let pg = pairwise_seminorms(&g, cut).unwrap();
            assert_eq!(pg.cstar.value.to_bits(), (2.0 * pf.cstar.value).to_bits());
            assert_eq!(pg.bstar.value.to_bits(), (2.0 * pf.bstar.value).to_bits());
            assert_eq!(pg.dstar.value.to_bits(), (2.0 * pf.dstar.value).to_bits());
            let hf = seminorm_holderlog(&f, 1.5).unwrap();
            let hg = seminorm_holderlog(&g, 1.5).unwrap();
            assert_eq!(hg.to_bits(), (2.0 * hf).to_bits());
        }
    }

    #[test]
    fn triangle_inequality_within_roundoff() {
        for seed in 0..10 {
            let f = smooth_field(15, seed);
            let g = smooth_field(15, seed + 100);
            let mut sum = f.clone();
            sum.values = &f.values + &g.values;
            let cut = Cutoffs::defaults_for(&f);
            let pf = pairwise_seminorms(&f, cut).unwrap();
            let pg = pairwise_seminorms(&g, cut).unwrap();
            let ps = pairwise_seminorms(&sum, cut).unwrap();
            let tol = 1e-12 * (1.0 + pf.cstar.value + pg.cstar.value);
            assert!(ps.cstar.value <= pf.cstar.value + pg.cstar.value + tol);
            assert!(ps.bstar.value <= pf.bstar.value + pg.bstar.value + tol);
            assert!(ps.dstar.value <= pf.dstar.value + pg.dstar.value + tol);
        }
    }

    #[test]
    fn holder_of_linear_field_is_one() {
        let d = Domain::unit_square(33).unwrap();
        let f = SampledField::from_fn(d, |p| p.x).unwrap();
        let h = seminorm_holder(&f, 1.0).unwrap();
        assert!((h - 1.0).abs() < 1e-12, "h = {h}");
    }

    #[test]
    fn holder_matches_naive_oracle() {
        for seed in 0..5 {
            let f = dyadic_field(12, seed);
            for lam in [0.5, 0.75, 1.0] {
                let fast = seminorm_holder(&f, lam).unwrap();
                let naive = oracle::seminorm_holder_naive(&f, lam);
                assert_eq!(fast.to_bits(), naive.to_bits(), "seed {seed} lam {lam}");
            }
        }
    }

    #[test]
    fn holderlog_matches_naive_oracle() {
        for seed in 0..5 {
            let f = dyadic_field(12, seed);
            for alpha in [0.5, 1.0, 2.0] {
                let fast = seminorm_holderlog(&f, alpha).unwrap();
                let naive = oracle::seminorm_holderlog_naive(&f, alpha);
                assert_eq!(fast.to_bits(), naive.to_bits(), "seed {seed} alpha {alpha}");
            }
        }
    }

    #[test]
    fn holder_chain_bound() {
        // [f]* <= ([f]_{0,l} / l) rho^l + tolerance
        for seed in 0..20 {
            let f = smooth_field(17, seed);
            let cut = Cutoffs::defaults_for(&f);
            let lam = 0.75;
            let h = seminorm_holder(&f, lam).unwrap();
            let c = seminorm_cstar(&f, cut).unwrap();
            // slack covers the trapezoid overestimate of the convex majorant
            let cap = h / lam * (cut.rho.powf(lam) - cut.r_lo.powf(lam));
            let tol = 1e-4 * cap + c.error_bound;
            assert!(c.value <= cap + tol, "seed {seed}: {} vs {cap}", c.value);
        }
    }

    #[test]
    fn holder_rejects_bad_exponents() {
        let f = smooth_field(9, 0);
        assert!(seminorm_holder(&f, 0.0).is_err());
        assert!(seminorm_holder(&f, 1.5).is_err());
        assert!(seminorm_holderlog(&f, 0.0).is_err());
    }

    #[test]
    fn report_round_trips_through_json() {
        let f = smooth_field(17, 1);
        let cut = Cutoffs::defaults_for(&f);
        let rep = seminorm_report(&f, cut, &[0.5, 1.0], &[2.0]).unwrap();
        let text = serde_json::to_string(&rep).unwrap();
        let back: SeminormReport = serde_json::from_str(&text).unwrap();
        assert_eq!(rep.cstar.to_bits(), back.cstar.to_bits());
        assert_eq!(rep.holder.len(), back.holder.len());
        back.validate().unwrap();
    }
}
