//! Explicit convergence constants and sampled checks of the estimates that
//! combine into the rate bound
//!
//! ```text
//! ‖e^{t(A+zP)} − e^{tQAQ}Q‖ ≤ C₁e^{T₁ Re z} + C₂/(|z| − R),   Re z < −2R, t ∈ [T₁, T₂].
//! ```
//!
//! Radii: `r = 2‖A‖‖P−Q‖` encloses the spectrum of `A + zP` in two disks around
//! `0` and `z`; `R = 2(‖A‖+δ)‖P−Q‖ > r` is the radius of the integration
//! circles. The sup of `‖M(λ)‖ = ‖I + AQ·R(λ,QAQ)‖` over `|λ| = R` is not
//! available in closed form; it is sampled at equispaced points and inflated
//! by [`SUP_SAFETY_FACTOR`]. This is an estimate, not a certified bound.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, ProjectionPair};
use crate::report::CheckReport;
use crate::resolvent::{inner_integral, outer_integral, resolvent_direct, resolvent_zp_closed, Contour, ZpForm};

pub const DEFAULT_M_SAMPLES: usize = 256;
pub const SUP_SAFETY_FACTOR: f64 = 1.05;
/// Relative margin by which `R` must exceed the spectral radius (and, in
/// strict mode, the norm) of `QAQ`.
pub const RADIUS_MARGIN: f64 = 1e-3;
const ON_CIRCLE_SLACK: f64 = 1e-9;
const INTEGRAL_SLACK: f64 = 1e-6;
const FACTORIZATION_RTOL: f64 = 1e-9;
const IDENTITY_RTOL: f64 = 1e-12;

/// Constants of the rate bound for one `(A, P)` and time window `[t1, t2]`.
#[derive(Clone, Debug, Serialize)]
pub struct BoundParams {
    pub delta: f64,
    /// Spectral enclosure radius `2‖A‖‖P−Q‖`.
    pub r: f64,
    /// Integration radius `2(‖A‖+δ)‖P−Q‖`.
    pub big_r: f64,
    pub t1: f64,
    pub t2: f64,
    pub c1: f64,
    pub c2: f64,
    /// Sampled sup of `‖M(λ)‖` on `|λ| = R`, times the safety factor.
    pub sup_m: f64,
    /// The raw sampled sup.
    pub raw_sup_m: f64,
    pub m_samples: usize,
    pub norm_a: f64,
    pub norm_p: f64,
    pub norm_p_minus_q: f64,
    pub spectral_radius_qaq: f64,
    pub norm_qaq: f64,
}

/// First `δ` in `max(1,‖A‖)·2^k`, `k = 0, 1, …`, whose radius
/// `R(δ) = 2(‖A‖+δ)‖P−Q‖` satisfies `R ≥ ρ(1 + 1e-3) + 1e-9`, and in strict mode
/// also `R > ‖QAQ‖(1 + 1e-3)`.
pub fn select_delta_for(norm_a: f64, norm_p_minus_q: f64, spectral_radius_qaq: f64, norm_qaq: f64, strict: bool) -> f64 {
    let mut delta = norm_a.max(1.0);
    loop {
        let big_r = 2.0 * (norm_a + delta) * norm_p_minus_q;
        let radius_ok = big_r >= spectral_radius_qaq * (1.0 + RADIUS_MARGIN) + 1e-9;
        let norm_ok = !strict || big_r > norm_qaq * (1.0 + RADIUS_MARGIN);
        if radius_ok && norm_ok {
            return delta;
        }
        delta *= 2.0;
    }
}

/// Chooses `δ` for `(a, pq)`; see [`select_delta_for`].
pub fn select_delta(a: &Matrix, pq: &ProjectionPair, strict_norm_mode: bool) -> Result<f64> {
    let qaq = pq.compress(a);
    let rho = qaq.spectral_radius()?;
    let norm_qaq = if strict_norm_mode { qaq.operator_norm()? } else { 0.0 };
    Ok(select_delta_for(
        a.operator_norm()?,
        pq.norm_p_minus_q(),
        rho,
        norm_qaq,
        strict_norm_mode,
    ))
}

/// `M(λ) = I + AQ·R(λ, QAQ)`.
pub fn inner_multiplier(lambda: Complex64, a: &Matrix, pq: &ProjectionPair) -> Result<Matrix> {
    let rq = resolvent_direct(lambda, &pq.compress(a))?;
    Ok(&Matrix::identity(a.dim()) + &(&(a * pq.q()) * &rq))
}

pub fn compute_bound_params(a: &Matrix, pq: &ProjectionPair, t1: f64, t2: f64, delta: f64) -> Result<BoundParams> {
    compute_bound_params_with_samples(a, pq, t1, t2, delta, DEFAULT_M_SAMPLES)
}

pub fn compute_bound_params_with_samples(
    a: &Matrix,
    pq: &ProjectionPair,
    t1: f64,
    t2: f64,
    delta: f64,
    m_samples: usize,
) -> Result<BoundParams> {
    if !(t1 > 0.0) || !(t2 >= t1) || !t2.is_finite() {
        return Err(Error::InvalidTimeWindow { t1, t2 });
    }
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::InvalidArgument(format!("delta must be positive, got {delta}")));
    }
    if m_samples == 0 {
        return Err(Error::InvalidArgument("m_samples must be positive".into()));
    }
    let norm_a = a.operator_norm()?;
    let norm_p_minus_q = pq.norm_p_minus_q();
    // (P − Q)² = I forces ‖P − Q‖ ≥ 1
    debug_assert!(norm_p_minus_q >= 1.0 - 1e-12, "‖P − Q‖ = {norm_p_minus_q}");
    let qaq = pq.compress(a);
    let spectral_radius_qaq = qaq.spectral_radius()?;
    let norm_qaq = qaq.operator_norm()?;
    let r = 2.0 * norm_a * norm_p_minus_q;
    let big_r = 2.0 * (norm_a + delta) * norm_p_minus_q;
    if big_r - spectral_radius_qaq < 1e-9 * (1.0 + big_r) {
        return Err(Error::DeltaInsufficient {
            big_r,
            spectral_radius: spectral_radius_qaq,
        });
    }

    let circle = Contour::circle(Complex64::new(0.0, 0.0), big_r)?;
    let norms: Vec<Result<f64>> = circle
        .sample_points(m_samples)
        .into_par_iter()
        .map(|lambda| inner_multiplier(lambda, a, pq)?.operator_norm())
        .collect();
    let mut raw_sup_m: f64 = 0.0;
    for n in norms {
        raw_sup_m = raw_sup_m.max(n?);
    }
    let sup_m = SUP_SAFETY_FACTOR * raw_sup_m;
    let norm_p = pq.norm_p();
    let c1 = big_r * (t1 * big_r).exp() / delta;
    let c2 = big_r * (t2 * big_r).exp() * ((norm_a + delta) / delta) * norm_p * sup_m;
    Ok(BoundParams {
        delta,
        r,
        big_r,
        t1,
        t2,
        c1,
        c2,
        sup_m,
        raw_sup_m,
        m_samples,
        norm_a,
        norm_p,
        norm_p_minus_q,
        spectral_radius_qaq,
        norm_qaq,
    })
}

impl BoundParams {
    /// `C₁e^{T₁ Re z} + C₂/(|z| − R)`, valid for `Re z < −2R` and `t ∈ [T₁, T₂]`.
    pub fn bound(&self, z: Complex64, t: f64) -> Result<f64> {
        convergence_bound(self, z, t)
    }

    pub fn in_validity_region(&self, z: Complex64) -> bool {
        z.re < -2.0 * self.big_r
    }
}

/// The rate bound `C₁e^{T₁ Re z} + C₂/(|z| − R)`.
pub fn convergence_bound(bp: &BoundParams, z: Complex64, t: f64) -> Result<f64> {
    if !(z.re < -2.0 * bp.big_r) {
        return Err(Error::OutsideValidityRegion {
            z,
            limit: -2.0 * bp.big_r,
        });
    }
    if !(t >= bp.t1 && t <= bp.t2) {
        return Err(Error::TimeOutsideWindow { t, t1: bp.t1, t2: bp.t2 });
    }
    Ok(bp.c1 * (bp.t1 * z.re).exp() + bp.c2 / (z.norm() - bp.big_r))
}

fn require_disjoint(z: Complex64, bp: &BoundParams) -> Result<()> {
    if z.norm() <= 2.0 * bp.big_r {
        return Err(Error::CirclesIntersect {
            abs_z: z.norm(),
            two_r: 2.0 * bp.big_r,
        });
    }
    Ok(())
}

fn collect_samples(report: &mut CheckReport, samples: Vec<Result<(f64, Complex64)>>) -> Result<()> {
    for s in samples {
        let (ratio, lambda) = s?;
        report.observe(ratio, Some(lambda));
    }
    Ok(())
}

/// `‖R(λ, A+zP)‖ ≤ 1/δ` on `|λ − z| = R`. Only needs the closed disks of
/// radius `R` around `0` and `z` to be disjoint.
pub fn check_outer_resolvent(
    a: &Matrix,
    pq: &ProjectionPair,
    z: Complex64,
    bp: &BoundParams,
    samples: usize,
) -> Result<CheckReport> {
    require_disjoint(z, bp)?;
    let shifted = a + &pq.p().scale(z);
    let circle = Contour::circle(z, bp.big_r)?;
    let limit = 1.0 / bp.delta;
    let results: Vec<Result<(f64, Complex64)>> = circle
        .sample_points(samples)
        .into_par_iter()
        .map(|lambda| Ok((resolvent_direct(lambda, &shifted)?.operator_norm()? / limit, lambda)))
        .collect();
    let mut report = CheckReport::new("outer-resolvent", 1.0 + ON_CIRCLE_SLACK)
        .with_detail(format!("z={}{:+}i, bound 1/delta={limit:.6e}", z.re, z.im));
    collect_samples(&mut report, results)?;
    Ok(report)
}

/// Norm of the outer contour integral against `R·e^{t(Re z + R)}/δ`, which for
/// `t ≥ T₁` is at most `R·e^{T₁(Re z + R)}/δ`.
pub fn check_outer_integral(
    a: &Matrix,
    pq: &ProjectionPair,
    z: Complex64,
    bp: &BoundParams,
    t: f64,
) -> Result<CheckReport> {
    if !(z.re < -2.0 * bp.big_r) {
        return Err(Error::OutsideValidityRegion {
            z,
            limit: -2.0 * bp.big_r,
        });
    }
    if !(t >= bp.t1) {
        return Err(Error::TimeOutsideWindow { t, t1: bp.t1, t2: f64::INFINITY });
    }
    let measured = outer_integral(t, a, z, pq, bp.big_r)?.operator_norm()?;
    let bound = bp.big_r * (t * (z.re + bp.big_r)).exp() / bp.delta;
    let window_bound = bp.big_r * (bp.t1 * (z.re + bp.big_r)).exp() / bp.delta;
    let ratio = if bound > 0.0 {
        measured / bound
    } else if measured == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    let mut report = CheckReport::new("outer-integral", 1.0 + INTEGRAL_SLACK).with_detail(format!(
        "z={}{:+}i t={t} norm={measured:.6e} bound={bound:.6e} window_bound={window_bound:.6e}",
        z.re, z.im
    ));
    report.observe(ratio, None);
    Ok(report)
}

/// Residual of `R(λ,A+zP) − R(λ,QAQ)Q = R(λ,A+zP)·P·M(λ)` on `|λ| = R`,
/// relative to `1e-9` times the natural scale of the terms.
pub fn check_inner_factorization(
    a: &Matrix,
    pq: &ProjectionPair,
    z: Complex64,
    bp: &BoundParams,
    samples: usize,
) -> Result<CheckReport> {
    require_disjoint(z, bp)?;
    let shifted = a + &pq.p().scale(z);
    let compressed = pq.compress(a);
    let aq = a * pq.q();
    let n = a.dim();
    let circle = Contour::circle(Complex64::new(0.0, 0.0), bp.big_r)?;
    let results: Vec<Result<(f64, Complex64)>> = circle
        .sample_points(samples)
        .into_par_iter()
        .map(|lambda| {
            let r_full = resolvent_direct(lambda, &shifted)?;
            let r_compressed = resolvent_direct(lambda, &compressed)?;
            let r_compressed_q = &r_compressed * pq.q();
            let lhs = &r_full - &r_compressed_q;
            let m = &Matrix::identity(n) + &(&aq * &r_compressed);
            let rhs = &(&r_full * pq.p()) * &m;
            let residual = (&lhs - &rhs).operator_norm()?;
            let scale = 1.0
                + r_full.operator_norm()? * (1.0 + pq.norm_p() * m.operator_norm()?)
                + r_compressed_q.operator_norm()?;
            Ok((residual / (FACTORIZATION_RTOL * scale), lambda))
        })
        .collect();
    let mut report = CheckReport::new("inner-factorization", 1.0)
        .with_detail(format!("z={}{:+}i, residual / (1e-9 scale)", z.re, z.im));
    collect_samples(&mut report, results)?;
    Ok(report)
}

/// `‖R(λ,A+zP)P‖ ≤ ((‖A‖+δ)/δ)·‖P‖/|λ−z|` on `|λ| = R`, plus the identity
/// `R(λ,zP)P = P/(λ−z)` to `1e-12`.
pub fn check_inner_resolvent_p(
    a: &Matrix,
    pq: &ProjectionPair,
    z: Complex64,
    bp: &BoundParams,
    samples: usize,
) -> Result<(CheckReport, CheckReport)> {
    require_disjoint(z, bp)?;
    let shifted = a + &pq.p().scale(z);
    let factor = (bp.norm_a + bp.delta) / bp.delta * pq.norm_p();
    let circle = Contour::circle(Complex64::new(0.0, 0.0), bp.big_r)?;
    let results: Vec<Result<(f64, f64, Complex64)>> = circle
        .sample_points(samples)
        .into_par_iter()
        .map(|lambda| {
            let measured = (&resolvent_direct(lambda, &shifted)? * pq.p()).operator_norm()?;
            let bound = factor / (lambda - z).norm();
            let closed = &resolvent_zp_closed(lambda, z, pq, ZpForm::Short)? * pq.p();
            let expected = pq.p().scale((lambda - z).inv());
            let identity_defect = closed.max_abs_diff(&expected) / (IDENTITY_RTOL * (1.0 + pq.norm_p()));
            Ok((measured / bound, identity_defect, lambda))
        })
        .collect();
    let mut bound_report = CheckReport::new("inner-resolvent-p", 1.0 + ON_CIRCLE_SLACK)
        .with_detail(format!("z={}{:+}i", z.re, z.im));
    let mut identity_report = CheckReport::new("zp-resolvent-times-p", 1.0)
        .with_detail(format!("z={}{:+}i, defect / 1e-12(1+|P|)", z.re, z.im));
    for r in results {
        let (ratio, defect, lambda) = r?;
        bound_report.observe(ratio, Some(lambda));
        identity_report.observe(defect, Some(lambda));
    }
    Ok((bound_report, identity_report))
}

/// Norm of the inner contour integral against
/// `C·R·e^{T₂R}·((‖A‖+δ)/δ)·‖P‖/(|z| − R)` with `C` the (inflated) sampled sup.
pub fn check_inner_integral(
    a: &Matrix,
    pq: &ProjectionPair,
    z: Complex64,
    bp: &BoundParams,
    t: f64,
) -> Result<CheckReport> {
    require_disjoint(z, bp)?;
    if !(t.abs() <= bp.t2) {
        return Err(Error::TimeOutsideWindow { t, t1: -bp.t2, t2: bp.t2 });
    }
    let measured = inner_integral(t, a, z, pq, bp.big_r)?.operator_norm()?;
    let bound = bp.sup_m * bp.big_r * (bp.t2 * bp.big_r).exp() * (bp.norm_a + bp.delta) / bp.delta * bp.norm_p
        / (z.norm() - bp.big_r);
    let mut report = CheckReport::new("inner-integral", 1.0 + ON_CIRCLE_SLACK).with_detail(format!(
        "z={}{:+}i t={t} norm={measured:.6e} bound={bound:.6e} raw_sup_m={:.6e}",
        z.re, z.im, bp.raw_sup_m
    ));
    report.observe(measured / bound, None);
    Ok(report)
}
