//! Resolvents and the Cauchy-integral functional calculus on circles.
//!
//! Three routes to `R(λ, ·) = (λ − ·)⁻¹` are provided: a direct LU solve, the
//! closed forms for a scaled projection `zP`, and the Neumann series
//! `Σ_k (R(λ,zP)A)^k R(λ,zP)` for `A + zP`. Contour integrals use the
//! trapezoidal rule on circles with node doubling, which converges
//! geometrically for integrands analytic in an annulus around the circle.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bounds::BoundParams;
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, solve_linear, Matrix, ProjectionPair};

/// Largest node count the refinement will reach.
pub const MAX_NODES: usize = 4096;
/// Starting node count used by the exponential integrals.
pub const DEFAULT_NODES: usize = 32;
const QUADRATURE_RTOL: f64 = 1e-10;
const POLE_ATOL: f64 = 1e-14;
const ENCLOSURE_MARGIN: f64 = 1e-6;

/// `(λI − b)⁻¹` by pivoted LU.
pub fn resolvent_direct(lambda: Complex64, b: &Matrix) -> Result<Matrix> {
    solve_linear(&b.shifted_from(lambda), &Matrix::identity(b.dim()))
}

/// Which closed form to use for the resolvent of `zP`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZpForm {
    /// `(λ − zQ) / (λ(λ − z))`
    Short,
    /// `½(1/λ + 1/(λ − z) + z(P − Q)/(λ(λ − z)))`
    Symmetric,
}

/// Resolvent of `zP` at `λ ∉ {0, z}` in closed form.
pub fn resolvent_zp_closed(lambda: Complex64, z: Complex64, pq: &ProjectionPair, form: ZpForm) -> Result<Matrix> {
    if lambda.norm() <= POLE_ATOL || (lambda - z).norm() <= POLE_ATOL {
        return Err(Error::ResolventPole { lambda });
    }
    let denom = lambda * (lambda - z);
    let n = pq.dim();
    Ok(match form {
        ZpForm::Short => {
            let mut m = pq.q().scale(-z);
            for i in 0..n {
                m[(i, i)] += lambda;
            }
            m.scale(denom.inv())
        }
        ZpForm::Symmetric => {
            let diag = (lambda.inv() + (lambda - z).inv()) * 0.5;
            let mut m = (pq.p() - pq.q()).scale(z / denom * 0.5);
            for i in 0..n {
                m[(i, i)] += diag;
            }
            m
        }
    })
}

/// Truncated Neumann series together with its certificate.
#[derive(Clone, Debug)]
pub struct NeumannSeries {
    pub value: Matrix,
    /// Number of summed terms (the `k = 0` term included).
    pub terms: usize,
    /// `q = ‖R(λ,zP)A‖ < 1`.
    pub ratio: f64,
    /// `q^{terms}/(1 − q)·‖R(λ,zP)‖`, a bound on the discarded tail.
    pub tail_bound: f64,
}

/// `R(λ, A + zP) = Σ_k (R(λ,zP)A)^k R(λ,zP)`, summed until the geometric tail
/// bound is at most `tol`.
///
/// `λ` must lie outside both closed disks of radius `r = 2‖A‖‖P − Q‖` around
/// `0` and `z`, which makes the ratio `q` strictly less than one.
pub fn resolvent_neumann(
    lambda: Complex64,
    a: &Matrix,
    z: Complex64,
    pq: &ProjectionPair,
    tol: f64,
) -> Result<NeumannSeries> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let radius = 2.0 * a.operator_norm()? * pq.norm_p_minus_q();
    if lambda.norm() <= radius || (lambda - z).norm() <= radius {
        return Err(Error::InsideExclusionDisks { lambda, radius });
    }
    let base = resolvent_zp_closed(lambda, z, pq, ZpForm::Short)?;
    let step = &base * a;
    let ratio = step.operator_norm()?;
    if ratio >= 1.0 {
        return Err(Error::NeumannNotContractive { ratio });
    }
    let mut tail_bound = ratio / (1.0 - ratio) * base.operator_norm()?;
    let mut value = base.clone();
    let mut term = base;
    let mut terms = 1;
    while tail_bound > tol {
        term = &step * &term;
        value += &term;
        terms += 1;
        tail_bound *= ratio;
    }
    Ok(NeumannSeries {
        value,
        terms,
        ratio,
        tail_bound,
    })
}

/// A positively oriented circle with a starting quadrature node count.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Contour {
    center: Complex64,
    radius: f64,
    nodes: usize,
}

impl Contour {
    /// `nodes` must be a power of two in `8..=4096`.
    pub fn new(center: Complex64, radius: f64, nodes: usize) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidContour(format!("radius must be positive, got {radius}")));
        }
        if !center.re.is_finite() || !center.im.is_finite() {
            return Err(Error::InvalidContour("center must be finite".into()));
        }
        if nodes < 8 || !nodes.is_power_of_two() || nodes > MAX_NODES {
            return Err(Error::InvalidContour(format!(
                "node count must be a power of two in 8..={MAX_NODES}, got {nodes}"
            )));
        }
        Ok(Contour { center, radius, nodes })
    }

    pub fn circle(center: Complex64, radius: f64) -> Result<Self> {
        Contour::new(center, radius, DEFAULT_NODES)
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    /// Unit direction `e^{iθ_j}` of node `j` out of `n`, `θ_j = 2πj/n`.
    fn direction(j: usize, n: usize) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64)
    }

    pub fn node(&self, j: usize, n: usize) -> Complex64 {
        self.center + Contour::direction(j, n) * self.radius
    }

    /// `count` equispaced points on the circle, starting at angle 0.
    pub fn sample_points(&self, count: usize) -> Vec<Complex64> {
        (0..count).map(|j| self.node(j, count)).collect()
    }
}

/// Weighted sum `Σ_j e^{iθ_j} f(λ_j)` over the given node indices, evaluated in
/// parallel and accumulated in index order. Returns the sum and the largest
/// Frobenius norm of an integrand value.
fn weighted_sum<F>(f: &F, c: &Contour, n: usize, indices: &[usize]) -> Result<(Matrix, f64)>
where
    F: Fn(Complex64) -> Result<Matrix> + Sync,
{
    let values: Vec<Result<(Complex64, Matrix)>> = indices
        .par_iter()
        .map(|&j| {
            let w = Contour::direction(j, n);
            f(c.center + w * c.radius).map(|m| (w, m))
        })
        .collect();
    let mut sum: Option<Matrix> = None;
    let mut max_norm: f64 = 0.0;
    for v in values {
        let (w, m) = v?;
        max_norm = max_norm.max(m.frobenius_norm());
        let term = m.scale(w);
        match sum.as_mut() {
            Some(s) => *s += &term,
            None => sum = Some(term),
        }
    }
    let sum = sum.ok_or_else(|| Error::InvalidContour("no quadrature nodes".into()))?;
    Ok((sum, max_norm))
}

/// `(1/2πi)∮_c f(λ) dλ` by the trapezoidal rule on the circle `c`.
///
/// With `λ_j = center + r·e^{iθ_j}` the rule reads `(r/N)·Σ_j e^{iθ_j} f(λ_j)`.
/// The node count is doubled (reusing previous nodes) until two successive
/// estimates differ by at most `1e-10·max(‖I_N‖, r·max_j‖f(λ_j)‖)` in Frobenius
/// norm. The second term is the magnitude scale of the integrand, which also
/// sets the rounding floor of the sum.
pub fn contour_integral<F>(f: F, c: &Contour) -> Result<Matrix>
where
    F: Fn(Complex64) -> Result<Matrix> + Sync,
{
    let mut n = c.nodes;
    let evens: Vec<usize> = (0..n).step_by(2).collect();
    let odds: Vec<usize> = (1..n).step_by(2).collect();
    let (even_sum, max_even) = weighted_sum(&f, c, n, &evens)?;
    let (odd_sum, max_odd) = weighted_sum(&f, c, n, &odds)?;
    let mut max_f = max_even.max(max_odd);
    let coarse = even_sum.scale_real(c.radius / (n / 2) as f64);
    let mut sum = &even_sum + &odd_sum;
    let mut current = sum.scale_real(c.radius / n as f64);
    let mut diff = (&current - &coarse).frobenius_norm();
    loop {
        let scale = current.frobenius_norm().max(c.radius * max_f);
        if !diff.is_finite() || !scale.is_finite() {
            return Err(Error::NonFinite);
        }
        if diff <= QUADRATURE_RTOL * scale {
            return Ok(current);
        }
        if n >= MAX_NODES {
            return Err(Error::QuadratureNotConverged { difference: diff, nodes: n });
        }
        let refined = 2 * n;
        let new_nodes: Vec<usize> = (1..refined).step_by(2).collect();
        let (new_sum, new_max) = weighted_sum(&f, c, refined, &new_nodes)?;
        max_f = max_f.max(new_max);
        sum += &new_sum;
        let next = sum.scale_real(c.radius / refined as f64);
        diff = (&next - &current).frobenius_norm();
        current = next;
        n = refined;
    }
}

/// `e^{tb}` as `(1/2πi)∮ e^{tλ} R(λ, b) dλ`; every eigenvalue of `b` must lie
/// inside the circle by a margin of `1e-6·radius`.
pub fn contour_exp(t: f64, b: &Matrix, c: &Contour) -> Result<Matrix> {
    for &eigenvalue in &eigenvalues(b)?.eigenvalues {
        if (eigenvalue - c.center).norm() >= c.radius * (1.0 - ENCLOSURE_MARGIN) {
            return Err(Error::SpectrumNotEnclosed { eigenvalue });
        }
    }
    contour_integral(|lambda| Ok(resolvent_direct(lambda, b)?.scale((lambda * t).exp())), c)
}

/// The two pieces of `e^{t(A+zP)} − e^{tQAQ}Q` over disjoint circles of radius `R`.
#[derive(Clone, Debug)]
pub struct TwoCircleSplit {
    /// `(1/2πi)∮_{|λ−z|=R} e^{tλ} R(λ, A+zP) dλ`
    pub outer: Matrix,
    /// `(1/2πi)∮_{|λ|=R} e^{tλ} [R(λ, A+zP) − R(λ, QAQ)Q] dλ`
    pub inner: Matrix,
}

impl TwoCircleSplit {
    pub fn sum(&self) -> Matrix {
        &self.outer + &self.inner
    }
}

fn require_disjoint(z: Complex64, big_r: f64) -> Result<()> {
    if z.norm() <= 2.0 * big_r {
        return Err(Error::CirclesIntersect {
            abs_z: z.norm(),
            two_r: 2.0 * big_r,
        });
    }
    Ok(())
}

/// `(1/2πi)∮_{|λ−z|=R} e^{tλ} R(λ, A+zP) dλ`. Requires `|z| > 2R`.
pub fn outer_integral(t: f64, a: &Matrix, z: Complex64, pq: &ProjectionPair, big_r: f64) -> Result<Matrix> {
    require_disjoint(z, big_r)?;
    let shifted = a + &pq.p().scale(z);
    contour_integral(
        |lambda| Ok(resolvent_direct(lambda, &shifted)?.scale((lambda * t).exp())),
        &Contour::circle(z, big_r)?,
    )
}

/// `(1/2πi)∮_{|λ|=R} e^{tλ} [R(λ, A+zP) − R(λ, QAQ)Q] dλ`. Requires `|z| > 2R`.
pub fn inner_integral(t: f64, a: &Matrix, z: Complex64, pq: &ProjectionPair, big_r: f64) -> Result<Matrix> {
    require_disjoint(z, big_r)?;
    let shifted = a + &pq.p().scale(z);
    let compressed = pq.compress(a);
    let q = pq.q();
    contour_integral(
        |lambda| {
            let diff = &resolvent_direct(lambda, &shifted)? - &(&resolvent_direct(lambda, &compressed)? * q);
            Ok(diff.scale((lambda * t).exp()))
        },
        &Contour::circle(Complex64::new(0.0, 0.0), big_r)?,
    )
}

/// Splits the semigroup difference into its outer (around `z`) and inner
/// (around `0`) contour integrals on circles of radius `bp.big_r`. Requires
/// `|z| > 2R`.
pub fn two_circle_split(
    t: f64,
    a: &Matrix,
    z: Complex64,
    pq: &ProjectionPair,
    bp: &BoundParams,
) -> Result<TwoCircleSplit> {
    Ok(TwoCircleSplit {
        outer: outer_integral(t, a, z, pq, bp.big_r)?,
        inner: inner_integral(t, a, z, pq, bp.big_r)?,
    })
}
