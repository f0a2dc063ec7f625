//! Matrix exponentials and the limit semigroup `t ↦ e^{tQAQ}Q`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, ProjectionPair};

const TAYLOR_DEGREE: u32 = 16;
const SCALED_NORM_TARGET: f64 = 0.5;

fn squarings_for(norm: f64, target: f64) -> Result<u32> {
    if !norm.is_finite() {
        return Err(Error::ExpOverflow);
    }
    let mut s = 0u32;
    let mut scaled = norm;
    while scaled > target {
        scaled *= 0.5;
        s += 1;
    }
    Ok(s)
}

/// `e^b` by scaling and squaring around a degree-16 Taylor core.
///
/// The Frobenius norm (an upper bound for the spectral norm) fixes the number
/// of squarings `s` so that `‖b‖/2^s ≤ 1/2`; the Taylor remainder there is
/// below `1e-19` relative. Non-finite intermediates are reported as overflow.
pub fn expm(b: &Matrix) -> Result<Matrix> {
    if !b.is_finite() {
        return Err(Error::NonFinite);
    }
    let s = squarings_for(b.frobenius_norm(), SCALED_NORM_TARGET)?;
    let x = b.scale_real(0.5f64.powi(s as i32));
    let n = b.dim();

    // Horner: I + X(I + X/2(I + X/3(...)))
    let mut p = Matrix::identity(n);
    for k in (1..=TAYLOR_DEGREE).rev() {
        p = &Matrix::identity(n) + &(&x * &p).scale_real(1.0 / k as f64);
    }
    for _ in 0..s {
        p = &p * &p;
        if !p.is_finite() {
            return Err(Error::ExpOverflow);
        }
    }
    if !p.is_finite() {
        return Err(Error::ExpOverflow);
    }
    Ok(p)
}

/// Reference exponential by plain Taylor summation.
///
/// With `ν = sqrt(‖b‖₁‖b‖_∞) ≥ ‖b‖` the argument is halved `s` times until
/// `ν/2^s ≤ 1`, the series is summed term by term until the remainder bound
/// `2·(ν/2^s)^{m+1}/(m+1)!` drops below `tol/2^s`, and the result is squared
/// back. The truncation error of the result is then at most about
/// `tol·e^{‖b‖}`. Kept deliberately separate from [`expm`] (different norm,
/// scaling target, and adaptive degree) so the two can check each other.
pub fn expm_series_oracle(b: &Matrix, tol: f64) -> Result<Matrix> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    if !b.is_finite() {
        return Err(Error::NonFinite);
    }
    let nu = (b.one_norm() * b.inf_norm()).sqrt();
    let s = squarings_for(nu, 1.0)?;
    let factor = 0.5f64.powi(s as i32);
    let x = b.scale_real(factor);
    let nu_scaled = nu * factor;
    let piece_tol = tol * factor;

    let n = b.dim();
    let mut sum = Matrix::identity(n);
    let mut term = Matrix::identity(n);
    let mut bound = 1.0;
    let mut m = 0u32;
    loop {
        m += 1;
        term = (&term * &x).scale_real(1.0 / m as f64);
        sum += &term;
        bound *= nu_scaled / (m + 1) as f64;
        if 2.0 * bound <= piece_tol || nu_scaled == 0.0 {
            break;
        }
    }
    for _ in 0..s {
        sum = &sum * &sum;
        if !sum.is_finite() {
            return Err(Error::ExpOverflow);
        }
    }
    Ok(sum)
}

/// `e^{tQAQ}Q`, the limit of `e^{t(A+zP)}` as `Re z → −∞` (for `t > 0`).
/// Any real `t` is accepted here.
pub fn limit_semigroup(t: f64, a: &Matrix, pq: &ProjectionPair) -> Result<Matrix> {
    let generator = pq.compress(a).scale_real(t);
    Ok(&expm(&generator)? * pq.q())
}

/// `e^{t(A+zP)}`.
pub fn perturbed_semigroup(t: f64, a: &Matrix, z: Complex64, pq: &ProjectionPair) -> Result<Matrix> {
    let generator = a + &pq.p().scale(z);
    expm(&generator.scale_real(t))
}
