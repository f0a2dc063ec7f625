//! Eigenvalues of dense complex matrices: unitary Hessenberg reduction
//! followed by shifted QR iteration, with a residual certificate.

use num_complex::Complex64;
use serde::Serialize;

use super::{Lu, Matrix};
use crate::error::{Error, Result};

const DEFLATION_RTOL: f64 = 1e-14;
const ITERATIONS_PER_EIGENVALUE: usize = 100;
/// Certified eigenvalues satisfy `σ_min(λI − B) ≤ CERTIFICATE_RTOL·‖B‖`.
pub const CERTIFICATE_RTOL: f64 = 1e-8;

/// All eigenvalues (with multiplicity) and the certificate that backs them.
#[derive(Clone, Debug, Serialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
    /// `max_λ σ_min(λI − B)`.
    pub backward_error: f64,
}

impl Spectrum {
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l.norm()).fold(0.0, f64::max)
    }
}

/// Reduces `b` to upper Hessenberg form by Householder similarity.
pub fn hessenberg(b: &Matrix) -> Matrix {
    let n = b.dim();
    let mut h = b.clone();
    for k in 0..n.saturating_sub(2) {
        let tail_norm = (k + 1..n).map(|i| h[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if tail_norm == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * tail_norm;
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm2;
        // left: H ← (I − β v vᴴ) H
        for j in k..n {
            let s: Complex64 = v.iter().enumerate().map(|(i, vi)| vi.conj() * h[(k + 1 + i, j)]).sum();
            for (i, vi) in v.iter().enumerate() {
                h[(k + 1 + i, j)] -= vi * s * beta;
            }
        }
        // right: H ← H (I − β v vᴴ)
        for i in 0..n {
            let s: Complex64 = v.iter().enumerate().map(|(j, vj)| h[(i, k + 1 + j)] * vj).sum();
            for (j, vj) in v.iter().enumerate() {
                h[(i, k + 1 + j)] -= s * vj.conj() * beta;
            }
        }
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
    h
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half_diff = (a - d) * 0.5;
    let disc = (half_diff * half_diff + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let l1 = mean + disc;
    let l2 = mean - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Eigenvalues without the residual certificate. Used internally where the
/// certificate would recurse (the operator-norm fallback).
pub(crate) fn eigenvalues_uncertified(b: &Matrix) -> Result<Vec<Complex64>> {
    if !b.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = b.dim();
    let mut h = hessenberg(b);
    let mut eig = vec![Complex64::new(0.0, 0.0); n];
    let deflation = DEFLATION_RTOL * h.frobenius_norm();
    let max_its = ITERATIONS_PER_EIGENVALUE * n;
    let mut total_its = 0usize;
    let mut its = 0usize;
    let mut hi = n - 1;
    loop {
        if hi == 0 {
            eig[0] = h[(0, 0)];
            break;
        }
        let mut l = hi;
        while l > 0 {
            if h[(l, l - 1)].norm() <= deflation {
                h[(l, l - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == hi {
            eig[hi] = h[(hi, hi)];
            hi -= 1;
            its = 0;
            continue;
        }
        its += 1;
        total_its += 1;
        if its > max_its {
            return Err(Error::EigenStalled { iterations: total_its });
        }
        let shift = if its.is_multiple_of(10) {
            // exceptional shift to break cycles
            let sub = h[(hi, hi - 1)].norm();
            h[(hi, hi)] + Complex64::new(0.75 * sub, 0.4375 * sub)
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        qr_step(&mut h, l, hi, shift);
    }
    Ok(eig)
}

/// One explicitly shifted QR step `H − μ = QR, H ← RQ + μ` on rows/cols `l..=hi`.
fn qr_step(h: &mut Matrix, l: usize, hi: usize, shift: Complex64) {
    for i in l..=hi {
        h[(i, i)] -= shift;
    }
    let mut rotations = Vec::with_capacity(hi - l);
    for k in l..hi {
        let x = h[(k, k)];
        let y = h[(k + 1, k)];
        let r = x.norm().hypot(y.norm());
        let (c, s) = if r == 0.0 {
            (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
        } else {
            (x / r, y / r)
        };
        for j in k..=hi {
            let a = h[(k, j)];
            let b = h[(k + 1, j)];
            h[(k, j)] = c.conj() * a + s.conj() * b;
            h[(k + 1, j)] = -s * a + c * b;
        }
        rotations.push((c, s));
    }
    for (k, (c, s)) in (l..hi).zip(rotations) {
        for i in l..=(k + 1) {
            let u = h[(i, k)];
            let v = h[(i, k + 1)];
            h[(i, k)] = u * c + v * s;
            h[(i, k + 1)] = -u * s.conj() + v * c.conj();
        }
    }
    for i in l..=hi {
        h[(i, i)] += shift;
    }
}

/// `σ_min(m)`, computed as `1/‖m⁻¹‖`; exactly singular input gives 0.
pub fn smallest_singular_value(m: &Matrix) -> Result<f64> {
    let lu = match Lu::factor(m, 0.0) {
        Ok(lu) => lu,
        Err(Error::Singular { .. }) => return Ok(0.0),
        Err(e) => return Err(e),
    };
    let inv = lu.solve(&Matrix::identity(m.dim()));
    if !inv.is_finite() {
        return Ok(0.0);
    }
    let norm = inv.operator_norm()?;
    Ok(if norm.is_finite() && norm > 0.0 { 1.0 / norm } else { 0.0 })
}

/// All eigenvalues of `b`, certified so that every returned `λ` has
/// `σ_min(λI − b) ≤ 1e-8·‖b‖`.
pub fn eigenvalues(b: &Matrix) -> Result<Spectrum> {
    let eigenvalues = eigenvalues_uncertified(b)?;
    let mut backward_error: f64 = 0.0;
    for &lambda in &eigenvalues {
        backward_error = backward_error.max(smallest_singular_value(&b.shifted_from(lambda))?);
    }
    let limit = CERTIFICATE_RTOL * b.operator_norm()?;
    if backward_error > limit {
        return Err(Error::EigenCertification { backward_error, limit });
    }
    Ok(Spectrum {
        eigenvalues,
        backward_error,
    })
}

pub fn spectral_radius(b: &Matrix) -> Result<f64> {
    Ok(eigenvalues(b)?.spectral_radius())
}

impl Matrix {
    pub fn eigenvalues(&self) -> Result<Spectrum> {
        eigenvalues(self)
    }

    pub fn spectral_radius(&self) -> Result<f64> {
        spectral_radius(self)
    }
}
