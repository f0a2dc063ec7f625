use num_complex::Complex64;

use super::eigen::eigenvalues_uncertified;
use super::random::{complex_gaussian_vector, rng_from_seed};
use super::Matrix;
use crate::error::{Error, Result};

const POWER_RTOL: f64 = 1e-12;
const POWER_MAX_ITERATIONS: usize = 5000;
const START_SEED: u64 = 0x6f70_6e6f_726d;

fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Spectral norm (largest singular value) of `b`.
///
/// Power iteration on `BᴴB` from a fixed seeded start vector; the iteration
/// stops once the eigen-residual `‖BᴴB v − μ v‖ ≤ 1e-12·μ`, which for a
/// Hermitian matrix pins `μ` to within that relative distance of an
/// eigenvalue. If the cap is reached the largest eigenvalue of `BᴴB` is taken
/// from the QR eigensolver instead.
pub fn operator_norm(b: &Matrix) -> Result<f64> {
    if !b.is_finite() {
        return Err(Error::NonFinite);
    }
    let scale = b.max_abs();
    if scale == 0.0 {
        return Ok(0.0);
    }
    // divide rather than multiply by 1/scale, which overflows for subnormal scales
    let scaled = Matrix::from_fn(b.dim(), |i, j| b[(i, j)] / scale);
    let gram = &scaled.adjoint() * &scaled;
    let n = b.dim();

    let mut v = complex_gaussian_vector(&mut rng_from_seed(START_SEED ^ n as u64), n);
    let v_norm = vec_norm(&v);
    v.iter_mut().for_each(|x| *x /= v_norm);

    for _ in 0..POWER_MAX_ITERATIONS {
        let w = gram.matvec(&v);
        let mu: f64 = v.iter().zip(&w).map(|(a, b)| (a.conj() * b).re).sum();
        let w_norm = vec_norm(&w);
        if w_norm == 0.0 || !mu.is_finite() {
            break;
        }
        let residual = w
            .iter()
            .zip(&v)
            .map(|(wi, vi)| (wi - vi * mu).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if residual <= POWER_RTOL * mu {
            return Ok(scale * mu.sqrt());
        }
        v = w.into_iter().map(|x| x / w_norm).collect();
    }

    let top = eigenvalues_uncertified(&gram)?
        .into_iter()
        .map(|l| l.re)
        .fold(f64::NEG_INFINITY, f64::max);
    if !top.is_finite() {
        return Err(Error::NormFailed);
    }
    Ok(scale * top.max(0.0).sqrt())
}

impl Matrix {
    pub fn operator_norm(&self) -> Result<f64> {
        operator_norm(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::{complex_gaussian_matrix, rng_from_seed};

    #[test]
    fn diagonal_norm_is_max_modulus() {
        let d = Matrix::from_diag(&[Complex64::new(3.0, 0.0), Complex64::new(0.0, -4.0)]);
        assert!((operator_norm(&d).unwrap() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn subnormal_entries_keep_a_finite_norm() {
        let tiny = 3.0 * f64::from_bits(1);
        let d = Matrix::from_real_diag(&[tiny, 2.0 * tiny]);
        assert_eq!(operator_norm(&d).unwrap(), 2.0 * tiny);
    }

    #[test]
    fn single_entry_norm() {
        let b = Matrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!((operator_norm(&b).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_matrix_has_zero_norm() {
        assert_eq!(operator_norm(&Matrix::zeros(4)).unwrap(), 0.0);
    }

    #[test]
    fn unitary_has_unit_norm() {
        // all singular values equal: the power iteration converges at once
        let u = crate::linalg::random::random_unitary(&mut rng_from_seed(4), 6);
        assert!((operator_norm(&u).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn norm_is_bounded_by_frobenius() {
        let mut rng = rng_from_seed(8);
        for n in 1..10 {
            let b = complex_gaussian_matrix(&mut rng, n);
            let s = operator_norm(&b).unwrap();
            assert!(s <= b.frobenius_norm() * (1.0 + 1e-12));
            assert!(s >= b.frobenius_norm() / (n as f64).sqrt() * (1.0 - 1e-12));
        }
    }

    #[test]
    fn non_finite_input_is_rejected() {
        let mut b = Matrix::identity(2);
        b[(0, 1)] = Complex64::new(f64::NAN, 0.0);
        assert_eq!(operator_norm(&b), Err(Error::NonFinite));
    }
}
