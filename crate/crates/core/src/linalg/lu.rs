//! Row-pivoted LU factorization and linear solves.

use num_complex::Complex64;

use super::Matrix;
use crate::error::{Error, Result};

/// Relative pivot threshold: a pivot below `PIVOT_RTOL·‖b‖` marks the system singular.
pub const PIVOT_RTOL: f64 = 1e-14;

/// `PA = LU` with unit lower triangular `L` stored below the diagonal.
#[derive(Clone, Debug)]
pub struct Lu {
    factors: Matrix,
    perm: Vec<usize>,
}

impl Lu {
    /// Factors `b` with partial pivoting. Any pivot whose modulus is not
    /// strictly above `threshold` is rejected.
    pub fn factor(b: &Matrix, threshold: f64) -> Result<Lu> {
        let n = b.dim();
        let mut f = b.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pivot) = (k..n)
                .map(|i| (i, f[(i, k)].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if !(pivot > threshold) {
                return Err(Error::Singular { pivot, threshold });
            }
            if p != k {
                for j in 0..n {
                    let tmp = f[(k, j)];
                    f[(k, j)] = f[(p, j)];
                    f[(p, j)] = tmp;
                }
                perm.swap(k, p);
            }
            let inv = f[(k, k)].inv();
            for i in k + 1..n {
                let l = f[(i, k)] * inv;
                f[(i, k)] = l;
                if l == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in k + 1..n {
                    let u = f[(k, j)];
                    f[(i, j)] -= l * u;
                }
            }
        }
        Ok(Lu { factors: f, perm })
    }

    pub fn solve_vec(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        let n = self.factors.dim();
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| rhs[p]).collect();
        for i in 0..n {
            let row = self.factors.row(i);
            let s = (0..i).fold(x[i], |acc, j| acc - row[j] * x[j]);
            x[i] = s;
        }
        for i in (0..n).rev() {
            let row = self.factors.row(i);
            let s = (i + 1..n).fold(x[i], |acc, j| acc - row[j] * x[j]);
            x[i] = s / row[i];
        }
        x
    }

    pub fn solve(&self, rhs: &Matrix) -> Matrix {
        let n = rhs.dim();
        let mut out = Matrix::zeros(n);
        let mut col = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            for i in 0..n {
                col[i] = rhs[(i, j)];
            }
            let x = self.solve_vec(&col);
            for i in 0..n {
                out[(i, j)] = x[i];
            }
        }
        out
    }
}

/// Solves `b·x = rhs` by row-pivoted elimination.
///
/// The singularity threshold is `1e-14·‖b‖_F`; the Frobenius norm stands in
/// for the operator norm here since it is an upper bound within a factor √n
/// and costs no iteration.
pub fn solve_linear(b: &Matrix, rhs: &Matrix) -> Result<Matrix> {
    if b.dim() != rhs.dim() {
        return Err(Error::DimensionMismatch {
            expected: b.dim(),
            got: rhs.dim(),
        });
    }
    if !b.is_finite() || !rhs.is_finite() {
        return Err(Error::NonFinite);
    }
    let lu = Lu::factor(b, PIVOT_RTOL * b.frobenius_norm())?;
    let x = lu.solve(rhs);
    if !x.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(x)
}

impl Matrix {
    pub fn solve(&self, rhs: &Matrix) -> Result<Matrix> {
        solve_linear(self, rhs)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        solve_linear(self, &Matrix::identity(self.dim()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::{complex_gaussian_matrix, rng_from_seed};

    #[test]
    fn identity_system_returns_rhs() {
        let mut rng = rng_from_seed(3);
        let m = complex_gaussian_matrix(&mut rng, 4);
        let x = solve_linear(&Matrix::identity(4), &m).unwrap();
        assert!(x.approx_eq(&m, 0.0));
    }

    #[test]
    fn diagonal_inverse() {
        let x = solve_linear(&Matrix::from_real_diag(&[2.0, 5.0]), &Matrix::identity(2)).unwrap();
        assert!(x.approx_eq(&Matrix::from_real_diag(&[0.5, 0.2]), 1e-16));
    }

    #[test]
    fn random_well_conditioned_residual() {
        let mut rng = rng_from_seed(11);
        let g = complex_gaussian_matrix(&mut rng, 6);
        let b = &Matrix::identity(6).scale_real(4.0) + &g;
        let x = solve_linear(&b, &Matrix::identity(6)).unwrap();
        let residual = (&(&b * &x) - &Matrix::identity(6)).operator_norm().unwrap();
        assert!(residual < 1e-10, "residual {residual}");
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let b = Matrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]).unwrap();
        assert!(matches!(
            solve_linear(&b, &Matrix::identity(2)),
            Err(Error::Singular { .. })
        ));
        assert!(matches!(
            solve_linear(&Matrix::zeros(3), &Matrix::identity(3)),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn pivoting_handles_zero_leading_entry() {
        let b = Matrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let x = solve_linear(&b, &Matrix::identity(2)).unwrap();
        assert!(x.approx_eq(&b, 1e-16));
    }
}
