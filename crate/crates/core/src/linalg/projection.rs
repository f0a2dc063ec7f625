use serde::Serialize;

use super::Matrix;
use crate::error::{Error, Result};

const IDEMPOTENCE_RTOL: f64 = 1e-10;

/// A projection `P` together with its complement `Q = I − P` and the norms
/// the estimates keep asking for.
#[derive(Clone, Debug)]
pub struct ProjectionPair {
    p: Matrix,
    q: Matrix,
    norm_p: f64,
    norm_q: f64,
    norm_p_minus_q: f64,
}

/// Plain-data view of the cached norms.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ProjectionNorms {
    pub norm_p: f64,
    pub norm_q: f64,
    pub norm_p_minus_q: f64,
}

impl ProjectionPair {
    /// Validates `p` as a projection (`‖P² − P‖ ≤ 1e-10·(1 + ‖P‖)²`) and builds `Q`.
    pub fn new(p: Matrix) -> Result<Self> {
        let norm_p = p.operator_norm()?;
        let defect = (&(&p * &p) - &p).operator_norm()?;
        let limit = IDEMPOTENCE_RTOL * (1.0 + norm_p).powi(2);
        if defect > limit {
            return Err(Error::NotProjection { defect, limit });
        }
        let q = &Matrix::identity(p.dim()) - &p;
        let norm_q = q.operator_norm()?;
        let norm_p_minus_q = (&p - &q).operator_norm()?;
        Ok(ProjectionPair {
            p,
            q,
            norm_p,
            norm_q,
            norm_p_minus_q,
        })
    }

    pub fn p(&self) -> &Matrix {
        &self.p
    }

    pub fn q(&self) -> &Matrix {
        &self.q
    }

    pub fn dim(&self) -> usize {
        self.p.dim()
    }

    pub fn norm_p(&self) -> f64 {
        self.norm_p
    }

    pub fn norm_q(&self) -> f64 {
        self.norm_q
    }

    /// `‖P − Q‖`, which is at least 1 because `(P − Q)² = I`.
    pub fn norm_p_minus_q(&self) -> f64 {
        self.norm_p_minus_q
    }

    pub fn norms(&self) -> ProjectionNorms {
        ProjectionNorms {
            norm_p: self.norm_p,
            norm_q: self.norm_q,
            norm_p_minus_q: self.norm_p_minus_q,
        }
    }

    /// `Q·A·Q`, the generator of the limit semigroup.
    pub fn compress(&self, a: &Matrix) -> Matrix {
        &(&self.q * a) * &self.q
    }
}
