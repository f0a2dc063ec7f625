//! Dense complex linear algebra: the matrix type, spectral norm, pivoted LU,
//! certified eigenvalues and validated projection pairs.
//!
//! The underlying space is `ℂⁿ` with the Euclidean norm, so the operator
//! norm of a matrix is its largest singular value.

mod eigen;
mod lu;
mod matrix;
mod norm;
mod projection;
pub mod random;

pub use eigen::{eigenvalues, hessenberg, smallest_singular_value, spectral_radius, Spectrum};
pub use lu::{solve_linear, Lu};
pub use matrix::Matrix;
pub use norm::operator_norm;
pub use projection::{ProjectionNorms, ProjectionPair};
