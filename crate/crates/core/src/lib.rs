//! A numerical laboratory for operator semigroups perturbed by a projection.
//!
//! For a matrix `A` and a projection `P` with complement `Q = I − P`, the
//! crate computes and checks
//!
//! * the convergence `e^{t(A+zP)} → e^{tQAQ}Q` as `Re z → −∞` together with
//!   an explicit rate bound of the form `C₁e^{T₁ Re z} + C₂/(|z| − R)`,
//! * the projected product limit `(e^{(t/k)A}Q)^k → e^{tQAQ}Q` as `k → ∞`,
//!
//! using the same machinery a proof would use: closed-form resolvents of
//! `zP`, Neumann series, and Cauchy integrals over two disjoint circles.
//!
//! ```
//! use semigroup_lab::{experiments::reference_instance, expm::{expm, limit_semigroup}};
//! use num_complex::Complex64;
//!
//! let (a, pq) = reference_instance();
//! let z = Complex64::new(-1.0e4, 0.0);
//! let shifted = &a + &pq.p().scale(z);
//! let error = (&expm(&shifted).unwrap() - &limit_semigroup(1.0, &a, &pq).unwrap())
//!     .operator_norm()
//!     .unwrap();
//! assert!((error * 1.0e4 - 1.0).abs() < 1e-3);
//! ```

// `!(x > 0.0)` style guards are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod experiments;
pub mod expm;
pub mod linalg;
pub mod report;
pub mod resolvent;
pub mod suites;

pub use error::{Error, Result};
pub use linalg::{Matrix, ProjectionPair};
pub use num_complex::Complex64;

#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../README.md")]
    pub mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/matrices.md")]
    pub mod matrices {}
    #[doc = include_str!("../../../book/src/exponential.md")]
    pub mod exponential {}
    #[doc = include_str!("../../../book/src/resolvents.md")]
    pub mod resolvents {}
    #[doc = include_str!("../../../book/src/contours.md")]
    pub mod contours {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    pub mod bounds {}
    #[doc = include_str!("../../../book/src/products.md")]
    pub mod products {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
