use num_complex::Complex64;
use proptest::prelude::*;
use semigroup_lab::bounds::{
    compute_bound_params, compute_bound_params_with_samples, convergence_bound, select_delta, select_delta_for,
    SUP_SAFETY_FACTOR,
};
use semigroup_lab::experiments::{random_instance, reference_instance, ProjectionKind};
use semigroup_lab::expm::{limit_semigroup, perturbed_semigroup};

/// Largest singular value of `[[1, c], [0, 1]]`, `(|c| + sqrt(|c|² + 4))/2`.
fn unipotent_norm(c: f64) -> f64 {
    (c + (c * c + 4.0).sqrt()) / 2.0
}

#[test]
fn unipotent_norm_oracle() {
    // [[1,1],[0,1]] has singular values φ and 1/φ
    assert!((unipotent_norm(1.0) - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-15);
    assert_eq!(unipotent_norm(0.0), 1.0);
}

#[test]
fn reference_constants() {
    let (a, pq) = reference_instance();
    assert_eq!(select_delta(&a, &pq, false).unwrap(), 1.0);
    assert_eq!(select_delta(&a, &pq, true).unwrap(), 1.0);
    let bp = compute_bound_params(&a, &pq, 0.5, 1.0, 1.0).unwrap();
    let e = 1f64.exp();
    assert!((bp.big_r - 4.0).abs() < 1e-12);
    assert!((bp.r - 2.0).abs() < 1e-12);
    assert!((bp.c1 - 4.0 * e * e).abs() < 1e-10 * e * e);
    // M(λ) = [[1, 1/λ], [0, 1]] on |λ| = 4
    let sup = unipotent_norm(0.25);
    assert!((bp.raw_sup_m - sup).abs() < 1e-12);
    assert!((bp.sup_m - SUP_SAFETY_FACTOR * sup).abs() < 1e-12);
    // C2 = R e^{T2 R} (‖A‖+δ)/δ ‖P‖ sup|M| = 4 e^4 · 2 · 1 · sup
    let c2 = 8.0 * e.powi(4) * SUP_SAFETY_FACTOR * sup;
    assert!((bp.c2 - c2).abs() < 1e-10 * c2);
    let z = Complex64::new(-100.0, 0.0);
    let expected = 4.0 * e * e * (-50f64).exp() + bp.c2 / 96.0;
    assert!((convergence_bound(&bp, z, 0.5).unwrap() - expected).abs() < 1e-12 * expected);
}

#[test]
fn synthetic_delta_selection() {
    // 2(1+δ) must clear 10·(1+10⁻³): δ = 1, 2, 4 fail, δ = 8 gives R = 18
    assert_eq!(select_delta_for(1.0, 1.0, 10.0, 0.0, false), 8.0);
    assert_eq!(select_delta_for(1.0, 1.0, 0.0, 0.0, false), 1.0);
    assert_eq!(select_delta_for(3.0, 1.0, 0.0, 0.0, false), 3.0);
    // strict mode also clears ‖QAQ‖
    assert_eq!(select_delta_for(1.0, 1.0, 0.0, 40.0, true), 32.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn sampled_sup_grows_with_samples(seed in any::<u64>(), n in 2usize..=8, k in 0usize..3) {
        let (a, pq) = random_instance(seed, n, ProjectionKind::ALL[k], 1.0).unwrap();
        let delta = select_delta(&a, &pq, false).unwrap();
        // 64 nodes are a subset of 256 on the same circle
        let coarse = compute_bound_params_with_samples(&a, &pq, 0.5, 1.0, delta, 64).unwrap();
        let fine = compute_bound_params_with_samples(&a, &pq, 0.5, 1.0, delta, 256).unwrap();
        prop_assert!(fine.raw_sup_m >= coarse.raw_sup_m * (1.0 - 1e-12));
        prop_assert!(fine.raw_sup_m >= 1.0 - 1e-12 || pq.norm_q() == 0.0);
    }

    #[test]
    fn bound_dominates_error_for_large_generators(seed in any::<u64>(), n in 2usize..=6, k in 0usize..3,
                                                 scale in 0.1f64..4.0, factor in 2.01f64..1e4, t in 0.25f64..0.75) {
        let (a, pq) = random_instance(seed, n, ProjectionKind::ALL[k], scale).unwrap();
        let delta = select_delta(&a, &pq, false).unwrap();
        let bp = compute_bound_params(&a, &pq, 0.25, 0.75, delta).unwrap();
        let z = Complex64::new(-factor * bp.big_r, 0.0);
        let error = (&perturbed_semigroup(t, &a, z, &pq).unwrap() - &limit_semigroup(t, &a, &pq).unwrap())
            .operator_norm()
            .unwrap();
        prop_assert!(error <= bp.bound(z, t).unwrap());
    }
}
