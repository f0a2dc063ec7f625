use num_complex::Complex64;
use proptest::prelude::*;
use semigroup_lab::bounds::{compute_bound_params, select_delta};
use semigroup_lab::experiments::{random_instance, reference_instance, ProjectionKind};
use semigroup_lab::expm::{expm, limit_semigroup};
use semigroup_lab::linalg::random::{complex_gaussian_matrix, rng_from_seed};
use semigroup_lab::linalg::Matrix;
use semigroup_lab::resolvent::{
    resolvent_direct, resolvent_neumann, resolvent_zp_closed, two_circle_split, Contour, ZpForm,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn kind(i: usize) -> ProjectionKind {
    ProjectionKind::ALL[i % 3]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn resolvent_identity(seed in any::<u64>(), n in 1usize..=8, re1 in -6.0f64..6.0, im1 in -6.0f64..6.0,
                          re2 in -6.0f64..6.0, im2 in -6.0f64..6.0) {
        let b = complex_gaussian_matrix(&mut rng_from_seed(seed), n);
        let (l, m) = (c(re1, im1), c(re2, im2));
        let spectrum = b.eigenvalues().unwrap().eigenvalues;
        prop_assume!(spectrum.iter().all(|e| (e - l).norm() > 0.05 && (e - m).norm() > 0.05));
        let rl = resolvent_direct(l, &b).unwrap();
        let rm = resolvent_direct(m, &b).unwrap();
        let lhs = &rl - &rm;
        let rhs = (&rl * &rm).scale(m - l);
        let scale = 1.0 + rl.operator_norm().unwrap() * rm.operator_norm().unwrap() * (1.0 + (m - l).norm());
        prop_assert!((&lhs - &rhs).operator_norm().unwrap() <= 1e-9 * scale);
    }

    #[test]
    fn closed_forms_agree(seed in any::<u64>(), n in 1usize..=10, k in 0usize..3,
                          zr in -100.0f64..100.0, zi in -100.0f64..100.0, lr in -150.0f64..150.0, li in -150.0f64..150.0) {
        let (_, pq) = random_instance(seed, n, kind(k), 1.0).unwrap();
        let (z, l) = (c(zr, zi), c(lr, li));
        prop_assume!(l.norm() > 1e-3 && (l - z).norm() > 1e-3);
        let short = resolvent_zp_closed(l, z, &pq, ZpForm::Short).unwrap();
        let sym = resolvent_zp_closed(l, z, &pq, ZpForm::Symmetric).unwrap();
        prop_assert!(short.max_abs_diff(&sym) <= 1e-12 * short.max_abs().max(1.0));
    }

    #[test]
    fn zp_resolvent_decays_outside_disks(seed in any::<u64>(), n in 1usize..=10, k in 0usize..3,
                                         alpha in 0.05f64..20.0, zr in -50.0f64..50.0, zi in -50.0f64..50.0,
                                         rho in 1e-3f64..5.0, theta in 0.0f64..std::f64::consts::TAU, around_z in any::<bool>()) {
        let (_, pq) = random_instance(seed, n, kind(k), 1.0).unwrap();
        let z = c(zr, zi);
        let r_alpha = 2.0 * alpha * pq.norm_p_minus_q();
        let center = if around_z { z } else { c(0.0, 0.0) };
        let l = center + Complex64::from_polar(r_alpha * (1.0 + rho), theta);
        prop_assume!(l.norm() > r_alpha && (l - z).norm() > r_alpha);
        let norm = resolvent_zp_closed(l, z, &pq, ZpForm::Short).unwrap().operator_norm().unwrap();
        prop_assert!(alpha * norm < 1.0, "alpha |R| = {}", alpha * norm);
    }

    #[test]
    fn neumann_matches_direct(seed in any::<u64>(), n in 1usize..=8, k in 0usize..3, delta in 0.1f64..5.0,
                              zr in -60.0f64..60.0, zi in -60.0f64..60.0, theta in 0.0f64..std::f64::consts::TAU, around_z in any::<bool>()) {
        let (a, pq) = random_instance(seed, n, kind(k), 1.0).unwrap();
        let z = c(zr, zi);
        let big_r = 2.0 * (a.operator_norm().unwrap() + delta) * pq.norm_p_minus_q();
        let center = if around_z { z } else { c(0.0, 0.0) };
        let l = center + Complex64::from_polar(big_r, theta);
        prop_assume!(l.norm() >= big_r * (1.0 - 1e-12) && (l - z).norm() >= big_r * (1.0 - 1e-12));
        let tol = 1e-10;
        let series = resolvent_neumann(l, &a, z, &pq, tol).unwrap();
        prop_assert!(series.ratio < 1.0);
        let direct = resolvent_direct(l, &(&a + &pq.p().scale(z))).unwrap();
        let diff = (&series.value - &direct).operator_norm().unwrap();
        prop_assert!(diff <= tol + series.tail_bound, "diff {diff:e}");
    }
}

#[test]
fn neumann_on_outer_circle_of_seeded_8x8() {
    for seed in 0..5u64 {
        let (a, pq) = random_instance(seed, 8, kind(seed as usize), 1.0).unwrap();
        let delta = select_delta(&a, &pq, false).unwrap();
        let bp = compute_bound_params(&a, &pq, 0.5, 1.0, delta).unwrap();
        let z = c(-10.0 * bp.big_r, 0.0);
        for l in Contour::circle(z, bp.big_r).unwrap().sample_points(32) {
            let series = resolvent_neumann(l, &a, z, &pq, 1e-10).unwrap();
            // on |λ − z| = R the contraction ratio is below ‖A‖/(‖A‖+δ)
            assert!(series.ratio < bp.norm_a / (bp.norm_a + delta) + 1e-12);
            let direct = resolvent_direct(l, &(&a + &pq.p().scale(z))).unwrap();
            assert!((&series.value - &direct).operator_norm().unwrap() <= 1e-10 + series.tail_bound);
            assert!(direct.operator_norm().unwrap() <= (1.0 + 1e-9) / delta);
        }
    }
}

#[test]
fn split_of_zero_generator_is_diagonal() {
    // A = 0: e^{tzP} − Q = diag(e^{tz}, 1) − diag(0, 1)
    let pq = semigroup_lab::ProjectionPair::new(Matrix::from_real_diag(&[1.0, 0.0])).unwrap();
    let a = Matrix::zeros(2);
    let bp = compute_bound_params(&a, &pq, 1.0, 1.0, 1.0).unwrap();
    let split = two_circle_split(1.0, &a, c(-100.0, 0.0), &pq, &bp).unwrap();
    let expected = Matrix::from_real_diag(&[(-100f64).exp(), 0.0]);
    assert!(split.sum().max_abs_diff(&expected) < 1e-10);
}

#[test]
fn split_of_reference_instance_matches_closed_form() {
    let (a, pq) = reference_instance();
    let bp = compute_bound_params(&a, &pq, 0.5, 1.0, 1.0).unwrap();
    let s = 50.0;
    let split = two_circle_split(1.0, &a, c(-s, 0.0), &pq, &bp).unwrap();
    // e^{A+zP} − e^{QAQ}Q = [[e^{−s}, (1 − e^{−s})/s], [0, 0]]
    let expected = Matrix::from_real_rows(&[&[(-s).exp(), (1.0 - (-s).exp()) / s], &[0.0, 0.0]]).unwrap();
    assert!(split.sum().max_abs_diff(&expected) < 1e-8);
}

#[test]
fn split_of_seeded_8x8_matches_expm() {
    for seed in [3u64, 4, 5] {
        let (a, pq) = random_instance(seed, 8, kind(seed as usize), 1.0).unwrap();
        let delta = select_delta(&a, &pq, false).unwrap();
        let bp = compute_bound_params(&a, &pq, 0.5, 1.0, delta).unwrap();
        let z = c(-10.0 * bp.big_r, 0.0);
        let split = two_circle_split(0.7, &a, z, &pq, &bp).unwrap();
        let expected = &expm(&(&a + &pq.p().scale(z)).scale_real(0.7)).unwrap() - &limit_semigroup(0.7, &a, &pq).unwrap();
        assert!((&split.sum() - &expected).operator_norm().unwrap() < 1e-7, "seed {seed}");
    }
}
