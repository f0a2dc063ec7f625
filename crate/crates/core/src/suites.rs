//! Seeded verification suites. Each suite draws its own instances from
//! independent streams of one seed, so results do not depend on the order or
//! parallelism of evaluation.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::bounds::{
    check_inner_factorization, check_inner_integral, check_inner_resolvent_p, check_outer_integral,
    check_outer_resolvent, compute_bound_params, select_delta, BoundParams,
};
use crate::error::Result;
use crate::experiments::{
    counterexample_run, fitted_decay_exponent, identity_suite, main_sweep, oblique_projection, projection_rank,
    random_instance, reference_instance, semigroup_law_check, spectrum_localization_suite, sweep_instance,
    zeno_sweep, ExperimentRecord, ProjectionKind, SweepConfig, EXPERIMENT_ZENO, EXPERIMENT_ZENO_SUP,
};
use crate::expm::expm;
use crate::linalg::random::{complex_gaussian, complex_gaussian_matrix, stream_rng, SeededRng};
use crate::linalg::{Matrix, ProjectionPair};
use crate::report::{CheckReport, SuiteReport};
use crate::resolvent::{
    contour_exp, resolvent_direct, resolvent_neumann, resolvent_zp_closed, two_circle_split, Contour, ZpForm,
};

/// Largest `x < 1`; a check with this limit asserts a strict `< 1`.
pub const STRICTLY_BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;
/// Times in `[−2, 2]` at which Zeno products are compared with their limit.
pub const ZENO_T_GRID: [f64; 6] = [-2.0, -1.0, -0.5, 0.5, 1.0, 2.0];
/// Factor counts along which the sup error must decrease.
pub const ZENO_LADDER: [u64; 3] = [1 << 6, 1 << 10, 1 << 14];
pub const ZENO_TARGET: f64 = 1e-3;
/// Time window of the on-circle and split checks.
pub const CHECK_WINDOW: (f64, f64) = (0.5, 1.0);

fn kind_for(i: usize) -> ProjectionKind {
    ProjectionKind::ALL[i % 3]
}

fn log_uniform(rng: &mut SeededRng, lo_exp: f64, hi_exp: f64) -> f64 {
    10f64.powf(rng.random_range(lo_exp..=hi_exp))
}

fn fold(name: &str, limit: f64, detail: &str, samples: Vec<Result<(f64, Option<Complex64>)>>) -> Result<CheckReport> {
    let mut check = CheckReport::new(name, limit).with_detail(detail);
    for s in samples {
        let (ratio, lambda) = s?;
        check.observe(ratio, lambda);
    }
    Ok(check)
}

/// A projection of the given kind; the oblique kind uses a skew drawn from
/// `[0.5, max_skew]`.
fn sample_projection(rng: &mut SeededRng, seed: u64, dim: usize, kind: ProjectionKind, max_skew: f64) -> Result<ProjectionPair> {
    match kind {
        ProjectionKind::Oblique => {
            let skew = rng.random_range(0.5..=max_skew.max(0.5));
            oblique_projection(rng, dim, projection_rank(dim), skew)
        }
        _ => Ok(random_instance(seed, dim, kind, 1.0)?.1),
    }
}

/// `λ` at distance at least `margin·(1+|z|)` from both `0` and `z`.
fn sample_lambda(rng: &mut SeededRng, z: Complex64, margin: f64) -> Complex64 {
    let floor = margin * (1.0 + z.norm());
    loop {
        let lambda = complex_gaussian(rng) * (1.0 + z.norm()) * rng.random_range(0.2..2.0);
        if lambda.norm() >= floor && (lambda - z).norm() >= floor {
            return lambda;
        }
    }
}

/// Both closed forms of `R(λ, zP)` against an LU solve, and against each other.
/// Dimensions are drawn from `1..=max_dim`; oblique projections reach
/// `‖P‖ ≈ sqrt(1 + max_skew²)`.
pub fn resolvent_forms_suite(seed: u64, samples: usize, max_dim: usize, max_skew: f64) -> Result<SuiteReport> {
    let rows: Vec<Result<(f64, f64, f64, Complex64)>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let dim = rng.random_range(1..=max_dim.max(1));
            let pq = sample_projection(&mut rng, seed.wrapping_add(i as u64), dim, kind_for(i), max_skew)?;
            let z = complex_gaussian(&mut rng) * log_uniform(&mut rng, -1.0, 2.0);
            let lambda = sample_lambda(&mut rng, z, 0.1);
            let direct = resolvent_direct(lambda, &pq.p().scale(z))?;
            let short = resolvent_zp_closed(lambda, z, &pq, ZpForm::Short)?;
            let symmetric = resolvent_zp_closed(lambda, z, &pq, ZpForm::Symmetric)?;
            let scale = direct.max_abs().max(1.0);
            Ok((
                short.max_abs_diff(&direct) / (1e-10 * scale),
                symmetric.max_abs_diff(&direct) / (1e-10 * scale),
                short.max_abs_diff(&symmetric) / (1e-12 * short.max_abs().max(1.0)),
                lambda,
            ))
        })
        .collect();
    let mut short = CheckReport::new("zp-short-form", 1.0).with_detail("entrywise vs LU / 1e-10 max(1,|R|max)");
    let mut symmetric = CheckReport::new("zp-symmetric-form", 1.0).with_detail("entrywise vs LU / 1e-10 max(1,|R|max)");
    let mut agree = CheckReport::new("zp-forms-agree", 1.0).with_detail("entrywise / 1e-12 max(1,|R|max)");
    for r in rows {
        let (a, b, c, lambda) = r?;
        short.observe(a, Some(lambda));
        symmetric.observe(b, Some(lambda));
        agree.observe(c, Some(lambda));
    }
    let mut suite = SuiteReport::new("resolvent-forms");
    suite.push(short);
    suite.push(symmetric);
    suite.push(agree);
    Ok(suite)
}

/// `α‖R(λ, zP)‖ < 1` whenever `λ` is farther than `r_α = 2α‖P−Q‖` from both
/// `0` and `z`. Points are drawn at relative distances `10^{-3}..10` outside
/// one of the two disks.
pub fn resolvent_decay_suite(seed: u64, instances: usize, per_instance: usize, max_dim: usize) -> Result<SuiteReport> {
    let rows: Vec<Result<Vec<(f64, Option<Complex64>)>>> = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let dim = rng.random_range(1..=max_dim.max(1));
            let pq = sample_projection(&mut rng, seed.wrapping_add(i as u64), dim, kind_for(i), 3.0)?;
            let z = complex_gaussian(&mut rng) * log_uniform(&mut rng, -1.0, 2.0);
            let alpha = log_uniform(&mut rng, -1.0, 1.0);
            let r_alpha = 2.0 * alpha * pq.norm_p_minus_q();
            let mut out = Vec::with_capacity(per_instance);
            while out.len() < per_instance {
                let center = if rng.random_bool(0.5) { z } else { Complex64::new(0.0, 0.0) };
                let radius = r_alpha * (1.0 + log_uniform(&mut rng, -3.0, 1.0));
                let lambda = center + Complex64::from_polar(radius, rng.random_range(0.0..2.0 * PI));
                if lambda.norm() <= r_alpha || (lambda - z).norm() <= r_alpha {
                    continue;
                }
                let norm = resolvent_zp_closed(lambda, z, &pq, ZpForm::Short)?.operator_norm()?;
                out.push((alpha * norm, Some(lambda)));
            }
            Ok(out)
        })
        .collect();
    let mut check = CheckReport::new("zp-resolvent-decay", STRICTLY_BELOW_ONE).with_detail("alpha |R(lambda,zP)| < 1");
    for r in rows {
        for (ratio, lambda) in r? {
            check.observe(ratio, lambda);
        }
    }
    let mut suite = SuiteReport::new("resolvent-decay");
    suite.push(check);
    Ok(suite)
}

/// Truncated Neumann series against the LU resolvent of `A + zP` at points on
/// or outside the circles of radius `R = 2(‖A‖+δ)‖P−Q‖` around `0` and `z`.
pub fn neumann_suite(seed: u64, samples: usize, max_dim: usize, tol: f64) -> Result<SuiteReport> {
    let rows: Vec<Result<(f64, Option<Complex64>)>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let dim = rng.random_range(1..=max_dim.max(1));
            let (a, pq) = random_instance(seed.wrapping_add(i as u64), dim, kind_for(i), 1.0)?;
            let z = complex_gaussian(&mut rng) * log_uniform(&mut rng, 0.0, 2.0);
            let delta = log_uniform(&mut rng, -1.0, 1.0);
            let big_r = 2.0 * (a.operator_norm()? + delta) * pq.norm_p_minus_q();
            let lambda = loop {
                let center = if rng.random_bool(0.5) { z } else { Complex64::new(0.0, 0.0) };
                let radius = big_r * (1.0 + log_uniform(&mut rng, -4.0, 0.5));
                let lambda = center + Complex64::from_polar(radius, rng.random_range(0.0..2.0 * PI));
                if lambda.norm() >= big_r && (lambda - z).norm() >= big_r {
                    break lambda;
                }
            };
            let series = resolvent_neumann(lambda, &a, z, &pq, tol)?;
            let direct = resolvent_direct(lambda, &(&a + &pq.p().scale(z)))?;
            let diff = (&series.value - &direct).operator_norm()?;
            Ok((diff / (tol + series.tail_bound), Some(lambda)))
        })
        .collect();
    let mut suite = SuiteReport::new("neumann-series");
    suite.push(fold(
        "neumann-vs-direct",
        1.0,
        &format!("|series - LU| / (tol + tail), tol={tol:e}"),
        rows,
    )?);
    Ok(suite)
}

/// Cauchy integral of `e^{tλ}R(λ, b)` on a circle of radius `‖b‖ + 1`
/// against `expm(tb)`, relative to `1e-8·max(1, ‖e^{tb}‖)`.
pub fn contour_exp_check(seed: u64, instances: usize, max_dim: usize) -> Result<CheckReport> {
    let rows: Vec<Result<(f64, Option<Complex64>)>> = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let dim = rng.random_range(1..=max_dim.max(1));
            let g = complex_gaussian_matrix(&mut rng, dim);
            let b = g.scale_real(rng.random_range(0.1..4.0) / g.operator_norm()?);
            let t = rng.random_range(-1.0..1.5);
            let circle = Contour::circle(Complex64::new(0.0, 0.0), b.operator_norm()? + 1.0)?;
            let expected = expm(&b.scale_real(t))?;
            let diff = (&contour_exp(t, &b, &circle)? - &expected).operator_norm()?;
            Ok((diff / (1e-8 * expected.operator_norm()?.max(1.0)), None))
        })
        .collect();
    fold("contour-exp", 1.0, "|contour - expm| / 1e-8 max(1,|expm|)", rows)
}

fn check_params(a: &Matrix, pq: &ProjectionPair) -> Result<BoundParams> {
    let delta = select_delta(a, pq, false)?;
    compute_bound_params(a, pq, CHECK_WINDOW.0, CHECK_WINDOW.1, delta)
}

/// Outer plus inner integral of the two-circle split against
/// `e^{t(A+zP)} − e^{tQAQ}Q`, relative to `1e-7·(1 + e^{|t|R})`, the size of
/// the inner integrand. `z` ranges over the closed left half-plane with
/// `|z| ∈ [2.2R, 50R]`.
pub fn two_circle_check(seed: u64, instances: usize, max_dim: usize) -> Result<CheckReport> {
    let rows: Vec<Result<(f64, Option<Complex64>)>> = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let dim = rng.random_range(1..=max_dim.max(1));
            let (a, pq) = random_instance(seed.wrapping_add(i as u64), dim, kind_for(i), 1.0)?;
            let bp = check_params(&a, &pq)?;
            let z = Complex64::from_polar(
                bp.big_r * rng.random_range(2.2..50.0),
                rng.random_range(0.5 * PI..1.5 * PI),
            );
            let t = rng.random_range(CHECK_WINDOW.0..=CHECK_WINDOW.1);
            let split = two_circle_split(t, &a, z, &pq, &bp)?;
            let expected = &expm(&(&a + &pq.p().scale(z)).scale_real(t))? - &crate::expm::limit_semigroup(t, &a, &pq)?;
            let diff = (&split.sum() - &expected).operator_norm()?;
            Ok((diff / (1e-7 * (1.0 + (t.abs() * bp.big_r).exp())), Some(z)))
        })
        .collect();
    fold("two-circle-split", 1.0, "|outer + inner - difference| / 1e-7(1 + e^{|t|R})", rows)
}

pub fn contour_suite(seed: u64, instances: usize, max_dim: usize) -> Result<SuiteReport> {
    let mut suite = SuiteReport::new("contour-calculus");
    suite.push(contour_exp_check(seed, instances, max_dim)?);
    suite.push(two_circle_check(seed ^ 0x5eed, instances, max_dim)?);
    Ok(suite)
}

/// `z ∈ {−3R−1, −10R, −100R}`.
pub fn on_circle_z_values(big_r: f64) -> [Complex64; 3] {
    [
        Complex64::new(-3.0 * big_r - 1.0, 0.0),
        Complex64::new(-10.0 * big_r, 0.0),
        Complex64::new(-100.0 * big_r, 0.0),
    ]
}

/// The five on-circle estimates for one instance at the three standard `z`.
pub fn on_circle_checks(a: &Matrix, pq: &ProjectionPair, samples: usize) -> Result<Vec<CheckReport>> {
    let bp = check_params(a, pq)?;
    let (t1, t2) = (bp.t1, bp.t2);
    let mut out: Vec<CheckReport> = Vec::new();
    let mut add = |r: CheckReport| match out.iter_mut().find(|c| c.name == r.name) {
        Some(c) => c.merge(&r),
        None => out.push(r),
    };
    for z in on_circle_z_values(bp.big_r) {
        add(check_outer_resolvent(a, pq, z, &bp, samples)?);
        for t in [t1, t2] {
            add(check_outer_integral(a, pq, z, &bp, t)?);
        }
        add(check_inner_factorization(a, pq, z, &bp, samples)?);
        let (bound, identity) = check_inner_resolvent_p(a, pq, z, &bp, samples)?;
        add(bound);
        add(identity);
        for t in [-t2, t1, t2] {
            add(check_inner_integral(a, pq, z, &bp, t)?);
        }
    }
    Ok(out)
}

/// [`on_circle_checks`] over `instances` seeded instances of dimension `dim`
/// with rotating projection kinds, merged per check.
pub fn on_circle_suite(seed: u64, instances: usize, dim: usize, samples: usize) -> Result<SuiteReport> {
    let per: Vec<Result<Vec<CheckReport>>> = (0..instances)
        .into_par_iter()
        .map(|i| {
            let (a, pq) = random_instance(seed.wrapping_add(i as u64), dim, kind_for(i), 1.0)?;
            on_circle_checks(&a, &pq, samples)
        })
        .collect();
    let mut suite = SuiteReport::new("on-circle-estimates");
    for reports in per {
        for r in reports? {
            match suite.checks.iter_mut().find(|c| c.name == r.name) {
                Some(c) => c.merge(&r),
                None => suite.checks.push(r),
            }
        }
    }
    Ok(suite)
}

/// Main-sweep configuration around the instance's own radius `R`: `z` on the
/// negative axis from `−R` (outside the validity region) to `−2000R`, plus two
/// off-axis points.
pub fn headline_config(cfg: &SweepConfig) -> Result<SweepConfig> {
    let (a, pq, _) = sweep_instance(cfg)?;
    let delta = match cfg.delta {
        Some(d) => d,
        None => select_delta(&a, &pq, false)?,
    };
    let big_r = 2.0 * (a.operator_norm()? + delta) * pq.norm_p_minus_q();
    let mut z_list: Vec<Complex64> = [1.0, 2.02, 3.0, 6.0, 20.0, 200.0, 2000.0]
        .iter()
        .map(|f| Complex64::new(-f * big_r, 0.0))
        .collect();
    z_list.push(Complex64::new(-3.0 * big_r, 2.0 * big_r));
    z_list.push(Complex64::new(-10.0 * big_r, -30.0 * big_r));
    Ok(SweepConfig {
        z_list,
        delta: Some(delta),
        ..cfg.clone()
    })
}

/// Checks `error ≤ bound` on every record carrying a bound. Monotone decrease
/// of the error along the negative axis beyond `4R` is reported as a note only.
pub fn headline_check(records: &[ExperimentRecord]) -> (CheckReport, Vec<String>) {
    let mut check = CheckReport::new("headline-bound", 1.0).with_detail("error / (C1 e^{T1 Re z} + C2/(|z| - R))");
    for r in records.iter().filter(|r| r.bound.is_some()) {
        check.observe(r.ratio.unwrap_or(f64::NAN), r.z);
    }
    let mut notes = Vec::new();
    let mut ts: Vec<f64> = records.iter().filter_map(|r| r.t).collect();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    for t in ts {
        let along: Vec<&ExperimentRecord> = records
            .iter()
            .filter(|r| {
                r.t == Some(t)
                    && r.z.is_some_and(|z| z.im == 0.0 && -z.re > 4.0 * r.big_r.unwrap_or(f64::INFINITY))
            })
            .collect();
        for w in along.windows(2) {
            if let (Some(e0), Some(e1)) = (w[0].error, w[1].error) {
                if e1 > e0 {
                    notes.push(format!(
                        "warning: error grows from {e0:.3e} to {e1:.3e} between z={} and z={} at t={t}",
                        w[0].z.unwrap().re,
                        w[1].z.unwrap().re
                    ));
                }
            }
        }
    }
    (check, notes)
}

/// Fitted order of `‖e^{A+zP} − e^{QAQ}Q‖` in `1/|z|` on the Reference Instance
/// for `z = −10^{3}, …, −10^{6}`.
pub fn reference_rate() -> Result<f64> {
    let cfg = SweepConfig {
        reference: true,
        t_grid: vec![1.0],
        z_list: (0..=6).map(|j| Complex64::new(-(10f64.powf(3.0 + 0.5 * j as f64)), 0.0)).collect(),
        ..SweepConfig::default()
    };
    let records = main_sweep(&cfg)?;
    let xs: Vec<f64> = records.iter().map(|r| 1.0 / r.z.unwrap().norm()).collect();
    let ys: Vec<f64> = records.iter().map(|r| r.error.unwrap_or(f64::NAN)).collect();
    fitted_decay_exponent(&xs, &ys)
}

pub fn reference_rate_check() -> Result<CheckReport> {
    let exponent = reference_rate()?;
    let mut check = CheckReport::new("reference-linear-rate", 1.0)
        .with_detail(format!("|exponent - 1| / 0.05, exponent={exponent:.6}"));
    check.observe((exponent - 1.0).abs() / 0.05, None);
    Ok(check)
}

/// The headline bound on the configured instance plus the Reference Instance
/// rate.
pub fn headline_suite(cfg: &SweepConfig) -> Result<(SuiteReport, Vec<ExperimentRecord>)> {
    let records = main_sweep(&headline_config(cfg)?)?;
    let (check, notes) = headline_check(&records);
    let mut suite = SuiteReport::new("headline-bound");
    suite.push(check);
    suite.push(reference_rate_check()?);
    suite.notes = notes;
    Ok((suite, records))
}

/// Sup Zeno errors over [`ZENO_T_GRID`] at the [`ZENO_LADDER`] factor counts:
/// decreasing along the ladder and below [`ZENO_TARGET`] at the end.
pub fn zeno_checks(records: &[ExperimentRecord]) -> (CheckReport, CheckReport) {
    let sups: Vec<f64> = ZENO_LADDER
        .iter()
        .map(|&k| {
            records
                .iter()
                .find(|r| r.experiment == EXPERIMENT_ZENO_SUP && r.k == Some(k))
                .and_then(|r| r.error)
                .unwrap_or(f64::NAN)
        })
        .collect();
    let mut decreasing = CheckReport::new("zeno-sup-decreasing", 1.0).with_detail("sup(k') / sup(k) for k < k'");
    for w in sups.windows(2) {
        // Q = 0 gives identically zero errors, which count as non-increasing
        let ratio = if w[0] == 0.0 && w[1] == 0.0 { 0.0 } else { w[1] / w[0] };
        decreasing.observe(ratio, None);
    }
    let mut target = CheckReport::new("zeno-sup-target", 1.0)
        .with_detail(format!("sup at k={} / {ZENO_TARGET:e}", ZENO_LADDER[ZENO_LADDER.len() - 1]));
    target.observe(sups[sups.len() - 1] / ZENO_TARGET, None);
    (decreasing, target)
}

/// `error·k/|t| = 1` to `1e-12` on the Reference Instance.
pub fn reference_zeno_check(k_list: &[u64]) -> Result<(CheckReport, Vec<ExperimentRecord>)> {
    let cfg = SweepConfig {
        reference: true,
        t_grid: ZENO_T_GRID.to_vec(),
        k_list: k_list.to_vec(),
        ..SweepConfig::default()
    };
    let records = zeno_sweep(&cfg)?;
    let mut check = CheckReport::new("reference-zeno-exact", 1.0).with_detail("|error k/|t| - 1| / 1e-12");
    for r in records.iter().filter(|r| r.experiment == EXPERIMENT_ZENO) {
        let (t, k) = (r.t.unwrap(), r.k.unwrap() as f64);
        check.observe((r.error.unwrap_or(f64::NAN) * k / t.abs() - 1.0).abs() / 1e-12, None);
    }
    Ok((check, records))
}

/// Zeno sweep over [`ZENO_T_GRID`] and [`ZENO_LADDER`] for `instances`
/// consecutive seeds, plus the exact-rate check on the Reference Instance.
pub fn zeno_suite(cfg: &SweepConfig, instances: usize) -> Result<(SuiteReport, Vec<ExperimentRecord>)> {
    let runs: Vec<Result<Vec<ExperimentRecord>>> = (0..instances as u64)
        .into_par_iter()
        .map(|i| {
            zeno_sweep(&SweepConfig {
                seed: cfg.seed.wrapping_add(i),
                t_grid: ZENO_T_GRID.to_vec(),
                k_list: ZENO_LADDER.to_vec(),
                reference: false,
                ..cfg.clone()
            })
        })
        .collect();
    let mut suite = SuiteReport::new("zeno-limit");
    let mut all = Vec::new();
    let mut decreasing: Option<CheckReport> = None;
    let mut target: Option<CheckReport> = None;
    for run in runs {
        let run = run?;
        let (d, t) = zeno_checks(&run);
        match decreasing.as_mut() {
            Some(c) => c.merge(&d),
            None => decreasing = Some(d),
        }
        match target.as_mut() {
            Some(c) => c.merge(&t),
            None => target = Some(t),
        }
        let xs: Vec<f64> = ZENO_LADDER.iter().map(|&k| 1.0 / k as f64).collect();
        let ys: Vec<f64> = ZENO_LADDER
            .iter()
            .filter_map(|&k| run.iter().find(|r| r.experiment == EXPERIMENT_ZENO_SUP && r.k == Some(k)))
            .filter_map(|r| r.error)
            .collect();
        if let Ok(order) = fitted_decay_exponent(&xs, &ys) {
            suite.notes.push(format!("seed {}: fitted order in 1/k = {order:.4}", run[0].seed));
        }
        all.extend(run);
    }
    if let Some(d) = decreasing {
        suite.push(d);
    }
    if let Some(t) = target {
        suite.push(t);
    }
    let (exact, reference_records) = reference_zeno_check(&[1, 3, 64, 1000, 1 << 14])?;
    suite.push(exact);
    all.extend(reference_records);
    Ok((suite, all))
}

/// Identity chain on the zero generator, the Reference Instance and the given
/// instance, and the semigroup law on the given instance.
pub fn identities_suite(a: &Matrix, pq: &ProjectionPair) -> Result<SuiteReport> {
    let grid = [0.1, 0.5, 1.0, 2.0];
    let (ra, rpq) = reference_instance();
    let zero_pq = ProjectionPair::new(Matrix::from_real_diag(&[1.0, 0.0, 0.0]))?;
    let mut suite = identity_suite(a, pq, &grid)?;
    for (sa, spq) in [(&ra, &rpq), (&Matrix::zeros(3), &zero_pq)] {
        let other = identity_suite(sa, spq, &grid)?;
        for (mine, theirs) in suite.checks.iter_mut().zip(&other.checks) {
            mine.merge(theirs);
        }
    }
    suite.push(semigroup_law_check(a, pq, &[0.0, 0.25, 0.5, 1.0, 1.5, 2.0])?);
    Ok(suite)
}

/// Everything `verify` runs, at desk-scale sample counts.
#[derive(Clone, Debug)]
pub struct Verification {
    pub suites: Vec<SuiteReport>,
    pub records: Vec<ExperimentRecord>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }
}

/// All invariant suites on the instance described by `cfg` (seed, dimension,
/// projection kind, scale) plus seeded side instances of dimension at most
/// `cfg.dim`.
pub fn verify(cfg: &SweepConfig) -> Result<Verification> {
    let seed = cfg.seed;
    let dim = cfg.dim.max(1);
    let (a, pq, _) = sweep_instance(cfg)?;
    let mut suites = vec![
        resolvent_forms_suite(seed, 60, dim, 9.0)?,
        resolvent_decay_suite(seed, 6, 40, dim)?,
        neumann_suite(seed, 40, dim, 1e-10)?,
        spectrum_localization_suite(cfg, 10)?,
        contour_suite(seed, 6, dim)?,
    ];

    let mut on_circle = SuiteReport::new("on-circle-estimates");
    let (ra, rpq) = reference_instance();
    for (ia, ipq) in [(&a, &pq), (&ra, &rpq)] {
        for r in on_circle_checks(ia, ipq, 64)? {
            match on_circle.checks.iter_mut().find(|c| c.name == r.name) {
                Some(c) => c.merge(&r),
                None => on_circle.checks.push(r),
            }
        }
    }
    suites.push(on_circle);

    let (headline, mut records) = headline_suite(cfg)?;
    suites.push(headline);
    let (zeno, zeno_records) = zeno_suite(cfg, 2)?;
    suites.push(zeno);
    records.extend(zeno_records);
    suites.push(identities_suite(&a, &pq)?);
    let counter = counterexample_run()?;
    suites.push(counter.suite);
    Ok(Verification { suites, records })
}
