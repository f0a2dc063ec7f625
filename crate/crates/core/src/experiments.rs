//! Seeded instances and end-to-end sweeps producing tabular records.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{compute_bound_params, select_delta, BoundParams};
use crate::error::{Error, Result};
use crate::expm::{expm, limit_semigroup, perturbed_semigroup};
use crate::linalg::random::{complex_gaussian_matrix, random_unitary, rng_from_seed};
use crate::linalg::{Matrix, ProjectionPair};
use crate::report::{CheckReport, SuiteReport};

/// Largest Zeno factor count accepted by [`zeno_sweep`].
pub const MAX_ZENO_FACTORS: u64 = 1 << 20;
const IDENTITY_RTOL: f64 = 1e-9;
const LOCALIZATION_RTOL: f64 = 1e-7;

pub const EXPERIMENT_MAIN: &str = "main";
pub const EXPERIMENT_ZENO: &str = "zeno";
pub const EXPERIMENT_ZENO_SUP: &str = "zeno_sup";
pub const EXPERIMENT_COUNTEREXAMPLE: &str = "counterexample";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProjectionKind {
    /// Coordinate projection onto the first `⌈n/2⌉` axes.
    #[serde(rename = "orthogonal-coordinate")]
    OrthogonalCoordinate,
    /// Non-orthogonal projection of rank `⌈n/2⌉` with `‖P‖ > 1`.
    #[serde(rename = "oblique")]
    Oblique,
    /// Orthogonal projection of rank `⌈n/2⌉` onto a random subspace.
    #[serde(rename = "random-rank-m")]
    RandomRank,
}

impl ProjectionKind {
    pub const ALL: [ProjectionKind; 3] = [
        ProjectionKind::OrthogonalCoordinate,
        ProjectionKind::Oblique,
        ProjectionKind::RandomRank,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ProjectionKind::OrthogonalCoordinate => "orthogonal-coordinate",
            ProjectionKind::Oblique => "oblique",
            ProjectionKind::RandomRank => "random-rank-m",
        }
    }
}

impl fmt::Display for ProjectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProjectionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProjectionKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown projection kind '{s}' (expected orthogonal-coordinate, oblique or random-rank-m)"
                ))
            })
    }
}

/// Parameters of a sweep. `reference` replaces the seeded instance by the
/// Reference Instance, in which case `dim`, `projection_kind` and `scale`
/// are ignored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub seed: u64,
    pub dim: usize,
    pub t_grid: Vec<f64>,
    pub z_list: Vec<Complex64>,
    pub k_list: Vec<u64>,
    pub delta: Option<f64>,
    pub projection_kind: ProjectionKind,
    pub scale: f64,
    pub reference: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            seed: 0,
            dim: 8,
            t_grid: vec![0.5, 1.0, 2.0],
            z_list: vec![Complex64::new(-10.0, 0.0), Complex64::new(-50.0, 0.0), Complex64::new(-250.0, 0.0)],
            k_list: vec![1, 4, 16, 64, 256, 1024, 4096, 16384],
            delta: None,
            projection_kind: ProjectionKind::OrthogonalCoordinate,
            scale: 1.0,
            reference: false,
        }
    }
}

/// One sweep sample. `error` is `None` when the exponential overflowed;
/// `bound` is present only inside the bound's validity region.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub experiment: &'static str,
    pub seed: u64,
    pub dim: usize,
    pub projection_kind: String,
    pub t: Option<f64>,
    pub z: Option<Complex64>,
    pub k: Option<u64>,
    pub error: Option<f64>,
    pub bound: Option<f64>,
    pub ratio: Option<f64>,
    pub delta: Option<f64>,
    pub big_r: Option<f64>,
    /// Seconds spent on this record; the only non-deterministic field.
    pub wall_time: f64,
}

impl ExperimentRecord {
    fn blank(experiment: &'static str, seed: u64, dim: usize, kind: &str) -> Self {
        ExperimentRecord {
            experiment,
            seed,
            dim,
            projection_kind: kind.to_string(),
            t: None,
            z: None,
            k: None,
            error: None,
            bound: None,
            ratio: None,
            delta: None,
            big_r: None,
            wall_time: 0.0,
        }
    }

    /// `ratio ≤ 1` wherever a bound is present; records without a bound pass.
    pub fn within_bound(&self) -> bool {
        match (self.bound, self.ratio) {
            (Some(_), Some(r)) => r <= 1.0,
            (Some(_), None) => false,
            _ => true,
        }
    }
}

/// `A = [[0, 1], [0, 0]]`, `P = diag(1, 0)`: the smallest instance with
/// `AQ ≠ 0` and `QAQ = 0`, on which every quantity has a closed form.
pub fn reference_instance() -> (Matrix, ProjectionPair) {
    let a = Matrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).expect("square");
    let pq = ProjectionPair::new(Matrix::from_real_diag(&[1.0, 0.0])).expect("idempotent");
    (a, pq)
}

/// Rank used for every projection kind.
pub fn projection_rank(dim: usize) -> usize {
    dim.div_ceil(2)
}

/// `P = U·[[I_m, X], [0, 0]]·Uᴴ` with `U` a seeded unitary and `X` a Gaussian
/// `m × (n−m)` block rescaled to `‖X‖ = skew`, so that `‖P‖ = sqrt(1 + skew²)`.
pub fn oblique_projection<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize, skew: f64) -> Result<ProjectionPair> {
    if rank > dim {
        return Err(Error::InvalidArgument(format!("rank {rank} exceeds dimension {dim}")));
    }
    if !(skew >= 0.0) || !skew.is_finite() {
        return Err(Error::InvalidArgument(format!("skew must be finite and non-negative, got {skew}")));
    }
    let u = random_unitary(rng, dim);
    let g = complex_gaussian_matrix(rng, dim);
    let mut block = Matrix::from_fn(dim, |i, j| {
        if i < rank && j >= rank {
            g[(i, j)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let block_norm = block.operator_norm()?;
    if block_norm > 0.0 {
        block = block.scale_real(skew / block_norm);
    }
    for i in 0..rank {
        block[(i, i)] = Complex64::new(1.0, 0.0);
    }
    ProjectionPair::new(&(&u * &block) * &u.adjoint())
}

/// Seeded `(A, P)` with complex Gaussian `A` normalized to `‖A‖ = scale`.
/// The oblique kind draws its skew uniformly from `[0.5, 3]`.
pub fn random_instance(seed: u64, dim: usize, kind: ProjectionKind, scale: f64) -> Result<(Matrix, ProjectionPair)> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    if !(scale >= 0.0) || !scale.is_finite() {
        return Err(Error::InvalidArgument(format!("scale must be finite and non-negative, got {scale}")));
    }
    let mut rng = rng_from_seed(seed);
    let g = complex_gaussian_matrix(&mut rng, dim);
    let norm = g.operator_norm()?;
    let a = if norm > 0.0 { g.scale_real(scale / norm) } else { g };
    let m = projection_rank(dim);
    let pq = match kind {
        ProjectionKind::OrthogonalCoordinate => {
            let diag: Vec<f64> = (0..dim).map(|i| if i < m { 1.0 } else { 0.0 }).collect();
            ProjectionPair::new(Matrix::from_real_diag(&diag))?
        }
        ProjectionKind::Oblique => {
            let skew = rng.random_range(0.5..=3.0);
            oblique_projection(&mut rng, dim, m, skew)?
        }
        ProjectionKind::RandomRank => {
            let u = random_unitary(&mut rng, dim);
            let diag: Vec<f64> = (0..dim).map(|i| if i < m { 1.0 } else { 0.0 }).collect();
            ProjectionPair::new(&(&u * &Matrix::from_real_diag(&diag)) * &u.adjoint())?
        }
    };
    Ok((a, pq))
}

/// The instance a sweep runs on, with its metadata `(dim, kind label)`.
pub fn sweep_instance(cfg: &SweepConfig) -> Result<(Matrix, ProjectionPair, String)> {
    if cfg.reference {
        let (a, pq) = reference_instance();
        Ok((a, pq, "reference".to_string()))
    } else {
        let (a, pq) = random_instance(cfg.seed, cfg.dim, cfg.projection_kind, cfg.scale)?;
        Ok((a, pq, cfg.projection_kind.to_string()))
    }
}

fn overflow_as_none(r: Result<f64>) -> Result<Option<f64>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::ExpOverflow) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Bound constants for a sweep: `δ` from the config or [`select_delta`], and
/// the time window spanned by the grid.
pub fn sweep_bound_params(cfg: &SweepConfig, a: &Matrix, pq: &ProjectionPair) -> Result<BoundParams> {
    let t1 = cfg.t_grid.iter().copied().fold(f64::INFINITY, f64::min);
    let t2 = cfg.t_grid.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let delta = match cfg.delta {
        Some(d) => d,
        None => select_delta(a, pq, false)?,
    };
    compute_bound_params(a, pq, t1, t2, delta)
}

/// `‖e^{t(A+zP)} − e^{tQAQ}Q‖` on the `(z, t)` grid, with the rate bound
/// wherever `Re z < −2R`. Records are sorted by `(|z|, t)`; an overflowing
/// exponential leaves `error` empty instead of aborting the sweep.
pub fn main_sweep(cfg: &SweepConfig) -> Result<Vec<ExperimentRecord>> {
    if cfg.t_grid.is_empty() || cfg.z_list.is_empty() {
        return Err(Error::InvalidArgument("main sweep needs a nonempty t grid and z list".into()));
    }
    if let Some(&t) = cfg.t_grid.iter().find(|t| !(**t > 0.0) || !t.is_finite()) {
        return Err(Error::InvalidArgument(format!("main sweep times must be positive, got {t}")));
    }
    let (a, pq, kind) = sweep_instance(cfg)?;
    let bp = sweep_bound_params(cfg, &a, &pq)?;

    let mut cells: Vec<(Complex64, f64)> = cfg
        .z_list
        .iter()
        .flat_map(|&z| cfg.t_grid.iter().map(move |&t| (z, t)))
        .collect();
    cells.sort_by(|x, y| x.0.norm().total_cmp(&y.0.norm()).then(x.1.total_cmp(&y.1)));

    let limits: Vec<Matrix> = cfg
        .t_grid
        .iter()
        .map(|&t| limit_semigroup(t, &a, &pq))
        .collect::<Result<_>>()?;
    let limit_for = |t: f64| {
        let i = cfg.t_grid.iter().position(|&s| s == t).expect("t from grid");
        &limits[i]
    };

    cells
        .par_iter()
        .map(|&(z, t)| {
            let start = Instant::now();
            let error = overflow_as_none(
                perturbed_semigroup(t, &a, z, &pq).and_then(|e| (&e - limit_for(t)).operator_norm()),
            )?;
            let bound = if bp.in_validity_region(z) {
                Some(bp.bound(z, t)?)
            } else {
                None
            };
            let mut rec = ExperimentRecord::blank(EXPERIMENT_MAIN, cfg.seed, a.dim(), &kind);
            rec.t = Some(t);
            rec.z = Some(z);
            rec.error = error;
            rec.bound = bound;
            rec.ratio = match (error, bound) {
                (Some(e), Some(b)) => Some(e / b),
                _ => None,
            };
            rec.delta = Some(bp.delta);
            rec.big_r = Some(bp.big_r);
            rec.wall_time = start.elapsed().as_secs_f64();
            Ok(rec)
        })
        .collect()
}

/// `(e^{(t/k)A}Q)^k` by binary powering of the single repeated factor.
pub fn zeno_product(t: f64, k: u64, a: &Matrix, pq: &ProjectionPair) -> Result<Matrix> {
    if k == 0 || k > MAX_ZENO_FACTORS {
        return Err(Error::TooManyFactors { k, max: MAX_ZENO_FACTORS });
    }
    let factor = &expm(&a.scale_real(t / k as f64))? * pq.q();
    let product = factor.pow(k);
    if !product.is_finite() {
        return Err(Error::ExpOverflow);
    }
    Ok(product)
}

/// `‖(e^{(t/k)A}Q)^k − e^{tQAQ}Q‖` on the `(k, t)` grid (any sign of `t`),
/// followed by one `zeno_sup` record per `k` holding the sup over the grid.
pub fn zeno_sweep(cfg: &SweepConfig) -> Result<Vec<ExperimentRecord>> {
    if cfg.k_list.is_empty() || cfg.t_grid.is_empty() {
        return Err(Error::InvalidArgument("Zeno sweep needs a nonempty k list and t grid".into()));
    }
    if let Some(&k) = cfg.k_list.iter().find(|&&k| k == 0 || k > MAX_ZENO_FACTORS) {
        return Err(Error::TooManyFactors { k, max: MAX_ZENO_FACTORS });
    }
    if let Some(&t) = cfg.t_grid.iter().find(|t| !t.is_finite()) {
        return Err(Error::InvalidArgument(format!("times must be finite, got {t}")));
    }
    let (a, pq, kind) = sweep_instance(cfg)?;
    let mut ks = cfg.k_list.clone();
    ks.sort_unstable();
    ks.dedup();

    let limits: Vec<Matrix> = cfg
        .t_grid
        .iter()
        .map(|&t| limit_semigroup(t, &a, &pq))
        .collect::<Result<_>>()?;
    let cells: Vec<(u64, usize)> = ks
        .iter()
        .flat_map(|&k| (0..cfg.t_grid.len()).map(move |i| (k, i)))
        .collect();
    let mut records: Vec<ExperimentRecord> = cells
        .par_iter()
        .map(|&(k, i)| {
            let start = Instant::now();
            let t = cfg.t_grid[i];
            let error = overflow_as_none(zeno_product(t, k, &a, &pq).and_then(|p| (&p - &limits[i]).operator_norm()))?;
            let mut rec = ExperimentRecord::blank(EXPERIMENT_ZENO, cfg.seed, a.dim(), &kind);
            rec.t = Some(t);
            rec.k = Some(k);
            rec.error = error;
            rec.wall_time = start.elapsed().as_secs_f64();
            Ok(rec)
        })
        .collect::<Result<_>>()?;

    for &k in &ks {
        let rows: Vec<&ExperimentRecord> = records.iter().filter(|r| r.k == Some(k)).collect();
        let mut sup = CheckReport::new("sup", f64::INFINITY);
        for r in &rows {
            sup.observe(r.error.unwrap_or(f64::NAN), None);
        }
        let mut rec = ExperimentRecord::blank(EXPERIMENT_ZENO_SUP, cfg.seed, a.dim(), &kind);
        rec.k = Some(k);
        rec.error = if sup.max_ratio.is_nan() { None } else { Some(sup.max_ratio) };
        rec.wall_time = rows.iter().map(|r| r.wall_time).sum();
        records.push(rec);
    }
    Ok(records)
}

/// Least-squares slope of `log error` against `log x`; with `x = 1/|z|` or
/// `x = 1/k` this is the observed convergence order.
pub fn fitted_decay_exponent(xs: &[f64], errors: &[f64]) -> Result<f64> {
    if xs.len() != errors.len() || xs.len() < 2 {
        return Err(Error::InvalidArgument("need at least two matching samples".into()));
    }
    if xs.iter().chain(errors).any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidArgument("samples must be positive and finite".into()));
    }
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = errors.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("abscissae must not all coincide".into()));
    }
    Ok(sxy / sxx)
}

/// `e^{tQAQ}Q` against `e^{tQA}Q`, `Qe^{tAQ}`, `Qe^{tQAQ}` and `Qe^{tQAQ}Q`,
/// each within `1e-9·e^{|t|‖A‖‖Q‖²}`.
pub fn identity_suite(a: &Matrix, pq: &ProjectionPair, t_grid: &[f64]) -> Result<SuiteReport> {
    let q = pq.q();
    let qa = q * a;
    let aq = a * q;
    let qaq = pq.compress(a);
    let norm_a = a.operator_norm()?;
    let mut checks = [
        CheckReport::new("identity-qa", 1.0),
        CheckReport::new("identity-aq", 1.0),
        CheckReport::new("identity-left-q", 1.0),
        CheckReport::new("identity-both-q", 1.0),
    ];
    for &t in t_grid {
        let base = limit_semigroup(t, a, pq)?;
        let e_qaq = expm(&qaq.scale_real(t))?;
        let others = [
            &expm(&qa.scale_real(t))? * q,
            q * &expm(&aq.scale_real(t))?,
            q * &e_qaq,
            &(q * &e_qaq) * q,
        ];
        let tol = IDENTITY_RTOL * (t.abs() * norm_a * pq.norm_q() * pq.norm_q()).exp();
        for (check, other) in checks.iter_mut().zip(&others) {
            check.observe((&base - other).operator_norm()? / tol, None);
        }
    }
    let mut suite = SuiteReport::new("identities");
    for c in checks {
        suite.push(c.with_detail("difference / 1e-9 e^{|t| |A| |Q|^2}"));
    }
    Ok(suite)
}

/// `S(t)S(s) = S(t+s)` for `S(t) = e^{tQAQ}Q` within `1e-9·e^{(|t|+|s|)‖QAQ‖}`.
pub fn semigroup_law_check(a: &Matrix, pq: &ProjectionPair, t_grid: &[f64]) -> Result<CheckReport> {
    let norm_qaq = pq.compress(a).operator_norm()?;
    let values: Vec<Matrix> = t_grid.iter().map(|&t| limit_semigroup(t, a, pq)).collect::<Result<_>>()?;
    let mut check = CheckReport::new("semigroup-law", 1.0).with_detail("defect / 1e-9 e^{(|t|+|s|) |QAQ|}");
    for (i, &t) in t_grid.iter().enumerate() {
        for (j, &s) in t_grid.iter().enumerate() {
            let joint = limit_semigroup(t + s, a, pq)?;
            let defect = (&(&values[i] * &values[j]) - &joint).operator_norm()?;
            check.observe(defect / (IDENTITY_RTOL * ((t.abs() + s.abs()) * norm_qaq).exp()), None);
        }
    }
    Ok(check)
}

/// The scalar counterexample `X = ℂ`, `A = 0`, `P = 1` (so `Q = 0`).
#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleRun {
    /// `(t, z, |e^{tz} − 0|)`
    pub rows: Vec<(f64, Complex64, f64)>,
    pub suite: SuiteReport,
}

/// For `t = −1` the error `e^{|Re z|}` grows as `Re z → −∞`; for `t = 1` it
/// decays. Checks `error(t=−1, z=−10) = e^{10}` to `1e-6` relative and
/// monotone growth over `z ∈ {−1, −5, −10}`.
pub fn counterexample_run() -> Result<CounterexampleRun> {
    let a = Matrix::zeros(1);
    let pq = ProjectionPair::new(Matrix::identity(1))?;
    let scenarios = [(-1.0, -1.0), (-1.0, -5.0), (-1.0, -10.0), (1.0, -10.0)];
    let mut rows = Vec::new();
    for (t, re_z) in scenarios {
        let z = Complex64::new(re_z, 0.0);
        let diff = &perturbed_semigroup(t, &a, z, &pq)? - &limit_semigroup(t, &a, &pq)?;
        rows.push((t, z, diff.operator_norm()?));
    }
    let mut suite = SuiteReport::new("counterexample");
    let expected = 10f64.exp();
    let mut exact = CheckReport::new("negative-time-error", 1.0).with_detail("|error(t=-1,z=-10) - e^10| / (1e-6 e^10)");
    exact.observe((rows[2].2 - expected).abs() / (1e-6 * expected), None);
    suite.push(exact);
    let mut growth = CheckReport::new("negative-time-growth", 1.0).with_detail("error(z) / error(z') for |z| < |z'|");
    growth.observe(rows[0].2 / rows[1].2, None);
    growth.observe(rows[1].2 / rows[2].2, None);
    suite.push(growth);
    for (t, z, e) in &rows {
        suite.notes.push(format!("t={t} z={} error={e:.16e}", z.re));
    }
    Ok(CounterexampleRun { rows, suite })
}

/// Distance of `mu` to `B̄_r(0) ∪ B̄_r(z)`.
pub fn distance_to_disks(mu: Complex64, z: Complex64, r: f64) -> f64 {
    (mu.norm() - r).max(0.0).min(((mu - z).norm() - r).max(0.0))
}

/// Values of `z` used by [`spectrum_localization_suite`].
pub fn localization_z_values() -> [Complex64; 3] {
    [Complex64::new(-5.0, 0.0), Complex64::new(-50.0, -10.0), Complex64::new(-500.0, 0.0)]
}

/// Every eigenvalue of `A + zP` lies within `1e-7(1+|z|)` of the two closed
/// disks of radius `r = 2‖A‖‖P−Q‖` around `0` and `z`, for `instances`
/// consecutive seeds starting at `cfg.seed` (the Reference Instance alone if
/// `cfg.reference`).
pub fn spectrum_localization_suite(cfg: &SweepConfig, instances: usize) -> Result<SuiteReport> {
    let seeds: Vec<u64> = if cfg.reference {
        vec![cfg.seed]
    } else {
        (0..instances as u64).map(|i| cfg.seed.wrapping_add(i)).collect()
    };
    let cells: Vec<(u64, Complex64)> = seeds
        .iter()
        .flat_map(|&s| localization_z_values().into_iter().map(move |z| (s, z)))
        .collect();
    let ratios: Vec<Result<(f64, Complex64)>> = cells
        .par_iter()
        .map(|&(seed, z)| {
            let (a, pq, _) = sweep_instance(&SweepConfig { seed, ..cfg.clone() })?;
            let r = 2.0 * a.operator_norm()? * pq.norm_p_minus_q();
            let spectrum = (&a + &pq.p().scale(z)).eigenvalues()?;
            let mut worst = (0.0f64, Complex64::new(0.0, 0.0));
            for &mu in &spectrum.eigenvalues {
                let ratio = distance_to_disks(mu, z, r) / (LOCALIZATION_RTOL * (1.0 + z.norm()));
                if ratio > worst.0 {
                    worst = (ratio, mu);
                }
            }
            Ok(worst)
        })
        .collect();
    let mut check = CheckReport::new("spectral-localization", 1.0)
        .with_detail(format!("{} instances x 3 z, distance / 1e-7(1+|z|)", seeds.len()));
    for r in ratios {
        let (ratio, mu) = r?;
        check.observe(ratio, Some(mu));
    }
    let mut suite = SuiteReport::new("spectral-localization");
    suite.push(check);
    Ok(suite)
}
