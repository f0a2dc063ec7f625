//! Command-line front end. [`run`] returns the process exit code: 0 when every
//! hard assertion passed, 1 on an assertion failure or numerical error, 2 on a
//! usage or configuration error.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod output;

use std::io::Write;

use clap::Parser;
use semigroup_lab::experiments::{
    counterexample_run, main_sweep, spectrum_localization_suite, sweep_bound_params, sweep_instance, zeno_sweep,
    ExperimentRecord, EXPERIMENT_COUNTEREXAMPLE, EXPERIMENT_ZENO_SUP,
};
use semigroup_lab::report::SuiteReport;
use semigroup_lab::suites::verify;

use config::{resolve, Cli, CommandKind, RunConfig, SEED_ENV};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Runs the CLI with the given arguments (the first one is the program name),
/// writing the human summary to `stdout`.
pub fn run_with<W: Write>(argv: &[String], stdout: &mut W) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let (kind, flags) = cli.command.split();
    let cfg = match resolve(kind, flags, std::env::var(SEED_ENV).ok()) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads.unwrap_or(0))
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return EXIT_FAILED;
        }
    };
    match pool.install(|| execute(&cfg)) {
        Ok(outcome) => {
            let _ = stdout.write_all(outcome.summary.as_bytes());
            if let Some(path) = &cfg.output_path {
                if let Err(e) = std::fs::write(path, outcome.file) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return EXIT_FAILED;
                }
            }
            if outcome.passed {
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Numerical(e)) => {
            eprintln!("error: {e}");
            EXIT_FAILED
        }
    }
}

pub fn run(argv: &[String]) -> i32 {
    run_with(argv, &mut std::io::stdout().lock())
}

struct Outcome {
    summary: String,
    file: String,
    passed: bool,
}

enum Failure {
    Usage(String),
    Numerical(semigroup_lab::Error),
}

impl From<semigroup_lab::Error> for Failure {
    fn from(e: semigroup_lab::Error) -> Self {
        match e {
            semigroup_lab::Error::InvalidArgument(msg) => Failure::Usage(msg),
            semigroup_lab::Error::TooManyFactors { .. } => Failure::Usage(e.to_string()),
            other => Failure::Numerical(other),
        }
    }
}

fn suites_summary(suites: &[SuiteReport]) -> String {
    let mut s = String::new();
    for suite in suites {
        s.push_str(&suite.to_string());
    }
    let failed = suites.iter().filter(|x| !x.passed()).count();
    s.push_str(&format!(
        "{} of {} suites passed\n",
        suites.len() - failed,
        suites.len()
    ));
    s
}

fn records_file(cfg: &RunConfig, records: &[ExperimentRecord]) -> String {
    output::render_records(records, cfg.format, cfg.timing)
}

fn execute(cfg: &RunConfig) -> Result<Outcome, Failure> {
    let sweep = &cfg.sweep;
    match cfg.command {
        CommandKind::Verify => {
            let v = verify(sweep)?;
            Ok(Outcome {
                summary: suites_summary(&v.suites),
                file: records_file(cfg, &v.records),
                passed: v.passed(),
            })
        }
        CommandKind::SweepMain => {
            let records = main_sweep(sweep)?;
            let violations = records.iter().filter(|r| !r.within_bound()).count();
            let bounded = records.iter().filter(|r| r.bound.is_some()).count();
            let overflowed = records.iter().filter(|r| r.error.is_none()).count();
            let max_ratio = records.iter().filter_map(|r| r.ratio).fold(0.0f64, f64::max);
            let mut summary = format!(
                "sweep-main: {} records, {bounded} inside the validity region, {overflowed} overflowed\n",
                records.len()
            );
            if bounded > 0 {
                summary.push_str(&format!("max error/bound = {max_ratio:.6e}\n"));
            }
            summary.push_str(&format!(
                "[{}] error <= bound on every record with a bound ({violations} violations)\n",
                if violations == 0 { "PASS" } else { "FAIL" }
            ));
            Ok(Outcome {
                summary,
                file: records_file(cfg, &records),
                passed: violations == 0,
            })
        }
        CommandKind::SweepZeno => {
            let records = zeno_sweep(sweep)?;
            let mut summary = format!("sweep-zeno: {} records\n", records.len());
            for r in records.iter().filter(|r| r.experiment == EXPERIMENT_ZENO_SUP) {
                let sup = r.error.map(|e| format!("{e:.6e}")).unwrap_or_else(|| "overflow".into());
                summary.push_str(&format!("k={} sup error={sup}\n", r.k.unwrap_or(0)));
            }
            Ok(Outcome {
                summary,
                file: records_file(cfg, &records),
                passed: true,
            })
        }
        CommandKind::BoundConstants => {
            if sweep.t_grid.iter().any(|t| !(*t > 0.0)) {
                return Err(Failure::Usage("bound constants need positive times".into()));
            }
            let (a, pq, kind) = sweep_instance(sweep)?;
            let bp = sweep_bound_params(sweep, &a, &pq)?;
            let summary = format!(
                "instance: {kind} dim={} seed={}\ndelta={:.6e} r={:.6e} R={:.6e}\nt1={} t2={}\nC1={:.6e} C2={:.6e}\nsup|M|={:.6e} (raw {:.6e}, {} samples)\nrho(QAQ)={:.6e} |QAQ|={:.6e} |P|={:.6e} |P-Q|={:.6e}\n",
                a.dim(),
                sweep.seed,
                bp.delta,
                bp.r,
                bp.big_r,
                bp.t1,
                bp.t2,
                bp.c1,
                bp.c2,
                bp.sup_m,
                bp.raw_sup_m,
                bp.m_samples,
                bp.spectral_radius_qaq,
                bp.norm_qaq,
                bp.norm_p,
                bp.norm_p_minus_q
            );
            Ok(Outcome {
                summary,
                file: output::render_bound_params(&bp, cfg.format),
                passed: true,
            })
        }
        CommandKind::LocalizeSpectrum => {
            let suite = spectrum_localization_suite(sweep, cfg.instances)?;
            Ok(Outcome {
                summary: suites_summary(std::slice::from_ref(&suite)),
                file: format!("{}\n", serde_json::to_string(&suite).expect("plain data")),
                passed: suite.passed(),
            })
        }
        CommandKind::Counterexample => {
            let run = counterexample_run()?;
            let mut records = Vec::new();
            for &(t, z, error) in &run.rows {
                records.push(ExperimentRecord {
                    experiment: EXPERIMENT_COUNTEREXAMPLE,
                    seed: 0,
                    dim: 1,
                    projection_kind: "identity".into(),
                    t: Some(t),
                    z: Some(z),
                    k: None,
                    error: Some(error),
                    bound: None,
                    ratio: None,
                    delta: None,
                    big_r: None,
                    wall_time: 0.0,
                });
            }
            Ok(Outcome {
                summary: run.suite.to_string(),
                file: records_file(cfg, &records),
                passed: run.suite.passed(),
            })
        }
    }
}
