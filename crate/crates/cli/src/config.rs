//! Command-line flags, the optional JSON config file, and their merge.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use semigroup_lab::experiments::{ProjectionKind, SweepConfig};
use serde::Deserialize;

pub const SEED_ENV: &str = "SEMIGROUP_LAB_SEED";

#[derive(Debug, Parser)]
#[command(name = "semigroup-lab", version, about = "Projected and absorbed semigroups on complex matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Verify,
    SweepMain,
    SweepZeno,
    BoundConstants,
    LocalizeSpectrum,
    Counterexample,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every invariant suite on one seeded instance
    Verify(Flags),
    /// Error of e^{t(A+zP)} against e^{tQAQ}Q on a (z, t) grid, with the rate bound
    SweepMain(Flags),
    /// Error of (e^{(t/k)A}Q)^k against e^{tQAQ}Q on a (k, t) grid
    SweepZeno(Flags),
    /// Print the constants delta, r, R, C1, C2 and the sampled sup of |M|
    BoundConstants(Flags),
    /// Check that the spectrum of A+zP lies in the two disks of radius r
    LocalizeSpectrum(Flags),
    /// The scalar case A = 0, P = 1 where convergence fails for t < 0
    Counterexample(Flags),
}

impl Command {
    pub fn split(self) -> (CommandKind, Flags) {
        match self {
            Command::Verify(f) => (CommandKind::Verify, f),
            Command::SweepMain(f) => (CommandKind::SweepMain, f),
            Command::SweepZeno(f) => (CommandKind::SweepZeno, f),
            Command::BoundConstants(f) => (CommandKind::BoundConstants, f),
            Command::LocalizeSpectrum(f) => (CommandKind::LocalizeSpectrum, f),
            Command::Counterexample(f) => (CommandKind::Counterexample, f),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
pub enum Format {
    #[serde(rename = "csv")]
    Csv,
    #[serde(rename = "json-lines")]
    #[value(name = "json-lines")]
    JsonLines,
}

#[derive(Clone, Debug, Default, Args)]
pub struct Flags {
    /// Seed (falls back to $SEMIGROUP_LAB_SEED, then 0)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Matrix dimension
    #[arg(long)]
    pub dim: Option<usize>,
    /// Comma-separated times
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<String>,
    /// Comma-separated complex values written a+bi
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    /// Comma-separated Zeno factor counts
    #[arg(long)]
    pub k: Option<String>,
    /// Fixed delta instead of the doubling search
    #[arg(long)]
    pub delta: Option<f64>,
    /// orthogonal-coordinate, oblique or random-rank-m
    #[arg(long)]
    pub projection: Option<String>,
    /// Norm of the random generator A
    #[arg(long)]
    pub scale: Option<f64>,
    /// Use A = [[0,1],[0,0]], P = diag(1,0)
    #[arg(long)]
    pub reference: bool,
    /// Output file
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads (default: machine parallelism)
    #[arg(long)]
    pub threads: Option<usize>,
    /// JSON config file; flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Number of seeded instances for localize-spectrum
    #[arg(long)]
    pub instances: Option<usize>,
    /// Fill the wall_time_s column (makes output non-reproducible)
    #[arg(long)]
    pub timing: bool,
}

/// A `z` entry in a config file: a number, an `"a+bi"` string, or `[re, im]`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ZValue {
    Real(f64),
    Text(String),
    Pair([f64; 2]),
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileSweep {
    pub seed: Option<u64>,
    pub dim: Option<usize>,
    pub t_grid: Option<Vec<f64>>,
    pub z_list: Option<Vec<ZValue>>,
    pub k_list: Option<Vec<u64>>,
    pub delta: Option<f64>,
    pub projection_kind: Option<ProjectionKind>,
    pub scale: Option<f64>,
    pub reference: Option<bool>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub subcommand: Option<String>,
    pub sweep: Option<FileSweep>,
    pub output_path: Option<PathBuf>,
    pub format: Option<Format>,
    pub threads: Option<usize>,
    pub instances: Option<usize>,
    pub timing: Option<bool>,
}

/// Fully resolved run configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: CommandKind,
    pub sweep: SweepConfig,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    pub threads: Option<usize>,
    pub instances: usize,
    pub timing: bool,
}

pub fn command_name(kind: CommandKind) -> &'static str {
    match kind {
        CommandKind::Verify => "verify",
        CommandKind::SweepMain => "sweep-main",
        CommandKind::SweepZeno => "sweep-zeno",
        CommandKind::BoundConstants => "bound-constants",
        CommandKind::LocalizeSpectrum => "localize-spectrum",
        CommandKind::Counterexample => "counterexample",
    }
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` (also `i`, `-i`, exponents like `1e-3+2e2i`).
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("invalid complex number '{text}' (expected a+bi)");
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return match s.parse::<f64>() {
            Ok(re) if re.is_finite() => Ok(Complex64::new(re, 0.0)),
            _ => Err(bad()),
        };
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&p| (bytes[p] == b'+' || bytes[p] == b'-') && !matches!(bytes[p - 1], b'e' | b'E'));
    let (re_text, im_text) = match split {
        Some(p) => (&body[..p], &body[p..]),
        None => ("0", body),
    };
    let im = match im_text {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|_| bad())?,
    };
    let re = re_text.parse::<f64>().map_err(|_| bad())?;
    if !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

fn parse_list<T>(text: &str, what: &str, item: impl Fn(&str) -> Result<T, String>) -> Result<Vec<T>, String> {
    let items: Vec<&str> = text.split(',').map(str::trim).collect();
    if items.iter().any(|s| s.is_empty()) {
        return Err(format!("empty entry in {what} list '{text}'"));
    }
    items.into_iter().map(item).collect()
}

pub fn parse_reals(text: &str) -> Result<Vec<f64>, String> {
    parse_list(text, "--t", |s| s.parse::<f64>().map_err(|_| format!("invalid number '{s}'")))
}

pub fn parse_complexes(text: &str) -> Result<Vec<Complex64>, String> {
    parse_list(text, "--z", parse_complex)
}

pub fn parse_counts(text: &str) -> Result<Vec<u64>, String> {
    parse_list(text, "--k", |s| s.parse::<u64>().map_err(|_| format!("invalid count '{s}'")))
}

fn z_value(v: &ZValue) -> Result<Complex64, String> {
    match v {
        ZValue::Real(re) => Ok(Complex64::new(*re, 0.0)),
        ZValue::Text(s) => parse_complex(s),
        ZValue::Pair([re, im]) => Ok(Complex64::new(*re, *im)),
    }
}

pub fn load_file(path: &PathBuf) -> Result<FileConfig, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
}

/// Default grids per subcommand; the Zeno sweep covers `t` of both signs.
fn defaults_for(kind: CommandKind) -> SweepConfig {
    let mut cfg = SweepConfig::default();
    if kind == CommandKind::SweepZeno {
        cfg.t_grid = vec![-2.0, -1.0, -0.5, 0.5, 1.0, 2.0];
    }
    cfg
}

/// Merges defaults, the config file, the seed environment variable and the
/// flags, in increasing order of precedence (the variable only supplies the
/// seed when neither flag nor file does).
pub fn resolve(kind: CommandKind, flags: Flags, env_seed: Option<String>) -> Result<RunConfig, String> {
    let file = match &flags.config {
        Some(path) => load_file(path)?,
        None => FileConfig::default(),
    };
    if let Some(name) = &file.subcommand {
        if name != command_name(kind) {
            return Err(format!(
                "config file is for subcommand '{name}' but '{}' was invoked",
                command_name(kind)
            ));
        }
    }
    let mut sweep = defaults_for(kind);
    let fs = file.sweep.clone().unwrap_or_default();
    let env_seed = match env_seed {
        Some(s) => Some(
            s.trim()
                .parse::<u64>()
                .map_err(|_| format!("{SEED_ENV} must be an unsigned integer, got '{s}'"))?,
        ),
        None => None,
    };
    sweep.seed = flags.seed.or(fs.seed).or(env_seed).unwrap_or(0);
    sweep.dim = flags.dim.or(fs.dim).unwrap_or(sweep.dim);
    if let Some(t) = fs.t_grid {
        sweep.t_grid = t;
    }
    if let Some(t) = &flags.t {
        sweep.t_grid = parse_reals(t)?;
    }
    if let Some(z) = &fs.z_list {
        sweep.z_list = z.iter().map(z_value).collect::<Result<_, _>>()?;
    }
    if let Some(z) = &flags.z {
        sweep.z_list = parse_complexes(z)?;
    }
    if let Some(k) = fs.k_list {
        sweep.k_list = k;
    }
    if let Some(k) = &flags.k {
        sweep.k_list = parse_counts(k)?;
    }
    sweep.delta = flags.delta.or(fs.delta);
    sweep.projection_kind = match &flags.projection {
        Some(p) => p.parse().map_err(|e: semigroup_lab::Error| e.to_string())?,
        None => fs.projection_kind.unwrap_or(sweep.projection_kind),
    };
    sweep.scale = flags.scale.or(fs.scale).unwrap_or(sweep.scale);
    sweep.reference = flags.reference || fs.reference.unwrap_or(false);

    if sweep.dim == 0 {
        return Err("--dim must be at least 1".into());
    }
    if let Some(d) = sweep.delta {
        if !(d > 0.0) || !d.is_finite() {
            return Err(format!("--delta must be positive, got {d}"));
        }
    }
    if !(sweep.scale >= 0.0) || !sweep.scale.is_finite() {
        return Err(format!("--scale must be finite and non-negative, got {}", sweep.scale));
    }
    if sweep.k_list.contains(&0) {
        return Err("--k entries must be at least 1".into());
    }
    let threads = flags.threads.or(file.threads);
    if threads == Some(0) {
        return Err("--threads must be at least 1".into());
    }
    let instances = flags.instances.or(file.instances).unwrap_or(10);
    if instances == 0 {
        return Err("--instances must be at least 1".into());
    }
    Ok(RunConfig {
        command: kind,
        sweep,
        output_path: flags.out.or(file.output_path),
        format: flags.format.or(file.format).unwrap_or(Format::Csv),
        threads,
        instances,
        timing: flags.timing || file.timing.unwrap_or(false),
    })
}
