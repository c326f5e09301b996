//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on invalid input or any other error, 2 when
//! `--check` is given and a report check fails.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use super::config::ExperimentConfig;
use super::experiments;
use crate::cadlag::{d_m1_star, d_m2, d_product_m2, d_uniform, MultiPath, StepFunction};
use crate::error::{Error, Result};
use crate::innovations::{dprime_iid_exact, dprime_statistic, sample_path_with, InnovationKind, InnovationSpec};
use crate::linear::{build_ma, partial_max_path, partial_sum_path, sample_coeffs, tilde_paths, CoefficientSample};
use crate::rng::{stream, Domain, StreamKey};
use crate::tail::TailModel;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "heavyma", version, about = "Heavy-tailed moving averages: path metrics and Monte Carlo experiments")]
pub struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Distance between two step functions stored as JSON.
    Metric(MetricArgs),
    /// Emit the sample paths of one replication as JSON.
    Simulate(SimulateArgs),
    /// Table of the short-lag joint exceedance statistic.
    Dprime(DprimeArgs),
    /// Run an experiment from a config file.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricKind {
    Uniform,
    M2,
    M1Star,
    /// Product M2 over arrays of step functions.
    Product,
}

#[derive(Debug, Args)]
pub struct MetricArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    #[arg(long, value_enum, default_value = "m2")]
    pub kind: MetricKind,
    #[arg(long, conflicts_with_all = ["uniform", "m1_star", "product"])]
    pub m2: bool,
    #[arg(long)]
    pub uniform: bool,
    #[arg(long)]
    pub m1_star: bool,
    #[arg(long)]
    pub product: bool,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

impl MetricArgs {
    fn selected(&self) -> MetricKind {
        if self.uniform {
            MetricKind::Uniform
        } else if self.m1_star {
            MetricKind::M1Star
        } else if self.product {
            MetricKind::Product
        } else if self.m2 {
            MetricKind::M2
        } else {
            self.kind
        }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    pub config: PathBuf,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub rep: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DprimeArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    /// AR(1) coefficient of the Gaussian copula; i.i.d. when absent.
    #[arg(long)]
    pub phi: Option<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = [1_000usize, 10_000, 100_000])]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    #[arg(long, default_value_t = 1.0)]
    pub x: f64,
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    pub config: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub reps: Option<usize>,
    /// Exit with status 2 if any check fails.
    #[arg(long)]
    pub check: bool,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let result = match cli.threads {
        Some(threads) => match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.command, out, err)),
            Err(e) => Err(Error::config("threads", e.to_string())),
        },
        None => dispatch(&cli.command, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID
        }
    }
}

fn dispatch(cmd: &Command, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<i32> {
    match cmd {
        Command::Metric(a) => metric(a, out),
        Command::Simulate(a) => simulate(a, out),
        Command::Dprime(a) => dprime(a, out),
        Command::Experiment(a) => experiment(a, out, err),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Formats a distance known to within `tol`, dropping digits below it.
pub fn format_distance(d: f64, tol: f64) -> String {
    let digits = ((-tol.log10()).floor() as i64 - 1).clamp(0, 15) as usize;
    let s = format!("{d:.digits$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn metric(a: &MetricArgs, out: &mut (dyn Write + Send)) -> Result<i32> {
    let kind = a.selected();
    let d = if kind == MetricKind::Product {
        let f = MultiPath::new(read_json::<Vec<StepFunction>>(&a.a)?)?;
        let g = MultiPath::new(read_json::<Vec<StepFunction>>(&a.b)?)?;
        d_product_m2(&f, &g, a.tol)?
    } else {
        let f: StepFunction = read_json(&a.a)?;
        let g: StepFunction = read_json(&a.b)?;
        match kind {
            MetricKind::Uniform => d_uniform(&f, &g),
            MetricKind::M2 => d_m2(&f, &g, a.tol)?,
            MetricKind::M1Star => d_m1_star(&f, &g, a.tol)?,
            MetricKind::Product => unreachable!(),
        }
    };
    let shown = if kind == MetricKind::Uniform { d.to_string() } else { format_distance(d, a.tol) };
    writeln!(out, "{shown}")?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct SimulatedPaths {
    n: usize,
    rep: u64,
    seed: u64,
    a_n: f64,
    coefficients: CoefficientSample,
    v: StepFunction,
    m: StepFunction,
    v_tilde: StepFunction,
    m_tilde: StepFunction,
}

fn simulate(a: &SimulateArgs, out: &mut (dyn Write + Send)) -> Result<i32> {
    let mut cfg = ExperimentConfig::load(&a.config)?;
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    if a.n < 1 {
        return Err(Error::config("n", "must be at least 1"));
    }
    let spec = cfg.innovation_spec()?;
    let tail = cfg.tail_model()?;
    let c = sample_coeffs(&cfg.coefficients, &mut stream(cfg.seed, Domain::Coefficients, a.rep))?;
    let mut rng = StreamKey::new(cfg.seed).with(Domain::Innovations).index(a.n as u64).index(a.rep).rng();
    let z = sample_path_with(&spec, a.n, c.order(), 0, &mut rng)?;
    let a_n = tail.a_n(a.n as u64)?;
    let x = build_ma(&c, &z)?;
    let (v_tilde, m_tilde) = tilde_paths(&z, &c, a_n)?;
    let paths = SimulatedPaths {
        n: a.n,
        rep: a.rep,
        seed: cfg.seed,
        a_n,
        v: partial_sum_path(x.values(), a_n)?,
        m: partial_max_path(x.values(), a_n)?,
        coefficients: c,
        v_tilde,
        m_tilde,
    };
    let text = serde_json::to_string(&paths)?;
    match &a.out {
        Some(path) => std::fs::write(path, text)?,
        None => writeln!(out, "{text}")?,
    }
    Ok(EXIT_OK)
}

fn dprime(a: &DprimeArgs, out: &mut (dyn Write + Send)) -> Result<i32> {
    let tail = TailModel::new(a.alpha, a.p).map_err(|e| Error::config("alpha/p", e.to_string()))?;
    let kind = match a.phi {
        Some(phi) => InnovationKind::GaussCopulaAr1 { phi },
        None => InnovationKind::Iid,
    };
    let spec = InnovationSpec::new(kind, tail).map_err(|e| Error::config("phi", e.to_string()))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "k", "x", "estimate", "std_error", "reps", "iid_exact"])?;
    for &n in &a.n {
        let est = dprime_statistic(&spec, n, a.k, a.x, a.reps, a.seed)?;
        let exact = dprime_iid_exact(&tail, n, a.k, a.x)?;
        w.write_record([
            n.to_string(),
            a.k.to_string(),
            a.x.to_string(),
            est.mean.to_string(),
            est.std_error.to_string(),
            est.reps.to_string(),
            exact.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(EXIT_OK)
}

fn experiment(a: &ExperimentArgs, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<i32> {
    let mut cfg = ExperimentConfig::load(&a.config)?;
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    if let Some(reps) = a.reps {
        cfg.reps = reps;
    }
    cfg.validate()?;
    let report = experiments::run(&cfg)?;
    match &a.out_dir {
        Some(dir) => {
            for path in report.write_to_dir(dir)? {
                writeln!(err, "wrote {}", path.display())?;
            }
        }
        None => report.write_csv(&mut *out)?,
    }
    for c in &report.checks {
        writeln!(err, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
    }
    if a.check && !report.all_passed() {
        return Ok(EXIT_CHECK_FAILED);
    }
    Ok(EXIT_OK)
}
