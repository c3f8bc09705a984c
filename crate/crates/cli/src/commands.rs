//! Argument parsing and the subcommand handlers.

use std::f64::consts::TAU;
use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fracperiod_core::closedforms::frac_integral_power;
use fracperiod_core::fodesolve::{nonperiodicity_certificate, periodic_forcing_rhs, solve_caputo, SolveError};
use fracperiod_core::fracops::{caputo_derivative, frac_integral, rl_derivative};
use fracperiod_core::laplace::{
    laplace_numeric, moment_extraction_demo, ratio_limit_check, varphi_transform_closed, PowerTail,
};
use fracperiod_core::periodicity::{
    defect_scan, kernel_moment, kernel_moment_composite, mean_abs_parts, psi_bound, psi_integral,
};
use fracperiod_core::specfun::{gamma, hyp1f2, mittag_leffler, upper_incomplete_gamma};
use fracperiod_core::{Complex64, FracOrder, UniformGrid};

use crate::config::{ConfigFile, Settings};
use crate::io::{self, emit, Cell, Format, SolveSidecar, Table};
use crate::signal::Signal;
use crate::verify;

/// A request that parsed but cannot be carried out as stated; exits with 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// What the process should report.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    VerificationFailed,
}

#[derive(Debug, Parser)]
#[command(name = "fracperiod", version, about = "Fractional calculus and periodicity checks")]
pub struct Cli {
    /// TOML file with quadrature_tol, series_tol, ml_radius, default_n,
    /// corrector_sweeps.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output format for tables (default csv; `verify` prints plain lines
    /// unless a format is given).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Absolute tolerance for adaptive quadrature.
    #[arg(long, global = true, value_name = "TOL")]
    pub quadrature_tol: Option<f64>,
    /// Relative truncation tolerance for series.
    #[arg(long, global = true, value_name = "TOL")]
    pub series_tol: Option<f64>,
    /// Largest |z| accepted by the Mittag-Leffler series.
    #[arg(long, global = true, value_name = "R")]
    pub ml_radius: Option<f64>,
    /// Corrector iterations per solver step.
    #[arg(long, global = true, value_name = "K")]
    pub corrector_sweeps: Option<u32>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Special functions.
    #[command(subcommand)]
    Specfun(SpecfunCmd),
    /// Discrete fractional operators on sampled signals.
    #[command(subcommand)]
    Fracop(FracopCmd),
    /// Kernel moments, ψ bounds and periodicity defects.
    #[command(subcommand)]
    Periodicity(PeriodicityCmd),
    /// Laplace-transform checks.
    #[command(subcommand)]
    Laplace(LaplaceCmd),
    /// Solve a Caputo initial value problem.
    Solve(SolveArgs),
    /// Acceptance checks.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Debug, Subcommand)]
pub enum SpecfunCmd {
    /// Evaluate one function.
    Eval(EvalArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SpecialFn {
    Gamma,
    Igamma,
    #[value(name = "1f2")]
    Hyp1f2,
    Mlf,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long = "fn", value_enum)]
    pub function: SpecialFn,
    /// gamma: x | igamma: a z | 1f2: a b c z | mlf: alpha beta re [im]
    #[arg(long, num_args = 1.., allow_negative_numbers = true, required = true)]
    pub args: Vec<f64>,
    /// Series tolerance; overrides series_tol.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum FracopCmd {
    /// Apply an operator to a signal and write the result as `t,value`.
    Apply(ApplyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Op {
    Integral,
    Caputo,
    Rl,
}

fn parse_order(s: &str) -> Result<FracOrder, String> {
    let a: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    FracOrder::new(a).map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct ApplyArgs {
    #[arg(long, value_enum)]
    pub op: Op,
    #[arg(long, value_parser = parse_order)]
    pub alpha: FracOrder,
    /// sin, cos, const:c, poly:p or csv:PATH
    #[arg(long)]
    pub signal: Signal,
    /// Period P for sin/cos, which become sin(2πt/P), cos(2πt/P).
    #[arg(long)]
    pub period: Option<f64>,
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Number of intervals (default: default_n).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum PeriodicityCmd {
    /// Kernel moments, ψ values with their bounds, and the mean and
    /// positive/negative parts of one period.
    Lemmas(LemmasArgs),
    /// Defect scan of a sampled function over candidate periods.
    Scan(ScanArgs),
}

#[derive(Debug, Args)]
pub struct LemmasArgs {
    /// sin, cos or const:c
    #[arg(long)]
    pub signal: Signal,
    #[arg(long, default_value_t = TAU)]
    pub period: f64,
    #[arg(long, value_parser = parse_order)]
    pub alpha: FracOrder,
    /// Largest kernel-moment index.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
    pub n_max: u32,
    /// Arguments t at which ψ(t) is evaluated.
    #[arg(long, value_delimiter = ',', default_value = "0,1,10,100,10000")]
    pub psi_t: Vec<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// `t,value` CSV on a uniform grid.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub t_lo: f64,
    #[arg(long)]
    pub t_hi: f64,
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum LaplaceCmd {
    /// Numeric transform of (T + t)^α against its closed form.
    Check(CheckArgs),
    /// Moments ∫₀^T f tⁱ and the first nonzero index.
    Moments(MomentsArgs),
    /// (1 - e^{-λT}) / (1 - e^{-λT̃}) for decreasing λ.
    Ratio(RatioArgs),
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, value_parser = parse_order)]
    pub alpha: FracOrder,
    #[arg(long, default_value_t = TAU)]
    pub period: f64,
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,2,5")]
    pub s_grid: Vec<f64>,
    /// Quadrature horizon; the rest is added in closed form.
    #[arg(long, default_value_t = 20.0)]
    pub horizon: f64,
    /// Agreement required for a row to pass.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MomentsArgs {
    #[arg(long)]
    pub signal: Signal,
    #[arg(long, default_value_t = TAU)]
    pub period: f64,
    #[arg(long, default_value_t = 3)]
    pub k_max: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RatioArgs {
    #[arg(long)]
    pub period: f64,
    #[arg(long)]
    pub other_period: f64,
    #[arg(long, value_delimiter = ',', default_value = "1,1e-2,1e-4,1e-6,1e-8")]
    pub lambdas: Vec<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Rhs {
    /// `k·u`
    Linear(f64),
    /// `u(1 - u)`
    Logistic,
    /// `u + ᶜD^α sin t - sin t`, solved exactly by `sin t`.
    PeriodicForcing,
}

impl std::str::FromStr for Rhs {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "logistic" => Ok(Rhs::Logistic),
            "paper-example" => Ok(Rhs::PeriodicForcing),
            _ => match s.strip_prefix("linear:").map(str::parse::<f64>) {
                Some(Ok(k)) if k.is_finite() => Ok(Rhs::Linear(k)),
                _ => Err(format!(
                    "unknown rhs {s:?}; expected linear:k, logistic or paper-example"
                )),
            },
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, value_parser = parse_order)]
    pub alpha: FracOrder,
    /// linear:k, logistic or paper-example
    #[arg(long)]
    pub rhs: Rhs,
    #[arg(long, allow_negative_numbers = true)]
    pub u0: f64,
    #[arg(long)]
    pub t_end: f64,
    #[arg(long)]
    pub n: Option<usize>,
    /// Trajectory file; metadata and certificate go next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Defect scan of the trajectory over [T_LO, T_HI] with STEPS candidates.
    #[arg(long, num_args = 3, value_names = ["T_LO", "T_HI", "STEPS"])]
    pub certify: Option<Vec<f64>>,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCmd {
    /// Run every acceptance criterion; exit 0 iff all pass.
    All {
        /// Restrict to these criterion ids.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

pub fn execute(cli: Cli) -> anyhow::Result<Status> {
    let file = match &cli.config {
        Some(p) => ConfigFile::load(p).map_err(|e| usage(format!("{e:#}")))?,
        None => ConfigFile::default(),
    };
    let flags = ConfigFile {
        quadrature_tol: cli.quadrature_tol,
        series_tol: cli.series_tol,
        ml_radius: cli.ml_radius,
        default_n: None,
        corrector_sweeps: cli.corrector_sweeps,
    };
    let settings = Settings::resolve(&file, &flags).map_err(|e| usage(format!("{e:#}")))?;
    let format = cli.format.unwrap_or_default();
    match cli.command {
        Command::Specfun(SpecfunCmd::Eval(a)) => specfun_eval(&a, &settings, format),
        Command::Fracop(FracopCmd::Apply(a)) => fracop_apply(&a, &settings, format),
        Command::Periodicity(PeriodicityCmd::Lemmas(a)) => lemmas(&a, &settings, format),
        Command::Periodicity(PeriodicityCmd::Scan(a)) => scan(&a, format),
        Command::Laplace(LaplaceCmd::Check(a)) => laplace_check(&a, &settings, format),
        Command::Laplace(LaplaceCmd::Moments(a)) => laplace_moments(&a, &settings, format),
        Command::Laplace(LaplaceCmd::Ratio(a)) => laplace_ratio(&a, format),
        Command::Solve(a) => solve(&a, &settings, format),
        Command::Verify(VerifyCmd::All { only }) => verify_all(&only, cli.format),
    }
}

fn arity(f: SpecialFn, args: &[f64]) -> anyhow::Result<()> {
    let ok = match f {
        SpecialFn::Gamma => args.len() == 1,
        SpecialFn::Igamma => args.len() == 2,
        SpecialFn::Hyp1f2 => args.len() == 4,
        SpecialFn::Mlf => args.len() == 3 || args.len() == 4,
    };
    if ok {
        Ok(())
    } else {
        Err(usage(format!(
            "wrong number of --args ({}) for this function",
            args.len()
        )))
    }
}

fn specfun_eval(a: &EvalArgs, s: &Settings, format: Format) -> anyhow::Result<Status> {
    arity(a.function, &a.args)?;
    let mut opts = s.series();
    if let Some(tol) = a.tol {
        if !(tol > 0.0) {
            return Err(usage("--tol must be positive"));
        }
        opts.tol = tol;
    }
    let x = &a.args;
    let mut t = Table::new(&[
        "function",
        "value",
        "imag",
        "terms_used",
        "tail_bound",
        "rounding_bound",
        "converged",
    ]);
    let row: Vec<Cell> = match a.function {
        SpecialFn::Gamma => vec![
            "gamma".into(),
            gamma(x[0])?.into(),
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
        ],
        SpecialFn::Igamma => vec![
            "igamma".into(),
            upper_incomplete_gamma(x[0], x[1])?.into(),
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
        ],
        SpecialFn::Hyp1f2 => {
            let r = hyp1f2(x[0], x[1], x[2], x[3], opts)?;
            vec![
                "1f2".into(),
                r.value.into(),
                Cell::Empty,
                r.terms_used.into(),
                r.tail_bound.into(),
                r.rounding_bound.into(),
                r.converged.into(),
            ]
        }
        SpecialFn::Mlf => {
            let z = Complex64::new(x[2], x.get(3).copied().unwrap_or(0.0));
            let r = mittag_leffler(x[0], x[1], z, opts)?;
            vec![
                "mlf".into(),
                r.value.re.into(),
                r.value.im.into(),
                r.terms_used.into(),
                r.tail_bound.into(),
                r.rounding_bound.into(),
                r.converged.into(),
            ]
        }
    };
    t.push(row);
    emit(None, &t.render(format)?)?;
    Ok(Status::Ok)
}

fn intervals(n: Option<usize>, s: &Settings) -> anyhow::Result<usize> {
    let n = n.unwrap_or(s.default_n);
    if n < 2 {
        return Err(usage("--n must be at least 2"));
    }
    Ok(n)
}

fn fracop_apply(a: &ApplyArgs, s: &Settings, format: Format) -> anyhow::Result<Status> {
    if matches!(a.signal, Signal::Csv(_)) && (a.t_end.is_some() || a.n.is_some()) {
        return Err(usage("csv signals carry their own grid; drop --t-end and --n"));
    }
    if !matches!(a.signal, Signal::Csv(_)) && a.t_end.is_none() {
        return Err(usage("--t-end is required for this signal"));
    }
    if a.period.is_some() && !matches!(a.signal, Signal::Sin | Signal::Cos) {
        return Err(usage("--period only applies to sin and cos"));
    }
    let n = intervals(a.n, s)?;
    let f = a.signal.sample(a.period, a.t_end, n)?;
    let table = match a.op {
        Op::Integral => io::grid_function_table(&frac_integral(&f, a.alpha)),
        Op::Caputo => io::grid_function_table(&caputo_derivative(&f, a.alpha)),
        Op::Rl => {
            let d = rl_derivative(&f, a.alpha);
            let mut t = io::grid_function_table(&d.values);
            if d.singular_at_origin {
                // D^α f ~ f(0) t^{-α} / Γ(1-α) near 0
                t.rows[0][1] = Cell::Num(f.first().signum() * f64::INFINITY);
            }
            t
        }
    };
    if let (Op::Integral, Signal::Poly(p)) = (a.op, &a.signal) {
        // exact values are available for powers; report the worst node error
        let worst = table
            .rows
            .iter()
            .filter_map(|r| match (&r[0], &r[1]) {
                (Cell::Num(t), Cell::Num(v)) => frac_integral_power(a.alpha, *p, *t).ok().map(|e| (v - e).abs()),
                _ => None,
            })
            .fold(0.0, f64::max);
        eprintln!("max error against the power rule: {worst:.3e}");
    }
    emit(a.out.as_deref(), &table.render(format)?)?;
    Ok(Status::Ok)
}

fn lemmas(a: &LemmasArgs, s: &Settings, format: Format) -> anyhow::Result<Status> {
    let f = a.signal.periodic(a.period).map_err(|e| usage(format!("{e:#}")))?;
    let q = s.quadrature();
    let mut t = Table::new(&["quantity", "index", "t", "value", "check", "lower", "upper"]);
    let mut largest: (u32, f64) = (0, 0.0);
    for n in 1..=a.n_max {
        let v = kernel_moment(&f, a.alpha, n, &q)?;
        let c = kernel_moment_composite(&f, a.alpha, n)?;
        if v.abs() > largest.1.abs() {
            largest = (n, v);
        }
        t.push(vec![
            "kernel_moment".into(),
            (n as usize).into(),
            ((n - 1) as f64 * a.period).into(),
            v.into(),
            c.into(),
            Cell::Empty,
            Cell::Empty,
        ]);
    }
    let parts = mean_abs_parts(&f, &q)?;
    let mean_zero = parts.mean.abs() <= fracperiod_core::periodicity::MEAN_ZERO_TOL;
    for &x in &a.psi_t {
        if !(x >= 0.0) {
            return Err(usage(format!("ψ arguments must be ≥ 0, got {x}")));
        }
        let v = psi_integral(&f, a.alpha, x, &q)?;
        let (lo, hi) = if mean_zero {
            let (lo, hi) = psi_bound(&f, a.alpha, x, &q)?;
            (Cell::Num(lo), Cell::Num(hi))
        } else {
            (Cell::Empty, Cell::Empty)
        };
        t.push(vec!["psi".into(), Cell::Empty, x.into(), v.into(), Cell::Empty, lo, hi]);
    }
    for (name, v) in [
        ("mean", parts.mean),
        ("c_plus", parts.c_plus),
        ("c_minus", parts.c_minus),
    ] {
        t.push(vec![
            name.into(),
            Cell::Empty,
            Cell::Empty,
            v.into(),
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
        ]);
    }
    emit(a.out.as_deref(), &t.render(format)?)?;
    if largest.1.abs() > 100.0 * q.abs_tol {
        eprintln!(
            "kernel moment n={} is {:.6e} ≠ 0, so I^{} of this signal is not {}-periodic",
            largest.0,
            largest.1,
            a.alpha.get(),
            a.period
        );
    } else {
        eprintln!("all kernel moments up to n={} vanish to quadrature tolerance", a.n_max);
    }
    Ok(Status::Ok)
}

fn scan(a: &ScanArgs, format: Format) -> anyhow::Result<Status> {
    let g = io::read_grid_function(&a.input)?;
    let reports = defect_scan(&g, a.t_lo, a.t_hi, a.steps).map_err(|e| usage(e.to_string()))?;
    emit(a.out.as_deref(), &io::defect_table(&reports).render(format)?)?;
    Ok(Status::Ok)
}

fn laplace_check(a: &CheckArgs, s: &Settings, format: Format) -> anyhow::Result<Status> {
    let q = s.quadrature();
    let p = a.alpha.get();
    let mut t = Table::new(&["s", "numeric", "closed", "abs_diff", "passed"]);
    let mut all = true;
    for &sv in &a.s_grid {
        let tail = PowerTail {
            scale: 1.0,
            shift: a.period,
            exponent: p,
        };
        let num = laplace_numeric(|x| (a.period + x).powf(p), sv, a.horizon, Some(tail), &q)?;
        let closed = varphi_transform_closed(a.alpha, a.period, sv)?;
        let diff = (num - closed).abs();
        let ok = diff <= a.tol && closed > 0.0;
        all &= ok;
        t.push(vec![sv.into(), num.into(), closed.into(), diff.into(), ok.into()]);
    }
    emit(a.out.as_deref(), &t.render(format)?)?;
    Ok(if all { Status::Ok } else { Status::VerificationFailed })
}

fn laplace_moments(a: &MomentsArgs, s: &Settings, format: Format) -> anyhow::Result<Status> {
    let f = a.signal.periodic(a.period).map_err(|e| usage(format!("{e:#}")))?;
    let report = moment_extraction_demo(&f, a.k_max, &s.quadrature())?;
    let text = match format {
        Format::Json => io::json_string(&report)?,
        Format::Csv => {
            let mut t = Table::new(&["i", "moment"]);
            for (i, m) in report.moments.iter().enumerate() {
                t.push(vec![i.into(), (*m).into()]);
            }
            eprintln!("{}", report.verdict);
            t.to_csv()?
        }
    };
    emit(a.out.as_deref(), &text)?;
    Ok(Status::Ok)
}

fn laplace_ratio(a: &RatioArgs, format: Format) -> anyhow::Result<Status> {
    let r = ratio_limit_check(a.period, a.other_period, &a.lambdas).map_err(|e| usage(e.to_string()))?;
    let limit = a.period / a.other_period;
    let mut t = Table::new(&["lambda", "ratio", "limit", "abs_diff"]);
    for (l, v) in a.lambdas.iter().zip(r) {
        t.push(vec![(*l).into(), v.into(), limit.into(), (v - limit).abs().into()]);
    }
    emit(a.out.as_deref(), &t.render(format)?)?;
    Ok(Status::Ok)
}

fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    out.with_file_name(format!("{stem}.{suffix}"))
}

fn solve(a: &SolveArgs, s: &Settings, format: Format) -> anyhow::Result<Status> {
    let n = intervals(a.n, s)?;
    let grid = UniformGrid::new(a.t_end, n).map_err(|e| usage(e.to_string()))?;
    let certify = match &a.certify {
        Some(v) => {
            let steps = v[2];
            if !(steps >= 1.0 && steps.fract() == 0.0) {
                return Err(usage("STEPS must be a positive integer"));
            }
            Some((v[0], v[1], steps as usize))
        }
        None => None,
    };
    let opts = s.solver();
    let result = match a.rhs {
        Rhs::Linear(k) => solve_caputo(move |_, u| k * u, a.alpha, a.u0, grid, opts),
        Rhs::Logistic => solve_caputo(|_, u| u * (1.0 - u), a.alpha, a.u0, grid, opts),
        Rhs::PeriodicForcing => solve_caputo(periodic_forcing_rhs(a.alpha, s.series()), a.alpha, a.u0, grid, opts),
    };
    let result = match result {
        Ok(r) => r,
        Err(SolveError::BlowUp { step, time, partial }) => {
            if let Some(out) = &a.out {
                let mut t = Table::new(&["t", "u"]);
                for (k, u) in partial.iter().enumerate() {
                    t.push(vec![grid.node(k).into(), (*u).into()]);
                }
                emit(Some(out), &t.render(format)?)?;
                eprintln!(
                    "partial trajectory ({} nodes) written to {}",
                    partial.len(),
                    out.display()
                );
            }
            bail!("solution blew up at step {step} (t = {time})");
        }
        Err(e) => return Err(usage(e.to_string())),
    };
    let sidecar = SolveSidecar::from(&result);
    let trajectory = io::trajectory_table(&result);
    match (format, &a.out) {
        (Format::Csv, Some(out)) => {
            emit(Some(out), &trajectory.to_csv()?)?;
            emit(Some(&sibling(out, "meta.json")), &io::json_string(&sidecar)?)?;
        }
        (Format::Csv, None) => {
            emit(None, &trajectory.to_csv()?)?;
            eprint!("{}", io::json_string(&sidecar)?);
        }
        (Format::Json, out) => {
            let mut doc = serde_json::to_value(&sidecar)?;
            doc["trajectory"] = trajectory.to_json_value();
            emit(out.as_deref(), &io::json_string(&doc)?)?;
        }
    }
    if let Some((lo, hi, steps)) = certify {
        let cert = nonperiodicity_certificate(&result, lo, hi, steps).map_err(|e| usage(e.to_string()))?;
        let table = io::defect_table(&cert.reports);
        let ext = match format {
            Format::Csv => "certificate.csv",
            Format::Json => "certificate.json",
        };
        match &a.out {
            Some(out) => emit(Some(&sibling(out, ext)), &table.render(format)?)?,
            None => eprint!("{}", table.render(format)?),
        }
        let best = cert.best().ok_or_else(|| anyhow!("empty certificate"))?;
        eprintln!(
            "certificate over T̃ ∈ [{lo}, {hi}] ({steps} candidates): min sup_defect = {:.6e} at T̃ = {}",
            cert.margin(),
            best.candidate_period
        );
        eprintln!("periods outside the scanned range are not covered");
    }
    Ok(Status::Ok)
}

fn verify_all(only: &[u8], format: Option<Format>) -> anyhow::Result<Status> {
    let outcomes = if only.is_empty() {
        verify::run_all()
    } else {
        verify::run_selected(only).map_err(|e| usage(e.to_string()))?
    };
    let text = match format {
        None => outcomes.iter().map(|o| format!("{o}\n")).collect::<String>(),
        Some(f) => {
            let mut t = Table::new(&["id", "title", "passed", "detail"]);
            for o in &outcomes {
                t.push(vec![
                    (o.id as usize).into(),
                    o.title.into(),
                    o.passed.into(),
                    o.detail.as_str().into(),
                ]);
            }
            t.render(f)?
        }
    };
    emit(None, &text)?;
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    if failed == 0 {
        Ok(Status::Ok)
    } else {
        eprintln!("{failed} of {} criteria failed", outcomes.len());
        Ok(Status::VerificationFailed)
    }
}
