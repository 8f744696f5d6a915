//! `pnlevp` command line: offline, online, sweep and bench.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::benchmarks::benchmark;
use crate::contour::{default_sampling, sampling_on_contour, ContourDomain, DEFAULT_INFLATION};
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::loewner::DEFAULT_RANK_TOL;
use crate::paaa::FitOptions;
use crate::problems::{problem_by_name, Problem};
use crate::solver::{
    load_model, offline, online, residuals, save_model, sweep, uniform_parameters, write_atomic, OfflineModel,
    OfflineOptions, SweepPoint,
};

/// Environment variable capping the worker count; 0 or unset means automatic.
pub const THREADS_ENV: &str = "PNLEVP_THREADS";

#[derive(Debug, Parser)]
#[command(name = "pnlevp", version, about = "Eigenvalues of parametric nonlinear eigenvalue problems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the resolvent, fit surrogates and save the model.
    Offline(OfflineArgs),
    /// Eigenvalues at one parameter from a saved model.
    Online(OnlineArgs),
    /// Eigenvalue trajectories over a parameter range, as a data file.
    Sweep(SweepArgs),
    /// Run a reference experiment end to end and check it.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct OfflineArgs {
    /// Built-in problem: linear-demo, delay, damped-string, synthetic.
    #[arg(long)]
    pub problem: String,
    /// Disk domain `re,im,radius`.
    #[arg(long, value_name = "RE,IM,RADIUS", allow_hyphen_values = true)]
    pub disk: Option<String>,
    /// Elliptic domain `re,im,semi_real,semi_imag`.
    #[arg(long, value_name = "RE,IM,SR,SI", allow_hyphen_values = true)]
    pub ellipse: Option<String>,
    /// Disk carrying the sample points (default: domain inflated by --inflation).
    #[arg(long, value_name = "RE,IM,RADIUS", allow_hyphen_values = true)]
    pub sample_disk: Option<String>,
    /// Ellipse carrying the sample points.
    #[arg(long, value_name = "RE,IM,SR,SI", allow_hyphen_values = true)]
    pub sample_ellipse: Option<String>,
    /// Parameter range `min:max`.
    #[arg(long = "p", value_name = "MIN:MAX", allow_hyphen_values = true)]
    pub p_range: String,
    #[arg(long, default_value_t = 40)]
    pub q: usize,
    #[arg(long, default_value_t = 20)]
    pub r: usize,
    /// Quadrature nodes on the domain boundary.
    #[arg(long = "N", default_value_t = 128)]
    pub nodes: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_INFLATION)]
    pub inflation: f64,
    #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
    pub rank_tol: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub fit_tol: f64,
    #[arg(long)]
    pub out: PathBuf,
    /// Summary as JSON on standard output.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct OnlineArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Parameter `re` or `re,im`.
    #[arg(long = "p", value_name = "P", allow_hyphen_values = true)]
    pub p: String,
    #[arg(long)]
    pub rank_tol: Option<f64>,
    /// Also write the result as JSON to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON on standard output instead of columns.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Sweep range `min:max` (default: the sampled parameter range).
    #[arg(long, value_name = "MIN:MAX", allow_hyphen_values = true)]
    pub range: Option<String>,
    #[arg(long, default_value_t = 200)]
    pub n_test: usize,
    #[arg(long)]
    pub rank_tol: Option<f64>,
    /// Whitespace-delimited data file.
    #[arg(long)]
    pub out: PathBuf,
    /// Also print the rows as JSON on standard output.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// linear-1, linear-2, delay, damped-string-1 or damped-string-2.
    pub name: String,
    /// Directory for the model and sweep files.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

/// 0 ok, 1 I/O, 2 usage or violated assumption, 3 numerical failure.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) | Error::Malformed(_) | Error::VersionMismatch { .. } => 1,
        Error::Argument(_) | Error::Unsupported(_) | Error::AssumptionViolation { .. } => 2,
        _ => 3,
    }
}

fn parse_numbers(text: &str, count: usize, what: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != count {
        return Err(Error::arg(format!("{what} expects {count} comma-separated numbers, got '{text}'")));
    }
    parts
        .iter()
        .map(|s| {
            let v: f64 = s.parse().map_err(|_| Error::arg(format!("{what}: '{s}' is not a number")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::arg(format!("{what}: '{s}' is not finite")))
            }
        })
        .collect()
}

/// `re,im,radius` for a disk or `re,im,sr,si` for an ellipse; exactly one.
pub fn parse_domain(disk: Option<&str>, ellipse: Option<&str>) -> Result<ContourDomain> {
    match (disk, ellipse) {
        (Some(d), None) => {
            let v = parse_numbers(d, 3, "--disk")?;
            ContourDomain::disk(C64::new(v[0], v[1]), v[2])
        }
        (None, Some(e)) => {
            let v = parse_numbers(e, 4, "--ellipse")?;
            ContourDomain::ellipse(C64::new(v[0], v[1]), v[2], v[3])
        }
        (None, None) => Err(Error::arg("a domain is required: --disk RE,IM,RADIUS or --ellipse RE,IM,SR,SI")),
        (Some(_), Some(_)) => Err(Error::arg("give either a disk or an ellipse, not both")),
    }
}

/// `min:max` with `min < max`.
pub fn parse_range(text: &str) -> Result<(f64, f64)> {
    let (a, b) = text.split_once(':').ok_or_else(|| Error::arg(format!("range must be MIN:MAX, got '{text}'")))?;
    let num = |s: &str| -> Result<f64> {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::arg(format!("bad range bound '{s}'")))
    };
    let (a, b) = (num(a)?, num(b)?);
    if a >= b {
        return Err(Error::arg(format!("range must be increasing, got {a}:{b}")));
    }
    Ok((a, b))
}

/// `re` or `re,im`.
pub fn parse_parameter(text: &str) -> Result<C64> {
    let parts: Vec<&str> = text.split(',').collect();
    let v = parse_numbers(text, parts.len().clamp(1, 2), "--p")?;
    Ok(C64::new(v[0], v.get(1).copied().unwrap_or(0.0)))
}

fn positive_tol(v: f64, what: &str) -> Result<f64> {
    if v.is_finite() && v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(Error::arg(format!("{what} must lie in (0, 1), got {v}")))
    }
}

/// Validated offline run.
#[derive(Debug, Clone)]
pub struct OfflineRun {
    pub problem: String,
    pub domain: ContourDomain,
    pub sampling_contour: Option<ContourDomain>,
    pub p_range: (f64, f64),
    pub q: usize,
    pub r: usize,
    pub nodes: usize,
    pub seed: u64,
    pub inflation: f64,
    pub rank_tol: f64,
    pub fit_tol: f64,
    pub out: PathBuf,
}

impl OfflineRun {
    pub fn from_args(a: &OfflineArgs) -> Result<Self> {
        problem_by_name(&a.problem)?;
        let domain = parse_domain(a.disk.as_deref(), a.ellipse.as_deref())?;
        let sampling_contour = match (&a.sample_disk, &a.sample_ellipse) {
            (None, None) => None,
            (d, e) => Some(parse_domain(d.as_deref(), e.as_deref())?),
        };
        if a.q < 2 || a.r < 1 || a.nodes < 2 {
            return Err(Error::arg(format!(
                "need q >= 2, r >= 1 and N >= 2 (got q={}, r={}, N={})",
                a.q, a.r, a.nodes
            )));
        }
        if !(a.inflation.is_finite() && a.inflation > 1.0) {
            return Err(Error::arg(format!("inflation must exceed 1, got {}", a.inflation)));
        }
        Ok(Self {
            problem: a.problem.clone(),
            domain,
            sampling_contour,
            p_range: parse_range(&a.p_range)?,
            q: a.q,
            r: a.r,
            nodes: a.nodes,
            seed: a.seed,
            inflation: a.inflation,
            rank_tol: positive_tol(a.rank_tol, "--rank-tol")?,
            fit_tol: positive_tol(a.fit_tol, "--fit-tol")?,
            out: a.out.clone(),
        })
    }

    pub fn execute(&self) -> Result<OfflineModel> {
        let problem = problem_by_name(&self.problem)?;
        let dim = problem.dim();
        let sampling = match &self.sampling_contour {
            Some(c) => sampling_on_contour(c, dim, self.r, self.q, self.p_range, self.seed)?,
            None => default_sampling(&self.domain, dim, self.r, self.q, self.p_range, self.seed, self.inflation)?,
        };
        let opts = OfflineOptions {
            nodes: self.nodes,
            rank_tol: self.rank_tol,
            fit: FitOptions { tol: self.fit_tol, ..FitOptions::default() },
            exact_z_degree: true,
        };
        offline(problem.as_ref(), &self.domain, &sampling, &opts)
    }
}

#[derive(Serialize)]
struct OfflineSummary<'a> {
    problem: &'a str,
    m: usize,
    degrees: (usize, usize),
    max_fit_error: f64,
    converged: bool,
    model: String,
}

#[derive(Serialize)]
struct OnlineReport {
    p: [f64; 2],
    eigenvalues: Vec<[f64; 2]>,
    in_domain: Vec<bool>,
    residuals: Option<Vec<Option<f64>>>,
    warnings: Vec<String>,
}

#[derive(Serialize)]
struct SweepReport {
    problem: String,
    m: usize,
    columns: Vec<String>,
    rows: Vec<Vec<Option<f64>>>,
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Malformed(e.to_string()))
}

/// Column names of a sweep file.
pub fn sweep_columns(m: usize, with_residual: bool) -> Vec<String> {
    let mut cols = vec!["p".to_string()];
    for k in 1..=m {
        cols.push(format!("re_{k}"));
        cols.push(format!("im_{k}"));
    }
    if with_residual {
        cols.push("max_residual".into());
    }
    cols
}

/// One numeric row per sweep point; missing eigenvalues are NaN.
pub fn sweep_rows(points: &[SweepPoint], m: usize) -> Vec<Vec<f64>> {
    points
        .iter()
        .map(|pt| {
            let mut row = vec![pt.p];
            for k in 0..m {
                let l = pt.solution.eigenvalues.get(k).copied().unwrap_or(C64::new(f64::NAN, f64::NAN));
                row.push(l.re);
                row.push(l.im);
            }
            if let Some(r) = pt.max_residual {
                row.push(r);
            }
            row
        })
        .collect()
}

/// Whitespace-delimited table with a `#` header naming the columns.
pub fn format_sweep_file(problem: &str, points: &[SweepPoint], m: usize) -> String {
    let with_residual = points.first().is_some_and(|pt| pt.max_residual.is_some());
    let mut text = format!("# {problem}: {}\n", sweep_columns(m, with_residual).join(" "));
    for row in sweep_rows(points, m) {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        text.push_str(&cells.join(" "));
        text.push('\n');
    }
    text
}

fn read_model(path: &Path) -> Result<OfflineModel> {
    if !path.is_file() {
        let msg = format!("model file {} not found", path.display());
        return Err(Error::Io(std::io::Error::new(std::io::ErrorKind::NotFound, msg)));
    }
    load_model(path)
}

fn builtin_problem(model: &OfflineModel) -> Option<Box<dyn Problem>> {
    problem_by_name(&model.problem_name).ok().filter(|p| p.dim() == model.sampling.dim())
}

fn cmd_offline(args: &OfflineArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let run = OfflineRun::from_args(args)?;
    let start = Instant::now();
    let model = run.execute()?;
    save_model(&model, &run.out)?;
    let summary = OfflineSummary {
        problem: &model.problem_name,
        m: model.m,
        degrees: model.degrees(),
        max_fit_error: model.metadata.max_fit_error,
        converged: model.metadata.converged,
        model: run.out.display().to_string(),
    };
    if args.json {
        writeln!(out, "{}", to_json(&summary)?)?;
    } else {
        writeln!(out, "problem        {}", summary.problem)?;
        writeln!(out, "m              {}", summary.m)?;
        writeln!(out, "degrees        {} {}", summary.degrees.0, summary.degrees.1)?;
        writeln!(out, "max_fit_error  {:.3e}", summary.max_fit_error)?;
        writeln!(out, "converged      {}", summary.converged)?;
        writeln!(out, "model          {}", summary.model)?;
    }
    if !model.metadata.converged {
        writeln!(err, "warning: fit tolerance {:.0e} not reached", run.fit_tol)?;
    }
    writeln!(err, "offline phase took {:.2} s", start.elapsed().as_secs_f64())?;
    Ok(())
}

fn cmd_online(args: &OnlineArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let p = parse_parameter(&args.p)?;
    if let Some(t) = args.rank_tol {
        positive_tol(t, "--rank-tol")?;
    }
    let model = read_model(&args.model)?;
    let sol = online(&model, p, args.rank_tol)?;
    for w in &sol.warnings {
        writeln!(err, "warning: {w}")?;
    }
    let res: Option<Vec<f64>> = match builtin_problem(&model) {
        Some(prob) => match residuals(prob.as_ref(), &sol) {
            Ok(r) => Some(r),
            Err(e) => {
                writeln!(err, "warning: residuals unavailable: {e}")?;
                None
            }
        },
        None => None,
    };
    let report = OnlineReport {
        p: [p.re, p.im],
        eigenvalues: sol.eigenvalues.iter().map(|l| [l.re, l.im]).collect(),
        in_domain: sol.in_domain.clone(),
        residuals: res.as_ref().map(|r| r.iter().map(|v| finite(*v)).collect()),
        warnings: sol.warnings.clone(),
    };
    if let Some(path) = &args.out {
        write_atomic(path, format!("{}\n", to_json(&report)?).as_bytes())?;
    }
    if args.json {
        writeln!(out, "{}", to_json(&report)?)?;
        return Ok(());
    }
    writeln!(out, "# {:>3} {:>24} {:>24} {:>9} {:>10}", "k", "re", "im", "in_domain", "residual")?;
    for (k, l) in sol.eigenvalues.iter().enumerate() {
        let r = res.as_ref().map_or("-".to_string(), |r| format!("{:.3e}", r[k]));
        writeln!(out, "  {:>3} {:>24.16e} {:>24.16e} {:>9} {:>10}", k + 1, l.re, l.im, sol.in_domain[k], r)?;
    }
    Ok(())
}

fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let range = args.range.as_deref().map(parse_range).transpose()?;
    if args.n_test == 0 {
        return Err(Error::arg("--n-test must be positive"));
    }
    if let Some(t) = args.rank_tol {
        positive_tol(t, "--rank-tol")?;
    }
    let model = read_model(&args.model)?;
    let (a, b) = range.unwrap_or_else(|| model.parameter_range());
    let params = uniform_parameters(a, b, args.n_test);
    let problem = builtin_problem(&model);
    let points = sweep(&model, problem.as_deref(), &params, args.rank_tol)?;
    report_sweep_warnings(&points, err)?;
    write_atomic(&args.out, format_sweep_file(&model.problem_name, &points, model.m).as_bytes())?;
    if args.json {
        let report = SweepReport {
            problem: model.problem_name.clone(),
            m: model.m,
            columns: sweep_columns(model.m, problem.is_some()),
            rows: sweep_rows(&points, model.m).into_iter().map(|r| r.into_iter().map(finite).collect()).collect(),
        };
        writeln!(out, "{}", to_json(&report)?)?;
    }
    writeln!(err, "wrote {} rows to {}", points.len(), args.out.display())?;
    Ok(())
}

/// One line per distinct warning with the number of parameters it hit.
fn report_sweep_warnings(points: &[SweepPoint], err: &mut dyn Write) -> Result<()> {
    let mut kinds: Vec<(String, usize)> = Vec::new();
    for w in points.iter().flat_map(|pt| pt.solution.warnings.iter()) {
        // strip the parameter value so repeated warnings group together
        let key = if w.starts_with("p = ") {
            "parameter outside the sampled range; extrapolating".to_string()
        } else {
            w.clone()
        };
        match kinds.iter_mut().find(|(k, _)| *k == key) {
            Some((_, n)) => *n += 1,
            None => kinds.push((key, 1)),
        }
    }
    for (k, n) in kinds {
        writeln!(err, "warning: {k} ({n} of {} parameters)", points.len())?;
    }
    Ok(())
}

fn cmd_bench(args: &BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool> {
    let bench = benchmark(&args.name)?;
    std::fs::create_dir_all(&args.out_dir)?;
    let start = Instant::now();
    let model = bench.run_offline()?;
    let model_path = args.out_dir.join(format!("{}.model", bench.name));
    save_model(&model, &model_path)?;
    let problem = bench.problem();
    let points = sweep(&model, Some(problem.as_ref()), &bench.sweep_parameters(), None)?;
    let data_path = args.out_dir.join(format!("{}.dat", bench.name));
    write_atomic(&data_path, format_sweep_file(&model.problem_name, &points, model.m).as_bytes())?;
    let checks = bench.evaluate(&model, &points)?;
    writeln!(out, "bench {}: m = {}, degrees {:?}", bench.name, model.m, model.degrees())?;
    for c in &checks {
        writeln!(out, "{} {} ({})", if c.pass { "PASS" } else { "FAIL" }, c.label, c.detail)?;
    }
    let ok = checks.iter().all(|c| c.pass);
    writeln!(out, "bench {}: {}", bench.name, if ok { "PASS" } else { "FAIL" })?;
    writeln!(
        err,
        "wrote {} and {} in {:.1} s",
        model_path.display(),
        data_path.display(),
        start.elapsed().as_secs_f64()
    )?;
    Ok(ok)
}

/// Caps the global worker pool from [`THREADS_ENV`].
pub fn configure_threads() -> Result<()> {
    let Ok(text) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize =
        text.trim().parse().map_err(|_| Error::arg(format!("{THREADS_ENV} must be a count, got '{text}'")))?;
    if n > 0 {
        // a pool configured earlier in this process stays in place
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Runs a parsed command; returns the process exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = configure_threads().and_then(|()| match &cli.command {
        Command::Offline(a) => cmd_offline(a, out, err).map(|()| true),
        Command::Online(a) => cmd_online(a, out, err).map(|()| true),
        Command::Sweep(a) => cmd_sweep(a, out, err).map(|()| true),
        Command::Bench(a) => cmd_bench(a, out, err),
    });
    match result {
        Ok(true) => 0,
        Ok(false) => 3,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_parsing() {
        let d = parse_domain(Some("0,0,0.075"), None).unwrap();
        assert_eq!(d, ContourDomain::Disk { center: C64::new(0.0, 0.0), radius: 0.075 });
        let e = parse_domain(None, Some("-3,0,2.5,10")).unwrap();
        assert_eq!(e, ContourDomain::Ellipse { center: C64::new(-3.0, 0.0), semi_real: 2.5, semi_imag: 10.0 });
        assert!(matches!(parse_domain(Some("0,0,-1"), None), Err(Error::Argument(_))));
        assert!(matches!(parse_domain(Some("0,0"), None), Err(Error::Argument(_))));
        assert!(matches!(parse_domain(None, None), Err(Error::Argument(_))));
        assert!(matches!(parse_domain(Some("0,0,1"), Some("0,0,1,1")), Err(Error::Argument(_))));
    }

    #[test]
    fn range_and_parameter_parsing() {
        assert_eq!(parse_range("30:35").unwrap(), (30.0, 35.0));
        assert_eq!(parse_range("-1:0.5").unwrap(), (-1.0, 0.5));
        assert!(parse_range("35:30").is_err());
        assert!(parse_range("30").is_err());
        assert_eq!(parse_parameter("30").unwrap(), C64::new(30.0, 0.0));
        assert_eq!(parse_parameter("1.5,-2").unwrap(), C64::new(1.5, -2.0));
        assert!(parse_parameter("x").is_err());
        assert!(parse_parameter("1,2,3").is_err());
    }

    #[test]
    fn exit_codes_by_category() {
        assert_eq!(exit_code(&Error::Io(std::io::Error::other("x"))), 1);
        assert_eq!(exit_code(&Error::arg("x")), 2);
        assert_eq!(exit_code(&Error::AssumptionViolation { ranks: vec![1, 2] }), 2);
        assert_eq!(exit_code(&Error::Realization("x".into())), 3);
    }

    #[test]
    fn sweep_columns_layout() {
        assert_eq!(sweep_columns(2, true), ["p", "re_1", "im_1", "re_2", "im_2", "max_residual"]);
        assert_eq!(sweep_columns(1, false).len(), 3);
    }
}
