//! The `loglap` command-line front end.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 usage, config or
//! parse error, 3 an integral did not reach its tolerance.

pub mod config;
pub mod csv;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::distverify::{
    builtin_witnesses, classification_crosscheck, division_residual, liouville_annihilation, liouville_counterexample,
    liouville_counterexample_numeric, SingleLayerKind, SingleLayerSpec,
};
use crate::error::Error;
use crate::fundsol::{collapse_lhs, decay_fit_samples, fundamental_solution};
use crate::logop::{apply_integral_form, apply_spectral_radial, eigenfunction_identity_residual, RadialProfile, SCHWARTZ_CUTOFF};
use crate::quadrature::{coulomb_kernel, heat_time_integral};
use crate::specfun::{digamma, log_constants, EULER_GAMMA};

use self::config::{GridKind, RunConfig};
use self::csv::{fmt_f64, fmt_opt, fundsol_csv, parse_fundsol_csv, report_csv, Check, APPLY_HEADER};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NONCONVERGED: i32 = 3;

/// Largest accepted |integral − spectral| in `apply --method both`.
pub const APPLY_AGREEMENT: f64 = 1e-4;

#[derive(Debug, Parser)]
#[command(name = "loglap", version, about = "Logarithmic Laplacian: evaluation, fundamental solutions, verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate log(−Δ) on a radial profile along a grid.
    Apply(ApplyArgs),
    /// Tabulate the fundamental solution E = Φ + E¹_rem + E²_rem.
    Fundsol(CommonArgs),
    /// Run a verification suite and print a residual report.
    Verify(VerifyArgs),
    /// Fit the decay of |E| from a fundsol table.
    DecayFit(DecayFitArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Space dimension (1, 2 or 3).
    #[arg(long)]
    dim: Option<u32>,
    /// Smallest radius of the grid.
    #[arg(long)]
    rmin: Option<f64>,
    /// Largest radius of the grid.
    #[arg(long)]
    rmax: Option<f64>,
    /// Number of grid points (at least 2).
    #[arg(long)]
    points: Option<usize>,
    #[arg(long, value_enum)]
    grid: Option<GridKind>,
    /// Absolute quadrature tolerance.
    #[arg(long = "tol-abs")]
    tol_abs: Option<f64>,
    /// Relative quadrature tolerance.
    #[arg(long = "tol-rel")]
    tol_rel: Option<f64>,
    /// Flat `key = value` file; flags given on the command line win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProfileName {
    Gaussian,
    Eigenfunction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Integral,
    Spectral,
    Both,
}

#[derive(Debug, Args)]
struct ApplyArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_enum, default_value = "gaussian")]
    profile: ProfileName,
    #[arg(long, value_enum, default_value = "both")]
    method: Method,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Division,
    Liouville,
    Classification,
    Constants,
    Schwinger,
    All,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_enum, default_value = "all")]
    suite: Suite,
}

#[derive(Debug, Args)]
struct DecayFitArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Table written by `loglap fundsol`.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    kappa: f64,
    /// Weight by r^κ·log r instead of r^κ.
    #[arg(long = "log-weight")]
    log_weight: bool,
    /// Fit window as `lo,hi`; defaults to the whole table.
    #[arg(long)]
    window: Option<String>,
    /// Largest accepted slope; defaults to −κ + 0.05.
    #[arg(long = "slope-max", allow_negative_numbers = true)]
    slope_max: Option<f64>,
}

enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn resolve(common: &CommonArgs, mut cfg: RunConfig) -> Result<RunConfig, Failure> {
    if let Some(path) = &common.config {
        cfg.apply_file(path)?;
    }
    if let Some(v) = common.dim {
        cfg.dim = v;
    }
    if let Some(v) = common.rmin {
        cfg.r_min = v;
    }
    if let Some(v) = common.rmax {
        cfg.r_max = v;
    }
    if let Some(v) = common.points {
        cfg.points = v;
    }
    if let Some(v) = common.grid {
        cfg.grid = v;
    }
    if let Some(v) = common.tol_abs {
        cfg.tolerances.abs_tol = v;
    }
    if let Some(v) = common.tol_rel {
        cfg.tolerances.rel_tol = v;
    }
    if let Some(v) = &common.out {
        cfg.output_path = Some(v.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Usage(format!("cannot write output: {e}"))),
    }
}

fn thread_count() -> Result<usize, Failure> {
    match std::env::var("LOGLAP_THREADS") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("LOGLAP_THREADS must be a non-negative integer, got {v:?}"))),
        Err(_) => Ok(0),
    }
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = thread_count().and_then(|n| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Failure::Usage(format!("cannot start worker pool: {e}")))?;
        dispatch(cli.command, &pool, out, err)
    });
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Numerical(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_NONCONVERGED
        }
    }
}

fn dispatch(command: Command, pool: &rayon::ThreadPool, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Apply(a) => cmd_apply(&a, out, err),
        Command::Fundsol(c) => cmd_fundsol(&c, pool, out, err),
        Command::Verify(v) => cmd_verify(&v, out, err),
        Command::DecayFit(f) => cmd_decay_fit(&f, out, err),
    }
}

fn cmd_apply(args: &ApplyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let cfg = resolve(&args.common, RunConfig::pointwise_defaults())?;
    let d = cfg.dim;
    let spec = cfg.tolerances;
    let profile = match args.profile {
        ProfileName::Gaussian => RadialProfile::gaussian(),
        ProfileName::Eigenfunction => RadialProfile::eigenfunction(d),
    };
    let want_integral = args.method != Method::Spectral;
    let want_spectral = args.method != Method::Integral;
    let mut text = String::from(APPLY_HEADER);
    text.push('\n');
    let (mut agree, mut converged) = (true, true);
    for r in cfg.radii() {
        let integral = if want_integral {
            let e = apply_integral_form(&profile, r, d, SCHWARTZ_CUTOFF, &spec)?;
            if let Some(w) = &e.warning {
                let _ = writeln!(err, "warning: r = {r}: {w}");
            }
            converged &= e.converged;
            Some(e.value)
        } else {
            None
        };
        let spectral = if want_spectral {
            match args.profile {
                ProfileName::Gaussian => {
                    let s = apply_spectral_radial(&RadialProfile::gaussian_fourier(d), r, d, &spec)?;
                    converged &= s.converged;
                    Some(s.value)
                }
                // The transform is a uniform layer on the unit sphere, where the symbol 2 log s vanishes.
                ProfileName::Eigenfunction => Some(2.0 * 1f64.ln() * profile.eval(r)),
            }
        } else {
            None
        };
        let diff = match (integral, spectral) {
            (Some(a), Some(b)) => Some((a - b).abs()),
            _ => None,
        };
        if let Some(dv) = diff {
            agree &= dv <= APPLY_AGREEMENT;
        }
        text.push_str(&format!("{},{},{},{}\n", fmt_f64(r), fmt_opt(integral), fmt_opt(spectral), fmt_opt(diff)));
    }
    emit(&text, cfg.output_path.as_deref(), out)?;
    if !agree {
        let _ = writeln!(err, "integral and spectral values differ by more than {APPLY_AGREEMENT}");
        return Ok(EXIT_VERIFY_FAILED);
    }
    if !converged {
        return Err(Failure::Numerical("some integrals did not reach the requested tolerance".into()));
    }
    Ok(EXIT_OK)
}

fn cmd_fundsol(args: &CommonArgs, pool: &rayon::ThreadPool, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let cfg = resolve(args, RunConfig::table_defaults())?;
    if cfg.r_min <= 0.0 {
        return Err(Failure::Usage("fundsol needs rmin > 0".into()));
    }
    let table = pool.install(|| fundamental_solution(cfg.dim, &cfg.radii(), &cfg.tolerances))?;
    emit(&fundsol_csv(&table), cfg.output_path.as_deref(), out)?;
    for (r, e) in table.radii.iter().zip(&table.errors) {
        if let Some(e) = e {
            let _ = writeln!(err, "r = {r}: {e}");
        }
    }
    if !table.all_converged() {
        return Err(Failure::Numerical("some table entries did not reach the requested tolerance".into()));
    }
    Ok(EXIT_OK)
}

/// Checks run by `loglap verify` for one suite and dimension.
pub fn verification_checks(suite: &str, d: u32, spec: &crate::QuadratureSpec) -> crate::Result<Vec<Check>> {
    let mut checks = Vec::new();
    let all = suite == "all";
    if all || suite == "constants" {
        let c = log_constants(d)?;
        let closed = 2.0 * std::f64::consts::LN_2 + digamma(0.5 * d as f64)? - EULER_GAMMA;
        checks.push(Check::new(format!("rho_d{d}"), (c.rho_d - closed).abs(), 1e-10));
        let alt = match d {
            1 => -2.0 * EULER_GAMMA,
            2 => 2.0 * std::f64::consts::LN_2 - 2.0 * EULER_GAMMA,
            _ => 2.0 - 2.0 * EULER_GAMMA,
        };
        checks.push(Check::new(format!("rho_closed_form_d{d}"), (c.rho_d - alt).abs(), 1e-10));
        checks.push(Check::new(format!("gamma_times_omega_d{d}"), (c.gamma_d * c.omega - 2.0).abs(), 1e-14));
        let mut worst = 0.0f64;
        let mut conv = true;
        for &s in &[0.5, 0.9, 1.1, 2.0, 5.0] {
            let lhs = collapse_lhs(s, spec);
            conv &= lhs.converged;
            worst = worst.max((lhs.value - 0.5 / f64::ln(s)).abs());
        }
        checks.push(Check::new("fourier_collapse", worst, 1e-10).with_convergence(conv));
    }
    if suite == "schwinger" && d < 3 {
        return Err(Error::Input(format!("the schwinger suite needs dim >= 3, got {d}")));
    }
    if (all || suite == "schwinger") && d >= 3 {
        for &r in &[0.5, 1.0, 2.0] {
            let exact = coulomb_kernel(d, r);
            let v = heat_time_integral(d, r)?;
            checks.push(Check::new(format!("schwinger_d{d}_r{r}"), ((v - exact) / exact).abs(), 1e-10));
        }
    }
    if all || suite == "division" {
        for w in builtin_witnesses() {
            let res = division_residual(&w, d, spec)?;
            checks.push(Check::new(format!("division_{}_d{d}", w.name), res.value, 1e-5).with_convergence(res.converged));
        }
    }
    if all || suite == "liouville" {
        let res = eigenfunction_identity_residual(d, spec)?;
        checks.push(Check::new(format!("eigen_identity_d{d}"), res.value, 1e-6).with_convergence(res.converged));
        let u = RadialProfile::eigenfunction(d);
        for &r in &[0.0, 2.0] {
            let e = apply_integral_form(&u, r, d, SCHWARTZ_CUTOFF, spec)?;
            checks.push(Check::new(format!("eigen_pointwise_d{d}_r{r}"), e.value.abs(), 1e-5).with_convergence(e.converged));
        }
        let layer = SingleLayerSpec {
            kind: SingleLayerKind::UniformMeasure,
            weight: 1.0,
        };
        for w in builtin_witnesses() {
            let a = liouville_annihilation(&layer, &w, d)?;
            checks.push(Check::new(format!("annihilation_{}_d{d}", w.name), a.norm(), 0.0));
            let exact = liouville_counterexample(&w, d)?;
            let numeric = liouville_counterexample_numeric(&w, d)?;
            checks.push(Check::new(format!("counterexample_{}_d{d}", w.name), (exact - numeric).norm(), 1e-8));
        }
    }
    if all || suite == "classification" {
        for w in builtin_witnesses() {
            let res = classification_crosscheck(&w, d, spec)?;
            checks.push(
                Check::new(format!("classification_{}_d{d}", w.name), res.value, 1e-6).with_convergence(res.converged),
            );
        }
    }
    Ok(checks)
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let cfg = resolve(&args.common, RunConfig::table_defaults())?;
    let suite = args
        .suite
        .to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default();
    let checks = verification_checks(&suite, cfg.dim, &cfg.tolerances)?;
    emit(&report_csv(&checks), cfg.output_path.as_deref(), out)?;
    for c in &checks {
        let _ = writeln!(
            err,
            "{:<40} {:>12.3e} <= {:>9.1e}  {}",
            c.name,
            c.value,
            c.threshold,
            if c.pass() { "PASS" } else { "FAIL" }
        );
    }
    if checks.iter().any(|c| !c.pass()) {
        return Ok(EXIT_VERIFY_FAILED);
    }
    if checks.iter().any(|c| !c.converged) {
        return Err(Failure::Numerical("some residuals rest on unconverged integrals".into()));
    }
    Ok(EXIT_OK)
}

fn parse_window(s: &str) -> Result<(f64, f64), Failure> {
    let parsed = s.split_once(',').and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)));
    parsed.ok_or_else(|| Failure::Usage(format!("window must be `lo,hi`, got {s:?}")))
}

fn cmd_decay_fit(args: &DecayFitArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let mut cfg = RunConfig::table_defaults();
    if let Some(p) = &args.common.config {
        cfg.apply_file(p)?;
    }
    if let Some(o) = &args.common.out {
        cfg.output_path = Some(o.clone());
    }
    let text = fs::read_to_string(&args.input)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", args.input.display())))?;
    let samples = parse_fundsol_csv(&text)?;
    let (lo, hi) = match &args.window {
        Some(w) => parse_window(w)?,
        None => match (samples.radii.first(), samples.radii.last()) {
            (Some(&a), Some(&b)) => (a, b),
            _ => return Err(Failure::Usage("table has no data rows".into())),
        },
    };
    let report = decay_fit_samples(&samples.radii, &samples.magnitudes, args.kappa, args.log_weight, lo, hi)?;
    let slope_max = args.slope_max.unwrap_or(-args.kappa + 0.05);
    let checks = vec![
        Check::new("sup_scaled", report.sup_scaled, f64::INFINITY),
        Check::new("slope", report.slope, slope_max),
        Check::new("fit_residual", report.fit_residual, f64::INFINITY),
    ];
    emit(&report_csv(&checks), cfg.output_path.as_deref(), out)?;
    let _ = writeln!(
        err,
        "kappa = {}, log_weight = {}, window = [{}, {}], points = {}, sup = {:.6e}, slope = {:.6} (max {slope_max})",
        report.kappa, report.log_weight, report.range.0, report.range.1, report.points, report.sup_scaled, report.slope
    );
    if checks.iter().all(Check::pass) {
        Ok(EXIT_OK)
    } else {
        Ok(EXIT_VERIFY_FAILED)
    }
}
