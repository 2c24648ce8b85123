//! Command-line surface for hyperqpi: bounds, spectra, k-sweeps and oracle
//! checks, written as CSV or JSON.
//!
//! Exit codes: 0 success, 1 computational failure, 2 usage error,
//! 3 oracle violation.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use hyperqpi::bounds::{optimize_bounds, sweep, BoundsResult, OptimizerConfig, RegionFamily, SweepKind};
use hyperqpi::oracle::{containment_check, expectation_region_operator, qpi, state_suite, Region, StateSpec};
use hyperqpi::quadrature::QuadratureConfig;

/// Environment variable that relative `--out` paths are resolved against.
pub const OUTPUT_DIR_ENV: &str = "HYPERQPI_OUTPUT_DIR";

pub const EXIT_SUCCESS: i32 = 0;
pub const EXIT_COMPUTE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

pub const SPECTRUM_HEADER: &str = "omega,mu_minus,mu_plus";
pub const BOUNDS_HEADER: &str = "k,lower,upper,omega_lower,omega_upper";

#[derive(Debug, Parser)]
#[command(
    name = "hyperqpi",
    version,
    about = "Best-possible bounds on Wigner quasiprobability integrals"
)]
pub struct Cli {
    /// TOML file of default settings; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Infimum and supremum of the spectrum for one region family.
    Bounds(BoundsArgs),
    /// Spectrum rows over an ω grid.
    Spectrum(SpectrumArgs),
    /// Bounds over a range of k.
    Sweep(SweepArgs),
    /// Checks that direct qpis of test states lie within the bounds.
    Oracle(OracleArgs),
    /// Compares the region-operator expectation with the phase-space qpi.
    KernelCheck(KernelCheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Wedge,
    DoubleWedge,
    Hyperbola,
    DoubleHyperbola,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Single,
    Double,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Args)]
pub struct OptimizerArgs {
    /// Lower edge of the initial ω scan window.
    #[arg(long, allow_hyphen_values = true)]
    pub omega_min: Option<f64>,
    /// Upper edge of the initial ω scan window.
    #[arg(long, allow_hyphen_values = true)]
    pub omega_max: Option<f64>,
    /// Coarse ω grid spacing.
    #[arg(long)]
    pub coarse_step: Option<f64>,
    /// ω width at which golden-section refinement stops.
    #[arg(long)]
    pub refine_tol: Option<f64>,
    #[arg(long)]
    pub max_refinements: Option<usize>,
    /// Largest |ω| the scan window may be extended to.
    #[arg(long)]
    pub window_cap: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct OutputArgs {
    /// Output file; relative paths are resolved against $HYPERQPI_OUTPUT_DIR when set.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct BoundsArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Hyperbola parameter; only valid for the hyperbolic families.
    #[arg(long)]
    pub k: Option<f64>,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long, allow_hyphen_values = true, default_value_t = -5.0)]
    pub omega_min: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 5.0)]
    pub omega_max: f64,
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long, default_value_t = 0.0)]
    pub k_min: f64,
    #[arg(long, default_value_t = 5.0)]
    pub k_max: f64,
    /// Number of k values, including both ends.
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    /// State spec: `fock:n`, `coherent:q0,p0` or `squeezed:sigma,q0,p0`. Repeatable.
    #[arg(long = "state", allow_hyphen_values = true)]
    pub states: Vec<String>,
    /// Append the built-in 52-state suite.
    #[arg(long)]
    pub suite: bool,
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long)]
    pub k: Option<f64>,
    /// Allowed excursion beyond the bounds, before quadrature error.
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct KernelCheckArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub state: String,
    #[arg(long, default_value_t = 0.0)]
    pub k: f64,
    /// Largest accepted |operator − phase-space| difference.
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Settings that may come from `--config`. Every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub omega_min: Option<f64>,
    pub omega_max: Option<f64>,
    pub coarse_step: Option<f64>,
    pub refine_tol: Option<f64>,
    pub max_refinements: Option<usize>,
    pub window_cap: Option<f64>,
    pub tolerance: Option<f64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }
}

/// The configuration a command actually ran with, echoed into JSON reports.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimizer: Option<OptimizerConfig<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<QuadratureConfig<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extra: Option<serde_json::Value>,
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(String),
    /// The report was written but records a violation.
    Violation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => EXIT_USAGE,
            Self::Compute(_) => EXIT_COMPUTE,
            Self::Violation(_) => EXIT_VIOLATION,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Usage(m) => write!(f, "usage error: {m}"),
            Self::Compute(m) => write!(f, "computation failed: {m}"),
            Self::Violation(m) => write!(f, "oracle violation: {m}"),
        }
    }
}

impl From<hyperqpi::Error> for CliError {
    fn from(e: hyperqpi::Error) -> Self {
        match e {
            hyperqpi::Error::InvalidInput(m) => Self::Usage(m),
            other => Self::Compute(other.to_string()),
        }
    }
}

/// Fixed-width scientific notation with 12 significant digits.
pub fn fmt_sci(v: f64) -> String {
    format!("{v:.11e}")
}

/// Parses `fock:n`, `coherent:q0,p0` or `squeezed:sigma,q0,p0`.
pub fn parse_state(spec: &str) -> Result<StateSpec<f64>, CliError> {
    let bad = || CliError::Usage(format!("cannot parse state `{spec}`"));
    let (name, rest) = spec.split_once(':').ok_or_else(bad)?;
    let nums = |n: usize| -> Result<Vec<f64>, CliError> {
        let v: Vec<f64> = rest
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        if v.len() == n {
            Ok(v)
        } else {
            Err(bad())
        }
    };
    let state = match name.trim() {
        "fock" => StateSpec::Fock(rest.trim().parse::<u32>().map_err(|_| bad())?),
        "coherent" => {
            let v = nums(2)?;
            StateSpec::coherent(v[0], v[1])?
        }
        "squeezed" => {
            let v = nums(3)?;
            StateSpec::squeezed(v[0], v[1], v[2])?
        }
        _ => return Err(bad()),
    };
    Ok(state)
}

fn region_family(family: Family, k: Option<f64>) -> Result<RegionFamily<f64>, CliError> {
    let fam = match (family, k) {
        (Family::Wedge, None) => RegionFamily::Wedge,
        (Family::DoubleWedge, None) => RegionFamily::DoubleWedge,
        (Family::Wedge | Family::DoubleWedge, Some(_)) => {
            return Err(CliError::Usage("--k is only valid for the hyperbola families".into()))
        }
        (Family::Hyperbola, k) => RegionFamily::HyperbolaSingle(k.unwrap_or(0.0)),
        (Family::DoubleHyperbola, k) => RegionFamily::HyperbolaDouble(k.unwrap_or(0.0)),
    };
    fam.validate()?;
    Ok(fam)
}

fn optimizer_config(a: &OptimizerArgs, file: &FileConfig) -> Result<OptimizerConfig<f64>, CliError> {
    let d = OptimizerConfig::<f64>::default();
    let cfg = OptimizerConfig {
        omega_min: a.omega_min.or(file.omega_min).unwrap_or(d.omega_min),
        omega_max: a.omega_max.or(file.omega_max).unwrap_or(d.omega_max),
        coarse_step: a.coarse_step.or(file.coarse_step).unwrap_or(d.coarse_step),
        refine_tol: a.refine_tol.or(file.refine_tol).unwrap_or(d.refine_tol),
        max_refinements: a.max_refinements.or(file.max_refinements).unwrap_or(d.max_refinements),
        window_cap: a.window_cap.or(file.window_cap).unwrap_or(d.window_cap),
        kernel: d.kernel,
    };
    cfg.validate()?;
    Ok(cfg)
}

struct Sink {
    format: Format,
    out: Option<PathBuf>,
}

impl Sink {
    fn new(a: &OutputArgs, file: &FileConfig, default: Format) -> Self {
        Self {
            format: a.format.or(file.format).unwrap_or(default),
            out: a.out.clone().or_else(|| file.out.clone()),
        }
    }

    fn resolved(&self) -> Option<PathBuf> {
        self.out.as_ref().map(|p| match std::env::var_os(OUTPUT_DIR_ENV) {
            Some(dir) if p.is_relative() => Path::new(&dir).join(p),
            _ => p.clone(),
        })
    }

    fn emit(&self, body: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
        match self.resolved() {
            Some(path) => {
                if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                    std::fs::create_dir_all(parent)
                        .map_err(|e| CliError::Compute(format!("cannot create {}: {e}", parent.display())))?;
                }
                std::fs::write(&path, body)
                    .map_err(|e| CliError::Compute(format!("cannot write {}: {e}", path.display())))
            }
            None => stdout
                .write_all(body.as_bytes())
                .map_err(|e| CliError::Compute(format!("cannot write output: {e}"))),
        }
    }
}

fn json_report<R: Serialize>(config: &RunConfig, result: &R) -> String {
    let v = serde_json::json!({
        "tool": "hyperqpi",
        "version": env!("CARGO_PKG_VERSION"),
        "config": config,
        "result": result,
    });
    let mut s = serde_json::to_string_pretty(&v).expect("report serializes");
    s.push('\n');
    s
}

fn bounds_row(k: f64, b: &BoundsResult<f64>) -> String {
    format!(
        "{},{},{},{},{}\n",
        fmt_sci(k),
        fmt_sci(b.lower),
        fmt_sci(b.upper),
        fmt_sci(b.omega_at_lower),
        fmt_sci(b.omega_at_upper)
    )
}

fn family_k(f: &RegionFamily<f64>) -> f64 {
    match *f {
        RegionFamily::HyperbolaSingle(k) | RegionFamily::HyperbolaDouble(k) => k,
        _ => 0.0,
    }
}

pub fn cmd_bounds(a: &BoundsArgs, file: &FileConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let family = region_family(a.family, a.k)?;
    let cfg = optimizer_config(&a.optimizer, file)?;
    let sink = Sink::new(&a.output, file, Format::Csv);
    let b = optimize_bounds(family, &cfg)?;
    let body = match sink.format {
        Format::Csv => format!("{BOUNDS_HEADER}\n{}", bounds_row(family_k(&family), &b)),
        Format::Json => {
            let config = RunConfig {
                command: "bounds",
                family: Some(a.family),
                k: Some(family_k(&family)),
                optimizer: Some(cfg),
                quadrature: None,
                tolerance: None,
                extra: None,
                format: sink.format,
                out: sink.out.clone(),
            };
            json_report(&config, &b)
        }
    };
    sink.emit(&body, stdout)
}

#[derive(Serialize)]
struct SpectrumRow {
    omega: f64,
    mu_minus: f64,
    mu_plus: f64,
    plus_excess: f64,
}

pub fn cmd_spectrum(a: &SpectrumArgs, file: &FileConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let family = region_family(a.family, a.k)?;
    if !(a.step > 0.0 && a.omega_min.is_finite() && a.omega_max.is_finite() && a.omega_min <= a.omega_max) {
        return Err(CliError::Usage(
            "spectrum needs step > 0 and omega_min <= omega_max".into(),
        ));
    }
    let sink = Sink::new(&a.output, file, Format::Csv);
    let kernel = OptimizerConfig::<f64>::default().kernel;
    let n = ((a.omega_max - a.omega_min) / a.step).round() as usize;
    let mut rows = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let omega = if n == 0 {
            a.omega_min
        } else {
            a.omega_min + (a.omega_max - a.omega_min) * i as f64 / n as f64
        };
        let p = family
            .spectrum(omega, &kernel)
            .map_err(|e| CliError::Compute(format!("spectrum at omega = {omega}: {e}")))?;
        rows.push(SpectrumRow {
            omega,
            mu_minus: p.mu_minus,
            mu_plus: p.mu_plus,
            plus_excess: p.plus_excess,
        });
    }
    let body = match sink.format {
        Format::Csv => {
            let mut s = format!("{SPECTRUM_HEADER}\n");
            for r in &rows {
                let _ = writeln!(s, "{},{},{}", fmt_sci(r.omega), fmt_sci(r.mu_minus), fmt_sci(r.mu_plus));
            }
            s
        }
        Format::Json => {
            let config = RunConfig {
                command: "spectrum",
                family: Some(a.family),
                k: Some(family_k(&family)),
                optimizer: None,
                quadrature: None,
                tolerance: None,
                extra: Some(serde_json::json!({
                    "omega_min": a.omega_min, "omega_max": a.omega_max, "step": a.step, "kernel": kernel,
                })),
                format: sink.format,
                out: sink.out.clone(),
            };
            json_report(&config, &rows)
        }
    };
    sink.emit(&body, stdout)
}

#[derive(Serialize)]
struct SweepRow {
    k: f64,
    bounds: Option<BoundsResult<f64>>,
    error: Option<String>,
}

/// Runs the sweep. Rows whose optimization failed are written with NaN
/// entries (CSV) or an `error` field (JSON) and reported as a failure after
/// the output is complete.
pub fn cmd_sweep(
    a: &SweepArgs,
    file: &FileConfig,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    if a.steps < 2 || !(a.k_min >= 0.0 && a.k_min < a.k_max && a.k_max.is_finite()) {
        return Err(CliError::Usage("sweep needs steps >= 2 and 0 <= k_min < k_max".into()));
    }
    let cfg = optimizer_config(&a.optimizer, file)?;
    let sink = Sink::new(&a.output, file, Format::Csv);
    let ks: Vec<f64> = (0..a.steps)
        .map(|i| a.k_min + (a.k_max - a.k_min) * i as f64 / (a.steps - 1) as f64)
        .collect();
    let kind = match a.kind {
        Kind::Single => SweepKind::Single,
        Kind::Double => SweepKind::Double,
    };
    let rows: Vec<SweepRow> = sweep(kind, &ks, &cfg)?
        .into_iter()
        .map(|(k, r)| match r {
            Ok(b) => SweepRow {
                k,
                bounds: Some(b),
                error: None,
            },
            Err(e) => SweepRow {
                k,
                bounds: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    let body = match sink.format {
        Format::Csv => {
            let mut s = format!("{BOUNDS_HEADER}\n");
            for r in &rows {
                match &r.bounds {
                    Some(b) => s.push_str(&bounds_row(r.k, b)),
                    None => {
                        let _ = writeln!(s, "{},NaN,NaN,NaN,NaN", fmt_sci(r.k));
                    }
                }
            }
            s
        }
        Format::Json => {
            let config = RunConfig {
                command: "sweep",
                family: None,
                k: None,
                optimizer: Some(cfg),
                quadrature: None,
                tolerance: None,
                extra: Some(serde_json::json!({
                    "kind": a.kind, "k_min": a.k_min, "k_max": a.k_max, "steps": a.steps,
                })),
                format: sink.format,
                out: sink.out.clone(),
            };
            json_report(&config, &rows)
        }
    };
    sink.emit(&body, stdout)?;
    let failed: Vec<String> = rows
        .iter()
        .filter_map(|r| r.error.as_ref().map(|e| format!("k = {}: {e}", r.k)))
        .collect();
    for f in &failed {
        let _ = writeln!(stderr, "{f}");
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Compute(format!("{} sweep rows failed", failed.len())))
    }
}

fn json_only(sink: &Sink, command: &str) -> Result<(), CliError> {
    if sink.format == Format::Csv {
        Err(CliError::Usage(format!("{command} writes JSON reports only")))
    } else {
        Ok(())
    }
}

pub fn cmd_oracle(a: &OracleArgs, file: &FileConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let family = region_family(a.family, a.k)?;
    let mut states = a.states.iter().map(|s| parse_state(s)).collect::<Result<Vec<_>, _>>()?;
    if a.suite {
        states.extend(state_suite());
    }
    let tolerance = a.tolerance.or(file.tolerance).unwrap_or(1e-6);
    if !(tolerance >= 0.0) {
        return Err(CliError::Usage("tolerance must be nonnegative".into()));
    }
    let cfg = optimizer_config(&a.optimizer, file)?;
    let sink = Sink::new(&a.output, file, Format::Json);
    json_only(&sink, "oracle")?;
    let quad = QuadratureConfig::planar();
    let bounds = optimize_bounds(family, &cfg)?;
    let report = containment_check(&states, family, &bounds, tolerance, &quad);
    let config = RunConfig {
        command: "oracle",
        family: Some(a.family),
        k: Some(family_k(&family)),
        optimizer: Some(cfg),
        quadrature: Some(quad),
        tolerance: Some(tolerance),
        extra: None,
        format: sink.format,
        out: sink.out.clone(),
    };
    sink.emit(&json_report(&config, &report), stdout)?;
    if report.violations > 0 {
        Err(CliError::Violation(format!(
            "{} of {} states outside the bounds",
            report.violations,
            states.len()
        )))
    } else {
        Ok(())
    }
}

#[derive(Serialize)]
struct DualityReport {
    state: StateSpec<f64>,
    k: f64,
    operator_side: f64,
    operator_error: f64,
    phase_space_side: f64,
    phase_space_error: f64,
    difference: f64,
    pass: bool,
}

pub fn cmd_kernel_check(a: &KernelCheckArgs, file: &FileConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let state = parse_state(&a.state)?;
    if !(a.k >= 0.0 && a.k.is_finite()) {
        return Err(CliError::Usage("k must be finite and nonnegative".into()));
    }
    let tolerance = a.tolerance.or(file.tolerance).unwrap_or(1e-6);
    let sink = Sink::new(&a.output, file, Format::Json);
    json_only(&sink, "kernel-check")?;
    let quad = QuadratureConfig::planar();
    let op = expectation_region_operator(&state, a.k, &quad)?;
    let ps = qpi(&state, &Region::HyperbolaSingle(a.k), &quad)?;
    let difference = op.value - ps.value;
    let report = DualityReport {
        state,
        k: a.k,
        operator_side: op.value,
        operator_error: op.error_estimate,
        phase_space_side: ps.value,
        phase_space_error: ps.error_estimate,
        difference,
        pass: difference.abs() <= tolerance,
    };
    let config = RunConfig {
        command: "kernel-check",
        family: Some(Family::Hyperbola),
        k: Some(a.k),
        optimizer: None,
        quadrature: Some(quad),
        tolerance: Some(tolerance),
        extra: None,
        format: sink.format,
        out: sink.out.clone(),
    };
    sink.emit(&json_report(&config, &report), stdout)?;
    if report.pass {
        Ok(())
    } else {
        Err(CliError::Violation(format!(
            "|difference| = {:e} exceeds {tolerance:e}",
            difference.abs()
        )))
    }
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render();
            if code == 0 {
                let _ = write!(stdout, "{text}");
            } else {
                let _ = write!(stderr, "{text}");
            }
            return code;
        }
    };
    let result = cli
        .config
        .as_deref()
        .map_or(Ok(FileConfig::default()), FileConfig::load)
        .and_then(|file| match &cli.command {
            Command::Bounds(a) => cmd_bounds(a, &file, stdout),
            Command::Spectrum(a) => cmd_spectrum(a, &file, stdout),
            Command::Sweep(a) => cmd_sweep(a, &file, stdout, stderr),
            Command::Oracle(a) => cmd_oracle(a, &file, stdout),
            Command::KernelCheck(a) => cmd_kernel_check(a, &file, stdout),
        });
    match result {
        Ok(()) => EXIT_SUCCESS,
        Err(e) => {
            let _ = writeln!(stderr, "hyperqpi: {e}");
            e.exit_code()
        }
    }
}
