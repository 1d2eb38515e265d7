//! `entlab`: command-line front end for the two-region entanglement model.
//!
//! Six subcommands cover the library surface: `entropy` (full report at one
//! coupling), `scan` (coupling sweep with growth-law fits), `spectrum`
//! (eigenvalues of one discretized marginal), `bound` (closed-form estimate
//! ladder), `physical` (dimensional or Planck-unit scenarios), and
//! `selftest` (built-in consistency checks).
//!
//! Exit codes: 0 success, 1 numerical failure, 2 usage error. Data goes to
//! stdout or `--out` and is byte-deterministic for fixed arguments;
//! diagnostics go to stderr.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use entlab_core::entropy::{self, BoundVariant};
use entlab_core::model::{EvalMode, ModelParams, Normalization, Region};
use entlab_core::physics::{self, PhysicalConstants};
use entlab_core::{fitting, selftest, EntropyReport, LAMBDA_KERNEL_CAP};
use rayon::prelude::*;
use serde::Serialize;

use output::{flags_cell, fmt_f64, fmt_opt, write_output};

#[derive(Parser)]
#[command(
    name = "entlab",
    version,
    about = "Numerical laboratory for a two-region entangled model",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full report (normalization, entropies, bounds) at one coupling
    Entropy(EntropyArgs),
    /// Sweep the coupling and tabulate entropies, bounds, and growth fits
    Scan(ScanArgs),
    /// Eigenvalue spectrum of one discretized reduced density operator
    Spectrum(SpectrumArgs),
    /// Closed-form entropy estimates at one coupling
    Bound(BoundArgs),
    /// Map a dimensional or Planck-unit scenario onto the model
    Physical(PhysicalArgs),
    /// Run the built-in numerical consistency checks
    Selftest(SelftestArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    /// Closed-form kernels at any coupling
    Exact,
    /// Large-coupling approximations of normalization and kernels
    Asym,
}

impl From<ModeArg> for EvalMode {
    fn from(m: ModeArg) -> EvalMode {
        match m {
            ModeArg::Exact => EvalMode::Exact,
            ModeArg::Asym => EvalMode::Asymptotic,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RegionArg {
    A,
    B,
}

impl RegionArg {
    fn region(self) -> Region {
        match self {
            RegionArg::A => Region::A,
            RegionArg::B => Region::B,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            RegionArg::A => "a",
            RegionArg::B => "b",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SpacingArg {
    Linear,
    Log,
}

impl SpacingArg {
    fn as_str(self) -> &'static str {
        match self {
            SpacingArg::Linear => "linear",
            SpacingArg::Log => "log",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

/// Flags shared by every data-producing subcommand.
#[derive(Args)]
struct IoArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Write the data to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EntropyArgs {
    /// Coupling at the region boundary
    #[arg(long, allow_negative_numbers = true)]
    lambda: f64,
    /// Observer position as a fraction of the boundary radius, in (0, 1]
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    x0: f64,
    /// Kernel evaluation mode
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    /// Relative tolerance for adaptive quadrature
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Discretization size for the spectral stage (omit to skip it)
    #[arg(long)]
    nodes: Option<usize>,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct ScanArgs {
    /// Smallest coupling in the sweep
    #[arg(long, allow_negative_numbers = true)]
    lambda_min: f64,
    /// Largest coupling in the sweep
    #[arg(long, allow_negative_numbers = true)]
    lambda_max: f64,
    /// Number of grid points (at least 2)
    #[arg(long)]
    points: usize,
    /// Grid spacing
    #[arg(long, value_enum, default_value_t = SpacingArg::Log)]
    spacing: SpacingArg,
    /// Observer position as a fraction of the boundary radius, in (0, 1]
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    x0: f64,
    /// Kernel evaluation mode
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    /// Relative tolerance for adaptive quadrature
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Discretization size for the per-row spectral stage (omit to skip it)
    #[arg(long)]
    nodes: Option<usize>,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Coupling at the region boundary
    #[arg(long, allow_negative_numbers = true)]
    lambda: f64,
    /// Observer position as a fraction of the boundary radius, in (0, 1]
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    x0: f64,
    /// Which reduced density operator to diagonalize
    #[arg(long, value_enum)]
    region: RegionArg,
    /// Kernel evaluation mode
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    /// Relative tolerance for the normalization quadrature
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Discretization size
    #[arg(long, default_value_t = 200)]
    nodes: usize,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct BoundArgs {
    /// Coupling at the region boundary
    #[arg(long, allow_negative_numbers = true)]
    lambda: f64,
    /// Observer position as a fraction of the boundary radius, in (0, 1]
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    x0: f64,
    /// Normalization feeding the intermediate estimate
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    /// Relative tolerance for the normalization quadrature
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct PhysicalArgs {
    /// Particle mass in kg (dimensional mode)
    #[arg(long)]
    mass: Option<f64>,
    /// Binding energy magnitude with a unit suffix, eV or J (dimensional mode)
    #[arg(long, value_parser = parse_energy)]
    energy: Option<f64>,
    /// Boundary radius in meters (dimensional mode)
    #[arg(long)]
    radius: Option<f64>,
    /// Decay constant in Planck units (Planck-unit mode)
    #[arg(long)]
    gamma: Option<f64>,
    /// Boundary radius in Planck lengths (Planck-unit mode)
    #[arg(long = "R-over-lp")]
    r_over_lp: Option<f64>,
    /// Observer position as a fraction of the boundary radius, in (0, 1]
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    x0: f64,
    /// `key = value` overrides for hbar, G, c
    #[arg(long)]
    constants_file: Option<PathBuf>,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct SelftestArgs {
    /// Check depth; `full` adds the dense eigensolves
    #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
    level: LevelArg,
}

enum CliError {
    Usage(String),
    Numerical(String),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> CliError {
        CliError::Usage(msg.into())
    }

    fn numerical(msg: impl std::fmt::Display) -> CliError {
        CliError::Numerical(msg.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Numerical(msg)) => {
            eprintln!("entlab: numerical failure: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("entlab: usage error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Entropy(args) => cmd_entropy(args),
        Command::Scan(args) => cmd_scan(args),
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::Bound(args) => cmd_bound(args),
        Command::Physical(args) => cmd_physical(args),
        Command::Selftest(args) => cmd_selftest(args),
    }
}

// ---------------------------------------------------------------- shared

fn parse_energy(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let (digits, scale) = if let Some(v) = t.strip_suffix("eV") {
        (v, physics::EV_JOULES)
    } else if let Some(v) = t.strip_suffix('J') {
        (v, 1.0)
    } else {
        return Err(String::from(
            "energy needs an explicit unit suffix, eV or J (e.g. 13.6eV or 2.18e-18J)",
        ));
    };
    let value: f64 = digits
        .trim()
        .parse()
        .map_err(|_| format!("cannot parse {:?} as a number", digits.trim()))?;
    if value.is_finite() && value > 0.0 {
        Ok(value * scale)
    } else {
        Err(String::from("energy must be positive and finite"))
    }
}

fn check_lambda(lambda: f64, flag: &str) -> Result<(), CliError> {
    if lambda.is_finite() && lambda > 0.0 {
        Ok(())
    } else {
        Err(CliError::usage(format!(
            "{flag} must be positive and finite, got {lambda}"
        )))
    }
}

fn check_x0(x0: f64) -> Result<(), CliError> {
    if x0.is_finite() && x0 > 0.0 && x0 <= 1.0 {
        Ok(())
    } else {
        Err(CliError::usage(format!(
            "--x0 must lie in (0, 1], got {x0}"
        )))
    }
}

fn check_tol(tol: f64) -> Result<(), CliError> {
    if tol.is_finite() && tol > 0.0 && tol < 1.0 {
        Ok(())
    } else {
        Err(CliError::usage(format!(
            "--tol must lie in (0, 1), got {tol}"
        )))
    }
}

fn check_nodes(nodes: usize) -> Result<(), CliError> {
    if (2..=entropy::MAX_NYSTROM_NODES).contains(&nodes) {
        Ok(())
    } else {
        Err(CliError::usage(format!(
            "--nodes must lie in 2..={}, got {nodes}",
            entropy::MAX_NYSTROM_NODES
        )))
    }
}

fn mode_str(mode: EvalMode) -> &'static str {
    match mode {
        EvalMode::Exact => "exact",
        EvalMode::Asymptotic => "asymptotic",
    }
}

fn emit(io: &IoArgs, content: String) -> Result<(), CliError> {
    write_output(io.out.as_deref(), &content)
        .map_err(|e| CliError::Numerical(format!("cannot write output: {e}")))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

// --------------------------------------------------------------- entropy

fn cmd_entropy(args: EntropyArgs) -> Result<(), CliError> {
    check_lambda(args.lambda, "--lambda")?;
    check_x0(args.x0)?;
    check_tol(args.tol)?;
    if let Some(n) = args.nodes {
        check_nodes(n)?;
    }
    let params = ModelParams::new(args.lambda, args.x0).map_err(CliError::numerical)?;
    let report = entropy::entropy_report(&params, args.mode.into(), args.tol, args.nodes)
        .map_err(CliError::numerical)?;
    let content = match args.io.format {
        FormatArg::Json => to_json(&report),
        FormatArg::Csv => entropy_report_csv(&report),
    };
    emit(&args.io, content)
}

fn entropy_report_csv(r: &EntropyReport) -> String {
    let mut s = String::from("# command: entropy\nkey,value\n");
    let mut kv = |key: &str, value: String| {
        s.push_str(key);
        s.push(',');
        s.push_str(&value);
        s.push('\n');
    };
    kv("schema_version", r.schema_version.to_string());
    kv("lambda", fmt_f64(r.lambda));
    kv("x0", fmt_f64(r.x0));
    kv("lambda_eff", fmt_f64(r.lambda_eff));
    kv("mode", mode_str(r.mode).to_string());
    kv("tol", fmt_f64(r.tol));
    kv(
        "spectral_nodes",
        r.spectral_nodes.map(|n| n.to_string()).unwrap_or_default(),
    );
    kv("log_c2", fmt_f64(r.log_c2));
    kv("diagonal_entropy_a", fmt_opt(r.diagonal_entropy_a));
    kv("diagonal_entropy_b", fmt_opt(r.diagonal_entropy_b));
    kv("diagonal_gap", fmt_opt(r.diagonal_gap));
    kv("spectral_entropy_a", fmt_opt(r.spectral_entropy_a));
    kv("spectral_entropy_b", fmt_opt(r.spectral_entropy_b));
    kv(
        "discarded_negative_mass",
        fmt_opt(r.discarded_negative_mass),
    );
    kv("bound_intermediate", fmt_f64(r.bound_intermediate));
    kv("bound_subleading", fmt_f64(r.bound_subleading));
    kv("bound_leading", fmt_f64(r.bound_leading));
    kv("in_asymptotic_regime", r.in_asymptotic_regime.to_string());
    kv("flags", flags_cell(&r.flags));
    kv("errors", flags_cell(&r.errors));
    s
}

// ------------------------------------------------------------------ scan

#[derive(Serialize)]
struct ScanRow {
    lambda: f64,
    s_diag_a: Option<f64>,
    s_diag_b: Option<f64>,
    s_spec_a: Option<f64>,
    s_spec_b: Option<f64>,
    bound_leading: Option<f64>,
    bound_subleading: Option<f64>,
    bound_intermediate: Option<f64>,
    trace_err_a: Option<f64>,
    trace_err_b: Option<f64>,
    flags: Vec<String>,
}

#[derive(Serialize)]
struct FitSummary {
    slope: f64,
    intercept: f64,
    points: usize,
    lambda_min_used: f64,
}

#[derive(Serialize)]
struct ScanOutput<'a> {
    schema_version: u32,
    command: &'static str,
    lambda_min: f64,
    lambda_max: f64,
    points: usize,
    spacing: &'static str,
    mode: EvalMode,
    tol: f64,
    nodes: Option<usize>,
    x0: f64,
    rows: &'a [ScanRow],
    fit_leading: Option<FitSummary>,
    fit_subleading: Option<FitSummary>,
    notes: &'a [String],
}

fn cmd_scan(args: ScanArgs) -> Result<(), CliError> {
    check_lambda(args.lambda_min, "--lambda-min")?;
    check_lambda(args.lambda_max, "--lambda-max")?;
    if args.lambda_min >= args.lambda_max {
        return Err(CliError::usage(format!(
            "--lambda-min must be smaller than --lambda-max, got {} and {}",
            args.lambda_min, args.lambda_max
        )));
    }
    if args.points < 2 {
        return Err(CliError::usage(format!(
            "--points must be at least 2, got {}",
            args.points
        )));
    }
    check_x0(args.x0)?;
    check_tol(args.tol)?;
    if let Some(n) = args.nodes {
        check_nodes(n)?;
    }

    let mode: EvalMode = args.mode.into();
    let grid = scan_grid(args.lambda_min, args.lambda_max, args.points, args.spacing);
    let rows: Vec<ScanRow> = grid
        .par_iter()
        .map(|&lambda| scan_row(lambda, args.x0, mode, args.tol, args.nodes))
        .collect();

    let mut notes = Vec::new();
    let fit_leading = scan_fit(&rows, 0.0, |r| r.bound_leading, "leading", &mut notes);
    // The subleading form only settles into its power law well above the
    // regime threshold; fit it over the top decade of the sweep.
    let window = args.lambda_max / 10.0;
    let fit_subleading = scan_fit(
        &rows,
        window,
        |r| r.bound_subleading,
        "subleading",
        &mut notes,
    );

    let content = match args.io.format {
        FormatArg::Json => to_json(&ScanOutput {
            schema_version: entropy::REPORT_SCHEMA_VERSION,
            command: "scan",
            lambda_min: args.lambda_min,
            lambda_max: args.lambda_max,
            points: args.points,
            spacing: args.spacing.as_str(),
            mode,
            tol: args.tol,
            nodes: args.nodes,
            x0: args.x0,
            rows: &rows,
            fit_leading,
            fit_subleading,
            notes: &notes,
        }),
        FormatArg::Csv => scan_csv(&args, mode, &rows, &fit_leading, &fit_subleading, &notes),
    };
    emit(&args.io, content)
}

fn scan_grid(min: f64, max: f64, points: usize, spacing: SpacingArg) -> Vec<f64> {
    (0..points)
        .map(|i| {
            // Pin both endpoints so round-trip through ln/exp cannot move them.
            if i == 0 {
                return min;
            }
            if i == points - 1 {
                return max;
            }
            let t = i as f64 / (points - 1) as f64;
            match spacing {
                SpacingArg::Linear => min + t * (max - min),
                SpacingArg::Log => (min.ln() + t * (max.ln() - min.ln())).exp(),
            }
        })
        .collect()
}

fn scan_row(lambda: f64, x0: f64, mode: EvalMode, tol: f64, nodes: Option<usize>) -> ScanRow {
    let mut row = ScanRow {
        lambda,
        s_diag_a: None,
        s_diag_b: None,
        s_spec_a: None,
        s_spec_b: None,
        bound_leading: None,
        bound_subleading: None,
        bound_intermediate: None,
        trace_err_a: None,
        trace_err_b: None,
        flags: Vec::new(),
    };
    let params = match ModelParams::new(lambda, x0) {
        Ok(p) => p,
        Err(e) => {
            row.flags.push(e.to_string());
            return row;
        }
    };
    let norm = match Normalization::compute(&params, mode, tol) {
        Ok(n) => Some(n),
        Err(e) => {
            row.flags.push(format!("normalization: {e}"));
            None
        }
    };

    // Leading and subleading estimates depend on the coupling alone, so a
    // failed exact normalization only costs the intermediate column.
    let fallback = Normalization::compute(&params, EvalMode::Asymptotic, tol).ok();
    if let Some(n) = norm.as_ref().or(fallback.as_ref()) {
        row.bound_leading = Some(entropy::bound(BoundVariant::Leading, &params, n).value);
        row.bound_subleading = Some(entropy::bound(BoundVariant::Subleading, &params, n).value);
    }
    if let Some(n) = norm.as_ref() {
        row.bound_intermediate = Some(entropy::bound(BoundVariant::Intermediate, &params, n).value);
    }

    if params.lambda_eff() > LAMBDA_KERNEL_CAP {
        row.flags.push(format!(
            "kernel stage skipped: coupling exceeds cap {LAMBDA_KERNEL_CAP}"
        ));
        return row;
    }
    let Some(norm) = norm else {
        return row;
    };

    for (region, slot) in [
        (Region::A, &mut row.s_diag_a),
        (Region::B, &mut row.s_diag_b),
    ] {
        match entropy::diagonal_entropy(region, &params, &norm, mode, tol) {
            Ok(r) => *slot = Some(r.value),
            Err(e) => row.flags.push(format!("diagonal {region:?}: {e}")),
        }
    }

    if let Some(n) = nodes {
        for (region, spec_slot, trace_slot) in [
            (Region::A, &mut row.s_spec_a, &mut row.trace_err_a),
            (Region::B, &mut row.s_spec_b, &mut row.trace_err_b),
        ] {
            match entropy::nystrom_matrix(region, n, &params, &norm, mode) {
                Ok(matrix) => {
                    *trace_slot = Some((matrix.trace() - 1.0).abs());
                    match entropy::spectral_from_matrix(&matrix) {
                        Ok(s) => *spec_slot = Some(s.entropy),
                        Err(e) => row.flags.push(format!("spectral {region:?}: {e}")),
                    }
                }
                Err(e) => row.flags.push(format!("spectral {region:?}: {e}")),
            }
        }
    }
    row
}

fn scan_fit(
    rows: &[ScanRow],
    lambda_min_used: f64,
    value: impl Fn(&ScanRow) -> Option<f64>,
    label: &str,
    notes: &mut Vec<String>,
) -> Option<FitSummary> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.lambda >= lambda_min_used)
        .filter_map(|r| value(r).map(|v| (r.lambda, v)))
        .filter(|&(_, v)| v > 0.0)
        .collect();
    let xs: Vec<f64> = pts.iter().map(|&(x, _)| x).collect();
    let ys: Vec<f64> = pts.iter().map(|&(_, y)| y).collect();
    match fitting::log_log_fit(&xs, &ys) {
        Ok(fit) => Some(FitSummary {
            slope: fit.slope,
            intercept: fit.intercept,
            points: xs.len(),
            lambda_min_used: if lambda_min_used > 0.0 {
                lambda_min_used
            } else {
                xs.first().copied().unwrap_or(0.0)
            },
        }),
        Err(e) => {
            notes.push(format!("{label} fit skipped: {e}"));
            None
        }
    }
}

const SCAN_HEADER: &str = "lambda,s_diag_a,s_diag_b,s_spec_a,s_spec_b,bound_leading,\
bound_subleading,bound_intermediate,trace_err_a,trace_err_b,flags";

fn scan_csv(
    args: &ScanArgs,
    mode: EvalMode,
    rows: &[ScanRow],
    fit_leading: &Option<FitSummary>,
    fit_subleading: &Option<FitSummary>,
    notes: &[String],
) -> String {
    let mut s = String::new();
    s.push_str("# command: scan\n");
    s.push_str(&format!(
        "# schema_version: {}\n",
        entropy::REPORT_SCHEMA_VERSION
    ));
    s.push_str(&format!("# lambda_min: {}\n", fmt_f64(args.lambda_min)));
    s.push_str(&format!("# lambda_max: {}\n", fmt_f64(args.lambda_max)));
    s.push_str(&format!("# points: {}\n", args.points));
    s.push_str(&format!("# spacing: {}\n", args.spacing.as_str()));
    s.push_str(&format!("# mode: {}\n", mode_str(mode)));
    s.push_str(&format!("# tol: {}\n", fmt_f64(args.tol)));
    s.push_str(&format!(
        "# nodes: {}\n",
        args.nodes
            .map(|n| n.to_string())
            .unwrap_or_else(|| "none".into())
    ));
    s.push_str(&format!("# x0: {}\n", fmt_f64(args.x0)));
    s.push_str(SCAN_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            fmt_f64(r.lambda),
            fmt_opt(r.s_diag_a),
            fmt_opt(r.s_diag_b),
            fmt_opt(r.s_spec_a),
            fmt_opt(r.s_spec_b),
            fmt_opt(r.bound_leading),
            fmt_opt(r.bound_subleading),
            fmt_opt(r.bound_intermediate),
            fmt_opt(r.trace_err_a),
            fmt_opt(r.trace_err_b),
            flags_cell(&r.flags),
        ));
    }
    if let Some(f) = fit_leading {
        s.push_str(&format!("# fit_leading_slope: {}\n", fmt_f64(f.slope)));
        s.push_str(&format!(
            "# fit_leading_intercept: {}\n",
            fmt_f64(f.intercept)
        ));
        s.push_str(&format!("# fit_leading_points: {}\n", f.points));
    }
    if let Some(f) = fit_subleading {
        s.push_str(&format!("# fit_subleading_slope: {}\n", fmt_f64(f.slope)));
        s.push_str(&format!(
            "# fit_subleading_intercept: {}\n",
            fmt_f64(f.intercept)
        ));
        s.push_str(&format!("# fit_subleading_points: {}\n", f.points));
        s.push_str(&format!(
            "# fit_subleading_lambda_min: {}\n",
            fmt_f64(f.lambda_min_used)
        ));
    }
    for note in notes {
        s.push_str(&format!("# note: {}\n", note));
    }
    s
}

// -------------------------------------------------------------- spectrum

#[derive(Serialize)]
struct SpectrumOutput {
    schema_version: u32,
    command: &'static str,
    lambda: f64,
    x0: f64,
    lambda_eff: f64,
    region: &'static str,
    mode: EvalMode,
    nodes: usize,
    trace: f64,
    eigenvalue_sum: f64,
    entropy: f64,
    discarded_negative_mass: f64,
    eigenvalues: Vec<f64>,
}

fn cmd_spectrum(args: SpectrumArgs) -> Result<(), CliError> {
    check_lambda(args.lambda, "--lambda")?;
    check_x0(args.x0)?;
    check_tol(args.tol)?;
    check_nodes(args.nodes)?;
    let params = ModelParams::new(args.lambda, args.x0).map_err(CliError::numerical)?;
    if params.lambda_eff() > LAMBDA_KERNEL_CAP {
        return Err(CliError::Numerical(format!(
            "effective coupling {} exceeds the kernel-stage cap {LAMBDA_KERNEL_CAP}",
            params.lambda_eff()
        )));
    }
    let mode: EvalMode = args.mode.into();
    let norm = Normalization::compute(&params, mode, args.tol).map_err(CliError::numerical)?;
    let matrix = entropy::nystrom_matrix(args.region.region(), args.nodes, &params, &norm, mode)
        .map_err(CliError::numerical)?;
    let spec = entropy::spectral_from_matrix(&matrix).map_err(CliError::numerical)?;
    let sum: f64 = spec.eigenvalues.iter().sum();

    let out = SpectrumOutput {
        schema_version: entropy::REPORT_SCHEMA_VERSION,
        command: "spectrum",
        lambda: args.lambda,
        x0: args.x0,
        lambda_eff: params.lambda_eff(),
        region: args.region.as_str(),
        mode,
        nodes: args.nodes,
        trace: matrix.trace(),
        eigenvalue_sum: sum,
        entropy: spec.entropy,
        discarded_negative_mass: spec.discarded_negative_mass,
        eigenvalues: spec.eigenvalues,
    };
    let content = match args.io.format {
        FormatArg::Json => to_json(&out),
        FormatArg::Csv => spectrum_csv(&out),
    };
    emit(&args.io, content)
}

fn spectrum_csv(out: &SpectrumOutput) -> String {
    let mut s = String::new();
    s.push_str("# command: spectrum\n");
    s.push_str(&format!("# schema_version: {}\n", out.schema_version));
    s.push_str(&format!("# lambda: {}\n", fmt_f64(out.lambda)));
    s.push_str(&format!("# x0: {}\n", fmt_f64(out.x0)));
    s.push_str(&format!("# lambda_eff: {}\n", fmt_f64(out.lambda_eff)));
    s.push_str(&format!("# region: {}\n", out.region));
    s.push_str(&format!("# mode: {}\n", mode_str(out.mode)));
    s.push_str(&format!("# nodes: {}\n", out.nodes));
    s.push_str(&format!("# trace: {}\n", fmt_f64(out.trace)));
    s.push_str(&format!(
        "# discarded_negative_mass: {}\n",
        fmt_f64(out.discarded_negative_mass)
    ));
    s.push_str("index,eigenvalue\n");
    for (i, ev) in out.eigenvalues.iter().enumerate() {
        s.push_str(&format!("{i},{}\n", fmt_f64(*ev)));
    }
    s.push_str(&format!("sum,{}\n", fmt_f64(out.eigenvalue_sum)));
    s.push_str(&format!("entropy,{}\n", fmt_f64(out.entropy)));
    s
}

// ----------------------------------------------------------------- bound

#[derive(Serialize)]
struct BoundOutput {
    schema_version: u32,
    command: &'static str,
    lambda: f64,
    x0: f64,
    lambda_eff: f64,
    mode: EvalMode,
    tol: f64,
    log_c2: f64,
    intermediate: f64,
    subleading: f64,
    leading: f64,
    in_asymptotic_regime: bool,
    asymptotic_regime_min_lambda: f64,
}

fn cmd_bound(args: BoundArgs) -> Result<(), CliError> {
    check_lambda(args.lambda, "--lambda")?;
    check_x0(args.x0)?;
    check_tol(args.tol)?;
    let params = ModelParams::new(args.lambda, args.x0).map_err(CliError::numerical)?;
    let mode: EvalMode = args.mode.into();
    let norm = Normalization::compute(&params, mode, args.tol).map_err(CliError::numerical)?;
    let intermediate = entropy::bound(BoundVariant::Intermediate, &params, &norm);
    let subleading = entropy::bound(BoundVariant::Subleading, &params, &norm);
    let leading = entropy::bound(BoundVariant::Leading, &params, &norm);

    let out = BoundOutput {
        schema_version: entropy::REPORT_SCHEMA_VERSION,
        command: "bound",
        lambda: args.lambda,
        x0: args.x0,
        lambda_eff: params.lambda_eff(),
        mode,
        tol: args.tol,
        log_c2: norm.log_c2(),
        intermediate: intermediate.value,
        subleading: subleading.value,
        leading: leading.value,
        in_asymptotic_regime: leading.in_asymptotic_regime,
        asymptotic_regime_min_lambda: entropy::asymptotic_regime_min_lambda(),
    };
    let content = match args.io.format {
        FormatArg::Json => to_json(&out),
        FormatArg::Csv => {
            let mut s = String::from("# command: bound\nkey,value\n");
            s.push_str(&format!("schema_version,{}\n", out.schema_version));
            s.push_str(&format!("lambda,{}\n", fmt_f64(out.lambda)));
            s.push_str(&format!("x0,{}\n", fmt_f64(out.x0)));
            s.push_str(&format!("lambda_eff,{}\n", fmt_f64(out.lambda_eff)));
            s.push_str(&format!("mode,{}\n", mode_str(out.mode)));
            s.push_str(&format!("tol,{}\n", fmt_f64(out.tol)));
            s.push_str(&format!("log_c2,{}\n", fmt_f64(out.log_c2)));
            s.push_str(&format!("intermediate,{}\n", fmt_f64(out.intermediate)));
            s.push_str(&format!("subleading,{}\n", fmt_f64(out.subleading)));
            s.push_str(&format!("leading,{}\n", fmt_f64(out.leading)));
            s.push_str(&format!(
                "in_asymptotic_regime,{}\n",
                out.in_asymptotic_regime
            ));
            s.push_str(&format!(
                "asymptotic_regime_min_lambda,{}\n",
                fmt_f64(out.asymptotic_regime_min_lambda)
            ));
            s
        }
    };
    emit(&args.io, content)
}

// -------------------------------------------------------------- physical

#[derive(Serialize)]
struct PhysicalOutput {
    schema_version: u32,
    command: &'static str,
    constants: PhysicalConstants,
    scenario: physics::PhysicalScenario,
    holographic: physics::HolographicReport,
}

#[derive(Serialize)]
struct GeometricOutput {
    schema_version: u32,
    command: &'static str,
    scenario: physics::GeometricScenario,
}

fn cmd_physical(args: PhysicalArgs) -> Result<(), CliError> {
    check_x0(args.x0)?;
    let planck_mode = args.gamma.is_some() || args.r_over_lp.is_some();
    if planck_mode {
        if args.mass.is_some() || args.energy.is_some() || args.radius.is_some() {
            return Err(CliError::usage(
                "Planck-unit flags (--gamma, --R-over-lp) cannot be combined with \
                 dimensional flags (--mass, --energy, --radius)",
            ));
        }
        if args.constants_file.is_some() {
            return Err(CliError::usage(
                "--constants-file has no effect in Planck-unit mode",
            ));
        }
        let (Some(gamma), Some(r_over_lp)) = (args.gamma, args.r_over_lp) else {
            return Err(CliError::usage(
                "Planck-unit mode needs both --gamma and --R-over-lp",
            ));
        };
        let scenario = physics::build_geometric(gamma, r_over_lp, args.x0)
            .map_err(|e| CliError::usage(e.to_string()))?;
        let out = GeometricOutput {
            schema_version: entropy::REPORT_SCHEMA_VERSION,
            command: "physical",
            scenario,
        };
        let content = match args.io.format {
            FormatArg::Json => to_json(&out),
            FormatArg::Csv => geometric_csv(&out),
        };
        return emit(&args.io, content);
    }

    let (Some(mass), Some(energy), Some(radius)) = (args.mass, args.energy, args.radius) else {
        return Err(CliError::usage(
            "dimensional mode needs --mass, --energy, and --radius \
             (or use --gamma with --R-over-lp)",
        ));
    };
    let constants = match &args.constants_file {
        Some(path) => {
            PhysicalConstants::from_file(path).map_err(|e| CliError::usage(e.to_string()))?
        }
        None => physics::load_constants().map_err(|e| CliError::usage(e.to_string()))?,
    };
    let scenario = physics::build_scenario(mass, energy, radius, args.x0, &constants)
        .map_err(|e| CliError::usage(e.to_string()))?;
    let holographic =
        physics::holographic_report(&scenario, &constants).map_err(CliError::numerical)?;

    let out = PhysicalOutput {
        schema_version: entropy::REPORT_SCHEMA_VERSION,
        command: "physical",
        constants,
        scenario,
        holographic,
    };
    let content = match args.io.format {
        FormatArg::Json => to_json(&out),
        FormatArg::Csv => physical_csv(&out),
    };
    emit(&args.io, content)
}

fn physical_csv(out: &PhysicalOutput) -> String {
    let mut s = String::from("# command: physical\nkey,value\n");
    s.push_str(&format!("schema_version,{}\n", out.schema_version));
    s.push_str(&format!("hbar,{}\n", fmt_f64(out.constants.hbar)));
    s.push_str(&format!("g_newton,{}\n", fmt_f64(out.constants.g_newton)));
    s.push_str(&format!("c,{}\n", fmt_f64(out.constants.c)));
    s.push_str(&format!("mass,{}\n", fmt_f64(out.scenario.mass)));
    s.push_str(&format!(
        "energy_abs,{}\n",
        fmt_f64(out.scenario.energy_abs)
    ));
    s.push_str(&format!("radius,{}\n", fmt_f64(out.scenario.radius)));
    s.push_str(&format!("x0,{}\n", fmt_f64(out.scenario.x0)));
    s.push_str(&format!("kappa,{}\n", fmt_f64(out.scenario.kappa)));
    s.push_str(&format!("gamma,{}\n", fmt_f64(out.scenario.gamma)));
    s.push_str(&format!("lambda,{}\n", fmt_f64(out.scenario.lambda)));
    s.push_str(&format!("eta,{}\n", fmt_f64(out.scenario.eta)));
    s.push_str(&format!("area,{}\n", fmt_f64(out.scenario.area)));
    s.push_str(&format!(
        "kernel_computable,{}\n",
        out.scenario.kernel_computable
    ));
    s.push_str(&format!(
        "s_holographic,{}\n",
        fmt_f64(out.holographic.s_holographic)
    ));
    s.push_str(&format!(
        "s_model_bound,{}\n",
        fmt_f64(out.holographic.s_model_bound)
    ));
    s.push_str(&format!(
        "s_leading_at_boundary,{}\n",
        fmt_f64(out.holographic.s_leading_at_boundary)
    ));
    s.push_str(&format!(
        "stronger_than_holographic,{}\n",
        out.holographic.stronger_than_holographic
    ));
    s
}

fn geometric_csv(out: &GeometricOutput) -> String {
    let mut s = String::from("# command: physical\nkey,value\n");
    s.push_str(&format!("schema_version,{}\n", out.schema_version));
    s.push_str(&format!("gamma,{}\n", fmt_f64(out.scenario.gamma)));
    s.push_str(&format!("r_over_lp,{}\n", fmt_f64(out.scenario.r_over_lp)));
    s.push_str(&format!("x0,{}\n", fmt_f64(out.scenario.x0)));
    s.push_str(&format!("lambda,{}\n", fmt_f64(out.scenario.lambda)));
    s.push_str(&format!("eta,{}\n", fmt_f64(out.scenario.eta)));
    s.push_str(&format!(
        "s_holographic,{}\n",
        fmt_f64(out.scenario.s_holographic)
    ));
    s.push_str(&format!(
        "s_model_bound,{}\n",
        fmt_f64(out.scenario.s_model_bound)
    ));
    s.push_str(&format!(
        "stronger_than_holographic,{}\n",
        out.scenario.stronger_than_holographic
    ));
    s.push_str(&format!(
        "kernel_computable,{}\n",
        out.scenario.kernel_computable
    ));
    s
}

// -------------------------------------------------------------- selftest

fn cmd_selftest(args: SelftestArgs) -> Result<(), CliError> {
    let depth = match args.level {
        LevelArg::Quick => selftest::Depth::Quick,
        LevelArg::Full => selftest::Depth::Full,
    };
    let results = selftest::run(depth);
    let total = results.len();
    let passed = results.iter().filter(|r| r.passed).count();
    for r in &results {
        let status = if r.passed { "ok  " } else { "FAIL" };
        println!("{status} {:<42} {}", r.name, r.detail);
    }
    if passed == total {
        println!("PASS {passed}/{total}");
        Ok(())
    } else {
        println!("FAIL {passed}/{total}");
        Err(CliError::Numerical(format!(
            "{} of {total} self-test checks failed",
            total - passed
        )))
    }
}
