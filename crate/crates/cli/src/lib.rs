//! Command-line front end for `subdiv-core`.
//!
//! Every command writes to `--out` when given and to stdout otherwise. Output depends only on
//! the arguments, so two runs with the same arguments produce identical bytes.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use subdiv_core::convergence::{certify_with, CertifyOptions, ConvergenceReport};
use subdiv_core::dynamics::{decompose_modes, iterate_local_with, trajectory_to_csv, Norm};
use subdiv_core::local_matrix::{build_local_matrix, classify, LocalMatrix, Spectrum, SpectrumClass};
use subdiv_core::rational::{self, Rational};
use subdiv_core::refine::{
    basis_experiment, curve_to_csv, curve_to_svg, parameterize, refine_k, ControlPolygon, Mesh,
    SampledCurve,
};
use subdiv_core::scheme::{
    classify_symmetry, load_scheme, scheme_to_json, Catalog, Mask, SchemeRecord, SymmetryReport,
};
use subdiv_core::search::{
    min_width_report, parameter_names, result_summary_json, result_to_csv, scan, ParamRange, SearchSpec,
};
use subdiv_core::{Error, Execution};

#[derive(Debug, Parser)]
#[command(name = "subdiv", version, about = "Binary subdivision schemes for curves")]
pub struct CommandConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Scheme to use: `catalog:NAME` or a path to a scheme JSON file.
    #[arg(long, global = true)]
    pub scheme: Option<String>,

    /// Refinement steps for `refine` and `basis`.
    #[arg(long, global = true, default_value_t = 10)]
    pub iters: u32,

    /// Iteration steps for `dynamics`.
    #[arg(long = "K", global = true, default_value_t = 30)]
    pub k: usize,

    /// Mask width for `search`.
    #[arg(long, global = true)]
    pub width: Option<usize>,

    /// For `search` without `--width`: scan widths 2..=N and report the smallest one with a
    /// convergent complex-eigenvalue scheme.
    #[arg(long, global = true)]
    pub max_width: Option<usize>,

    /// Parameter grid `lo:hi:step[,lo:hi:step…]`, one range per free parameter (a single range
    /// is reused for every parameter).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub grid: Option<String>,

    /// Tolerance for classifying eigenvalues as real, negative or equal to 1.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,

    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Highest smoothness order tried by `analyze`.
    #[arg(long, global = true, default_value_t = 4)]
    pub target_m: u32,

    /// Also try the norms of powers 2..=L of the difference scheme in `analyze`.
    #[arg(long, global = true, default_value_t = 1)]
    pub max_norm_power: u32,

    /// Initial polygon for `refine`: comma-separated rationals (default: a single 1).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub points: Option<String>,

    /// Index of the first value given with `--points`.
    #[arg(long, global = true, default_value_t = 0, allow_hyphen_values = true)]
    pub first_index: i64,

    /// Mesh for `refine` parameters.
    #[arg(long, global = true, value_enum, default_value_t = MeshArg::Primal)]
    pub mesh: MeshArg,

    /// Initial window for `dynamics`: `eJ` (J-th unit vector, 1-based) or comma-separated
    /// rationals.
    #[arg(long, global = true, default_value = "e1", allow_hyphen_values = true)]
    pub v0: String,

    /// Distance norm for `dynamics`.
    #[arg(long, global = true, value_enum, default_value_t = NormArg::Inf)]
    pub norm: NormArg,

    /// In `search`, classify by spectrum only (skip the `‖S_b‖ < 1` requirement).
    #[arg(long, global = true)]
    pub no_filter: bool,

    /// Evaluate on a single thread.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Convergence report, local matrix and spectrum (JSON).
    Analyze,
    /// Refine a control polygon and export the samples.
    Refine,
    /// Basis-function experiment on [-4, 4].
    Basis,
    /// Local dynamics `v_{k+1} = A v_k` with mode decomposition.
    Dynamics,
    /// Grid scan over a palindromic mask family.
    Search,
    /// List the built-in schemes.
    Catalog,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
    Text,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
            Format::Text => "text",
        };
        f.write_str(name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MeshArg {
    Primal,
    Dual,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    Inf,
    Two,
}

/// A failed command, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Invalid input or a domain failure (exit code 1).
    Domain(String),
    /// Filesystem failure (exit code 2).
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Io(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Domain(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_io() {
            CliError::Io(e.to_string())
        } else {
            CliError::Domain(e.to_string())
        }
    }
}

fn domain(message: impl Into<String>) -> CliError {
    CliError::Domain(message.into())
}

/// Runs one command, writing its output to `--out` or `stdout`.
pub fn run(config: &CommandConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    if !(config.tol > 0.0 && config.tol.is_finite()) {
        return Err(domain(format!("--tol must be positive, got {}", config.tol)));
    }
    match config.command {
        Command::Analyze => analyze(config, stdout),
        Command::Refine => refine(config, stdout),
        Command::Basis => basis(config, stdout),
        Command::Dynamics => dynamics(config, stdout),
        Command::Search => search(config, stdout),
        Command::Catalog => catalog(config, stdout),
    }
}

fn exec(config: &CommandConfig) -> Execution {
    if config.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn format_for(config: &CommandConfig, allowed: &[Format]) -> Result<Format, CliError> {
    match config.format {
        None => Ok(allowed[0]),
        Some(f) if allowed.contains(&f) => Ok(f),
        Some(f) => {
            let names: Vec<String> = allowed.iter().map(|f| f.to_string()).collect();
            Err(domain(format!(
                "format {f} is not available for this command (use {})",
                names.join(" or ")
            )))
        }
    }
}

fn emit(config: &CommandConfig, stdout: &mut dyn Write, text: &str) -> Result<(), CliError> {
    match &config.out {
        Some(path) => write_file(path, text),
        None => match stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
                Err(CliError::Io(format!("writing to stdout: {e}")))
            }
            _ => Ok(()),
        },
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

/// Resolves `catalog:NAME` or a scheme file path.
pub fn resolve_scheme(source: Option<&str>) -> Result<SchemeRecord, CliError> {
    let source = source.ok_or_else(|| domain("--scheme is required (catalog:NAME or a file path)"))?;
    match source.strip_prefix("catalog:") {
        Some(name) => Ok(Catalog::builtin().get(name)?.clone()),
        None => load_scheme(source).map_err(|e| match e {
            Error::Io(io) => CliError::Io(format!("reading {source}: {io}")),
            other => CliError::from(other),
        }),
    }
}

fn scheme(config: &CommandConfig) -> Result<SchemeRecord, CliError> {
    resolve_scheme(config.scheme.as_deref())
}

fn parse_rationals(text: &str) -> Result<Vec<Rational>, CliError> {
    text.split(',')
        .map(|s| rational::parse(s.trim()).map_err(CliError::from))
        .collect()
}

#[derive(Serialize)]
struct AnalyzeReport<'a> {
    scheme: &'a str,
    mask: &'a Mask,
    symmetry: SymmetryReport,
    convergence: ConvergenceReport,
    local_matrix: Option<LocalMatrix>,
    spectrum: Option<Spectrum>,
    classification: Option<SpectrumClass>,
}

fn analyze(config: &CommandConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    format_for(config, &[Format::Json])?;
    let record = scheme(config)?;
    let options = CertifyOptions { max_norm_power: config.max_norm_power.clamp(1, 8) };
    let convergence = certify_with(&record.mask, config.target_m, &options);
    let (local_matrix, spectrum, classification) = if record.mask.width() >= 2 {
        let m = build_local_matrix(&record.mask)?;
        let s = m.spectrum()?;
        let c = classify(&s, config.tol);
        (Some(m), Some(s), Some(c))
    } else {
        (None, None, None)
    };
    let report = AnalyzeReport {
        scheme: &record.name,
        mask: &record.mask,
        symmetry: classify_symmetry(&record.mask),
        convergence,
        local_matrix,
        spectrum,
        classification,
    };
    emit(config, stdout, &to_json(&report))
}

fn curve_output(config: &CommandConfig, stdout: &mut dyn Write, curve: &SampledCurve) -> Result<(), CliError> {
    let text = match format_for(config, &[Format::Csv, Format::Svg, Format::Json])? {
        Format::Svg => curve_to_svg(curve),
        Format::Json => to_json(curve),
        _ => curve_to_csv(curve),
    };
    emit(config, stdout, &text)
}

fn refine(config: &CommandConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let record = scheme(config)?;
    let mesh = match config.mesh {
        MeshArg::Primal => Mesh::Primal,
        MeshArg::Dual => Mesh::Dual,
    };
    let values = match &config.points {
        Some(text) => parse_rationals(text)?,
        None => vec![Rational::from_integer(1.into())],
    };
    let start = ControlPolygon::with_mesh(0, config.first_index, values, mesh);
    let refined = refine_k(&start, &record.mask, config.iters)?;
    curve_output(config, stdout, &parameterize(&refined))
}

fn basis(config: &CommandConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let record = scheme(config)?;
    let curve = basis_experiment(&record.mask, config.iters)?;
    curve_output(config, stdout, &curve)
}

fn initial_window(text: &str, n: usize) -> Result<Vec<Rational>, CliError> {
    if let Some(j) = text.strip_prefix('e') {
        let j: usize = j
            .parse()
            .map_err(|_| domain(format!("--v0 {text:?}: expected eJ or a list of rationals")))?;
        if j == 0 || j > n {
            return Err(domain(format!("--v0 {text}: unit vector index must be in 1..={n}")));
        }
        return Ok((1..=n)
            .map(|i| Rational::from_integer(i64::from(i == j).into()))
            .collect());
    }
    let v = parse_rationals(text)?;
    if v.len() != n {
        return Err(domain(format!("--v0 has {} values, the local matrix needs {n}", v.len())));
    }
    Ok(v)
}

fn dynamics(config: &CommandConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let format = format_for(config, &[Format::Csv, Format::Json])?;
    let record = scheme(config)?;
    let a = build_local_matrix(&record.mask)?;
    let v0 = initial_window(&config.v0, a.n)?;
    let norm = match config.norm {
        NormArg::Inf => Norm::Inf,
        NormArg::Two => Norm::Two,
    };
    let trajectory = iterate_local_with(&v0, &a, config.k, norm)?;
    let trajectory = decompose_modes(trajectory, &a.spectrum()?);
    let text = match format {
        Format::Json => to_json(&trajectory),
        _ => trajectory_to_csv(&trajectory),
    };
    emit(config, stdout, &text)
}

fn grid_ranges(config: &CommandConfig, width: usize) -> Result<Option<Vec<ParamRange>>, CliError> {
    let Some(text) = &config.grid else { return Ok(None) };
    let ranges: Vec<ParamRange> = text
        .split(',')
        .map(|r| ParamRange::parse(r.trim()).map_err(CliError::from))
        .collect::<Result<_, _>>()?;
    let needed = parameter_names(width).len();
    match (ranges.len(), needed) {
        (_, 0) => Ok(Some(Vec::new())),
        (1, n) => Ok(Some(vec![ranges[0].clone(); n])),
        (k, n) if k == n => Ok(Some(ranges)),
        (k, n) => Err(domain(format!("width {width} needs {n} grid ranges, got {k}"))),
    }
}

fn search(config: &CommandConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let format = format_for(config, &[Format::Csv, Format::Json])?;
    let width = match (config.width, config.max_width) {
        (Some(w), _) => w,
        (None, Some(max)) => return min_width(config, stdout, max),
        (None, None) => return Err(domain("search needs --width W or --max-width N")),
    };
    let mut spec = match grid_ranges(config, width)? {
        Some(ranges) => SearchSpec::new(width, ranges, true)?,
        None => SearchSpec::default_for(width)?,
    };
    spec.convergence_filter = !config.no_filter;
    let result = scan(&spec, exec(config))?;
    let summary = result_summary_json(&result);
    match format {
        Format::Json => emit(config, stdout, &summary),
        _ => {
            emit(config, stdout, &result_to_csv(&result))?;
            if let Some(path) = &config.out {
                write_file(&path.with_extension("summary.json"), &summary)?;
            }
            Ok(())
        }
    }
}

fn min_width(config: &CommandConfig, stdout: &mut dyn Write, max: usize) -> Result<(), CliError> {
    format_for(config, &[Format::Json])?;
    let mut overrides = Vec::new();
    if config.grid.is_some() {
        return Err(domain("--grid needs --width; --max-width uses the default grids"));
    }
    if config.no_filter {
        for w in 2..=max.min(subdiv_core::search::MAX_WIDTH) {
            let mut spec = SearchSpec::default_for(w)?;
            spec.convergence_filter = false;
            overrides.push(spec);
        }
    }
    let report = min_width_report(max, &overrides, exec(config))?;
    emit(config, stdout, &to_json(&report))
}

fn catalog(config: &CommandConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let catalog = Catalog::builtin();
    let text = match format_for(config, &[Format::Text, Format::Json])? {
        Format::Json => {
            let records: Vec<serde_json::Value> = catalog
                .iter()
                .map(|r| serde_json::from_str(&scheme_to_json(r)).expect("scheme JSON parses"))
                .collect();
            to_json(&records)
        }
        _ => {
            let mut out = String::from("name\twidth\tsupport\tsmoothness\tcoefficients\n");
            for r in catalog.iter() {
                let coeffs: Vec<String> = r.mask.coeffs().iter().map(rational::format).collect();
                out.push_str(&format!(
                    "{}\t{}\t{}..{}\t{}\t{}\n",
                    r.name,
                    r.mask.width(),
                    r.mask.support_min(),
                    r.mask.support_max(),
                    r.smoothness.map_or("-".to_string(), |m| format!("C{m}")),
                    coeffs.join(" ")
                ));
            }
            out
        }
    };
    emit(config, stdout, &text)
}

/// Parses arguments, runs, and maps failures to exit codes (1 domain, 2 I/O).
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match CommandConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&config, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

/// Convenience for the binary: real stdout and stderr.
pub fn main_from_env() -> u8 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    main_with_args(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
