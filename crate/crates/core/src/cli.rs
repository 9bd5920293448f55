//! Command-line front end.
//!
//! ```text
//! medbf super  <input> [--alternative one_sided|two_sided] [common]
//! medbf infer  <input> --ni-margin M [--ni-margin-std] [common]
//! medbf equiv  <input> [--interval V | --interval LO,HI] [--interval-std] [common]
//! medbf sweep  <input> --design super|infer|equiv --scales R1,R2,... [design flags] [common]
//! ```
//!
//! `<input>` is exactly one of `--raw FILE`, `--raw-x FILE --raw-y FILE`,
//! the six `--n-*/--mean-*/--sd-*` flags, or `--n-*/--mean-*` with
//! `--ci-margin` (and optionally `--ci-level`).
//!
//! Exit status: 0 on success, 2 for invalid invocations or inputs, 3 when
//! the numerics fail.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::datamodel::{derive_stats, DataError, RawGroups, StudyInput, SummaryCi, SummaryMoments};
use crate::engine::{
    compute_bf, prior_sweep, Alternative, CauchyPrior, Design, Direction, EngineError, TestSpec,
    DEFAULT_PRIOR_SCALE,
};
use crate::report::{
    curves_to_csv, default_curve_range, emit_density_curves, render_json, render_sweep_json,
    render_sweep_text, render_text_with, Format, ReportError, ReportOptions,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("{path}: header must be `group,value`, found `{found}`")]
    BadHeader { path: PathBuf, found: String },
    #[error("{path}, line {line}: expected 2 columns (group,value), found {found}")]
    ColumnCount {
        path: PathBuf,
        line: u64,
        found: usize,
    },
    #[error("{path}, line {line}: unknown group label `{label}`; use `x` (control) or `y` (experimental)")]
    UnknownGroup {
        path: PathBuf,
        line: u64,
        label: String,
    },
    #[error("{path}, line {line}: `{value}` is not a number")]
    NonNumeric {
        path: PathBuf,
        line: u64,
        value: String,
    },
    #[error("{path}: group {group} has {n} observation(s); at least 2 are required")]
    TooFewRows {
        path: PathBuf,
        group: char,
        n: usize,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Report(#[from] ReportError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        let numerical = match self {
            CliError::Engine(e) => e.is_numerical(),
            CliError::Report(ReportError::Engine(e)) => e.is_numerical(),
            _ => false,
        };
        if numerical {
            EXIT_NUMERICAL
        } else {
            EXIT_INVALID
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "medbf",
    version,
    about = "Bayes factors for superiority, non-inferiority and equivalence designs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Superiority test (BF10)
    Super {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = AlternativeArg::TwoSided)]
        alternative: AlternativeArg,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Non-inferiority test (BF10)
    Infer {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        margin: NiArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Equivalence test (BF01)
    Equiv {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        interval: IntervalArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Repeat a test across several prior scales
    Sweep {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum)]
        design: DesignArg,
        /// Comma-separated prior scales
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        scales: Vec<f64>,
        #[arg(long, value_enum)]
        alternative: Option<AlternativeArg>,
        #[arg(long, allow_negative_numbers = true)]
        ni_margin: Option<f64>,
        #[arg(long)]
        ni_margin_std: bool,
        #[arg(long, allow_hyphen_values = true)]
        interval: Option<String>,
        #[arg(long)]
        interval_std: bool,
        #[arg(long, value_enum, default_value_t = DirectionArg::High)]
        direction: DirectionArg,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
        /// Significant digits for Bayes factors in scientific notation
        #[arg(long, default_value_t = 3)]
        digits: usize,
    },
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// CSV file with header `group,value` and groups `x` (control) and `y`
    #[arg(long, value_name = "FILE")]
    pub raw: Option<PathBuf>,
    /// One value per line for the control group
    #[arg(long, value_name = "FILE")]
    pub raw_x: Option<PathBuf>,
    /// One value per line for the experimental group
    #[arg(long, value_name = "FILE")]
    pub raw_y: Option<PathBuf>,
    #[arg(long)]
    pub n_x: Option<usize>,
    #[arg(long)]
    pub n_y: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub mean_x: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub mean_y: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub sd_x: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub sd_y: Option<f64>,
    /// Half-width of the confidence interval for mean_y - mean_x
    #[arg(long, allow_negative_numbers = true)]
    pub ci_margin: Option<f64>,
    /// Confidence level of --ci-margin [default: 0.95]
    #[arg(long, allow_negative_numbers = true)]
    pub ci_level: Option<f64>,
}

#[derive(Debug, Args)]
pub struct NiArgs {
    /// Non-inferiority margin (outcome units unless --ni-margin-std)
    #[arg(long, allow_negative_numbers = true)]
    pub ni_margin: f64,
    #[arg(long)]
    pub ni_margin_std: bool,
}

#[derive(Debug, Args)]
pub struct IntervalArgs {
    /// `V` for (-V, V) or `LO,HI`; 0 is the point null [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    pub interval: Option<String>,
    #[arg(long)]
    pub interval_std: bool,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    #[arg(long, value_enum, default_value_t = DirectionArg::High)]
    pub direction: DirectionArg,
    /// Cauchy prior scale [default: 0.7071 = 1/sqrt(2)]
    #[arg(long, allow_negative_numbers = true)]
    pub prior_scale: Option<f64>,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    pub format: FormatArg,
    /// Write prior and posterior density curves of delta as CSV
    #[arg(long, value_name = "FILE")]
    pub curves: Option<PathBuf>,
    /// Significant digits for Bayes factors in scientific notation
    #[arg(long, default_value_t = 3)]
    pub digits: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    High,
    Low,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum AlternativeArg {
    OneSided,
    TwoSided,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DesignArg {
    Super,
    Infer,
    Equiv,
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::High => Direction::High,
            DirectionArg::Low => Direction::Low,
        }
    }
}

impl From<AlternativeArg> for Alternative {
    fn from(a: AlternativeArg) -> Self {
        match a {
            AlternativeArg::OneSided => Alternative::OneSided,
            AlternativeArg::TwoSided => Alternative::TwoSided,
        }
    }
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
        }
    }
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

fn parse_number(path: &Path, line: u64, field: &str) -> Result<f64, CliError> {
    match field.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(CliError::NonNumeric {
            path: path.to_path_buf(),
            line,
            value: field.to_string(),
        }),
    }
}

fn check_rows(path: &Path, group: char, n: usize) -> Result<(), CliError> {
    if n < 2 {
        Err(CliError::TooFewRows {
            path: path.to_path_buf(),
            group,
            n,
        })
    } else {
        Ok(())
    }
}

/// Read a two-column `group,value` CSV; row order is irrelevant.
pub fn read_raw_csv(path: &Path) -> Result<RawGroups, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| io_error(path, e))?;
    let header = reader.headers().map_err(|e| io_error(path, e))?.clone();
    if header.len() != 2 || &header[0] != "group" || &header[1] != "value" {
        return Err(CliError::BadHeader {
            path: path.to_path_buf(),
            found: header.iter().collect::<Vec<_>>().join(","),
        });
    }
    let (mut x, mut y) = (Vec::new(), Vec::new());
    for record in reader.records() {
        let record = record.map_err(|e| io_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() != 2 {
            return Err(CliError::ColumnCount {
                path: path.to_path_buf(),
                line,
                found: record.len(),
            });
        }
        let value = parse_number(path, line, &record[1])?;
        match &record[0] {
            "x" => x.push(value),
            "y" => y.push(value),
            other => {
                return Err(CliError::UnknownGroup {
                    path: path.to_path_buf(),
                    line,
                    label: other.to_string(),
                })
            }
        }
    }
    check_rows(path, 'x', x.len())?;
    check_rows(path, 'y', y.len())?;
    Ok(RawGroups::new(x, y)?)
}

/// Read one value per line; blank lines are skipped.
pub fn read_column(path: &Path, group: char) -> Result<Vec<f64>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let mut values = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let field = raw.trim();
        if field.is_empty() {
            continue;
        }
        values.push(parse_number(path, i as u64 + 1, field)?);
    }
    check_rows(path, group, values.len())?;
    Ok(values)
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

impl InputArgs {
    /// Build the single input mode the flags describe.
    pub fn to_input(&self) -> Result<StudyInput, CliError> {
        let raw = self.raw.is_some() || self.raw_x.is_some() || self.raw_y.is_some();
        let summary_any = self.n_x.is_some()
            || self.n_y.is_some()
            || self.mean_x.is_some()
            || self.mean_y.is_some();
        let sds = self.sd_x.is_some() || self.sd_y.is_some();
        let ci = self.ci_margin.is_some() || self.ci_level.is_some();

        if raw && (summary_any || sds || ci) {
            return Err(usage(
                "conflicting input modes: raw data files cannot be combined with summary \
                 statistics (--n-*, --mean-*, --sd-*, --ci-*)",
            ));
        }
        if sds && ci {
            return Err(usage(
                "conflicting input modes: give either group SDs (--sd-x/--sd-y) or a \
                 confidence interval (--ci-margin/--ci-level), not both",
            ));
        }
        if raw {
            return match (&self.raw, &self.raw_x, &self.raw_y) {
                (Some(p), None, None) => Ok(read_raw_csv(p)?.into()),
                (None, Some(px), Some(py)) => {
                    let x = read_column(px, 'x')?;
                    let y = read_column(py, 'y')?;
                    Ok(RawGroups::new(x, y)?.into())
                }
                (Some(_), _, _) => Err(usage(
                    "conflicting input modes: use either --raw or --raw-x/--raw-y",
                )),
                _ => Err(usage("--raw-x and --raw-y must be given together")),
            };
        }
        if !summary_any && !sds && !ci {
            return Err(usage(
                "no input given: supply --raw FILE, --raw-x/--raw-y, or summary statistics \
                 (--n-x --n-y --mean-x --mean-y with --sd-x --sd-y or --ci-margin)",
            ));
        }
        let mut missing = Vec::new();
        let need = |name: &'static str, present: bool, missing: &mut Vec<&'static str>| {
            if !present {
                missing.push(name);
            }
        };
        need("--n-x", self.n_x.is_some(), &mut missing);
        need("--n-y", self.n_y.is_some(), &mut missing);
        need("--mean-x", self.mean_x.is_some(), &mut missing);
        need("--mean-y", self.mean_y.is_some(), &mut missing);
        if ci {
            need("--ci-margin", self.ci_margin.is_some(), &mut missing);
        } else {
            need("--sd-x", self.sd_x.is_some(), &mut missing);
            need("--sd-y", self.sd_y.is_some(), &mut missing);
        }
        if !missing.is_empty() {
            return Err(usage(format!(
                "incomplete summary input: missing {}",
                missing.join(", ")
            )));
        }
        let (n_x, n_y) = (self.n_x.unwrap(), self.n_y.unwrap());
        let (mean_x, mean_y) = (self.mean_x.unwrap(), self.mean_y.unwrap());
        if ci {
            let level = self.ci_level.unwrap_or(SummaryCi::DEFAULT_LEVEL);
            Ok(SummaryCi::new(n_x, n_y, mean_x, mean_y, self.ci_margin.unwrap(), level)?.into())
        } else {
            Ok(SummaryMoments::new(
                n_x,
                n_y,
                mean_x,
                mean_y,
                self.sd_x.unwrap(),
                self.sd_y.unwrap(),
            )?
            .into())
        }
    }
}

/// Parse `V` (symmetric) or `LO,HI`.
pub fn parse_interval(text: &str) -> Result<(f64, f64), CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let num = |s: &str| -> Result<f64, CliError> {
        s.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| usage(format!("--interval: `{s}` is not a finite number")))
    };
    match parts.as_slice() {
        [v] => {
            let v = num(v)?;
            Ok((-v.abs(), v.abs()))
        }
        [lo, hi] => {
            let (lo, hi) = (num(lo)?, num(hi)?);
            if lo > hi {
                return Err(usage(format!(
                    "--interval: lower bound {lo} exceeds upper bound {hi}"
                )));
            }
            Ok((lo, hi))
        }
        _ => Err(usage(format!(
            "--interval expects `V` or `LO,HI`, got `{text}`"
        ))),
    }
}

fn equivalence_spec(interval: &Option<String>, standardized: bool) -> Result<TestSpec, CliError> {
    let (lo, hi) = match interval {
        Some(text) => parse_interval(text)?,
        None => (0.0, 0.0),
    };
    Ok(TestSpec::equivalence(lo, hi, standardized))
}

fn curve_prior(spec: &TestSpec) -> Result<CauchyPrior, EngineError> {
    match spec.design {
        Design::Superiority {
            alternative: Alternative::OneSided,
        } => {
            let half = CauchyPrior::positive(spec.prior_scale)?;
            Ok(match spec.direction {
                Direction::High => half,
                Direction::Low => half.mirrored(),
            })
        }
        _ => CauchyPrior::new(spec.prior_scale),
    }
}

fn run_single(
    input: &InputArgs,
    spec: TestSpec,
    common: &CommonArgs,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let options = ReportOptions {
        format: common.format.into(),
        significant_digits: common.digits,
        ..Default::default()
    };
    options.validate()?;
    let spec = spec
        .with_direction(common.direction.into())
        .with_prior_scale(common.prior_scale.unwrap_or(DEFAULT_PRIOR_SCALE));
    let study = input.to_input()?;
    let result = compute_bf(&study, &spec)?;

    if let Some(path) = &common.curves {
        let stats = derive_stats(&study)?;
        let prior = curve_prior(&spec)?;
        let range = default_curve_range(&stats, &prior);
        let curve = emit_density_curves(&stats, &prior, range, options.curve_points)?;
        fs::write(path, curves_to_csv(&curve)).map_err(|e| io_error(path, e))?;
    }

    let text = match options.format {
        Format::Text => render_text_with(&result, &options),
        Format::Json => render_json(&result) + "\n",
    };
    out.write_all(text.as_bytes()).map_err(|e| io_error(Path::new("<stdout>"), e))
}

#[allow(clippy::too_many_arguments)]
fn run_sweep(
    input: &InputArgs,
    design: DesignArg,
    scales: &[f64],
    alternative: Option<AlternativeArg>,
    ni_margin: Option<f64>,
    ni_margin_std: bool,
    interval: &Option<String>,
    interval_std: bool,
    direction: DirectionArg,
    format: FormatArg,
    digits: usize,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let options = ReportOptions {
        format: format.into(),
        significant_digits: digits,
        ..Default::default()
    };
    options.validate()?;
    let stray = |flag: &str, owner: &str| {
        usage(format!("{flag} only applies to --design {owner}"))
    };
    if design != DesignArg::Super && alternative.is_some() {
        return Err(stray("--alternative", "super"));
    }
    if design != DesignArg::Infer && (ni_margin.is_some() || ni_margin_std) {
        return Err(stray("--ni-margin/--ni-margin-std", "infer"));
    }
    if design != DesignArg::Equiv && (interval.is_some() || interval_std) {
        return Err(stray("--interval/--interval-std", "equiv"));
    }
    let spec = match design {
        DesignArg::Super => {
            TestSpec::superiority(alternative.unwrap_or(AlternativeArg::TwoSided).into())
        }
        DesignArg::Infer => {
            let m = ni_margin.ok_or_else(|| usage("--design infer requires --ni-margin"))?;
            TestSpec::non_inferiority(m, ni_margin_std)
        }
        DesignArg::Equiv => equivalence_spec(interval, interval_std)?,
    }
    .with_direction(direction.into());
    spec.validate()?;
    let study = input.to_input()?;
    let sweep = prior_sweep(&study, &spec, scales)?;
    let text = match options.format {
        Format::Text => render_sweep_text(&sweep, &options),
        Format::Json => render_sweep_json(&sweep) + "\n",
    };
    out.write_all(text.as_bytes()).map_err(|e| io_error(Path::new("<stdout>"), e))?;
    // a sweep in which every scale failed is a failed run
    if let Some(err) = sweep
        .entries
        .iter()
        .all(|e| e.outcome.is_err())
        .then(|| sweep.entries[0].outcome.clone().unwrap_err())
    {
        return Err(err.into());
    }
    Ok(())
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Super {
            input,
            alternative,
            common,
        } => run_single(&input, TestSpec::superiority(alternative.into()), &common, out),
        Command::Infer {
            input,
            margin,
            common,
        } => run_single(
            &input,
            TestSpec::non_inferiority(margin.ni_margin, margin.ni_margin_std),
            &common,
            out,
        ),
        Command::Equiv {
            input,
            interval,
            common,
        } => {
            let spec = equivalence_spec(&interval.interval, interval.interval_std)?;
            run_single(&input, spec, &common, out)
        }
        Command::Sweep {
            input,
            design,
            scales,
            alternative,
            ni_margin,
            ni_margin_std,
            interval,
            interval_std,
            direction,
            format,
            digits,
        } => run_sweep(
            &input,
            design,
            &scales,
            alternative,
            ni_margin,
            ni_margin_std,
            &interval,
            interval_std,
            direction,
            format,
            digits,
            out,
        ),
    }
}

/// Parse `argv` (including the program name), run, and return the exit status.
pub fn parse_and_run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_INVALID
                }
            };
        }
    };
    match dispatch(cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
