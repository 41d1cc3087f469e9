//! The `maxrank` command line.
//!
//! Every successful run writes one JSON document
//! `{"header": ..., "config": ..., "result": ...}`; failures write
//! `{"header": ..., "config": ..., "error": ...}`. The header carries the
//! tool version, the seed and a SHA-256 of the canonical config JSON, so the
//! same argv always produces byte-identical output.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use maxrank::binary::{
    exact_decomposition, parse_binary_form, parse_rational, rank, sylvester_decompose, BinaryForm, ExactTerm,
    RankCertificate,
};
use maxrank::bounds::{emit_waring_table, format_waring_table, BoundReport, PropositionInput};
use maxrank::decompose::{two_point_split_complex, two_point_split_real, FitOptions};
use maxrank::dimension::{generic_rank, generic_rank_terracini, segre_generic_rank, waring_generic_rank, RankMethod};
use maxrank::typical::{sample_222_typical, sample_binary_typical, verify_r0_bound};
use maxrank::{AmbientPoint, ArithmeticMode, Decomposition, Error, Field, VarietySpec};

pub const TOOL: &str = "maxrank";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "maxrank", version, about = "Generic ranks, maximum-rank bounds and explicit decompositions")]
struct Cli {
    /// Seed for every randomized step (default 0).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the JSON document here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Waring comparison table of generic ranks and maximum-rank bounds.
    Table(TableArgs),
    /// Generic rank of a variety.
    GenericRank(GenericRankArgs),
    /// Every applicable maximum-rank bound for a variety.
    Bounds(BoundsArgs),
    /// Exact Waring rank of a binary form with its apolar certificate.
    RankBinary(RankBinaryArgs),
    /// Splits a point into at most twice the generic rank of cone points.
    Decompose(DecomposeArgs),
    /// Samples real typical ranks.
    Typical(TypicalArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Table(_) => "table",
            Command::GenericRank(_) => "generic-rank",
            Command::Bounds(_) => "bounds",
            Command::RankBinary(_) => "rank-binary",
            Command::Decompose(_) => "decompose",
            Command::Typical(_) => "typical",
        }
    }

    fn stochastic(&self) -> bool {
        match self {
            Command::Table(_) | Command::RankBinary(_) => false,
            Command::GenericRank(a) => a.method != MethodArg::ClosedForm,
            Command::Bounds(a) => !matches!(a.variety.family, FamilyArg::Veronese),
            Command::Decompose(_) | Command::Typical(_) => true,
        }
    }

    fn mode(&self) -> Option<ArithmeticMode> {
        match self {
            Command::GenericRank(a) => Some(a.mode.into()),
            Command::Bounds(a) => Some(a.mode.into()),
            _ => None,
        }
    }
}

#[derive(Debug, Args, Serialize)]
struct TableArgs {
    /// The Waring table (the only table there is).
    #[arg(long)]
    waring: bool,
    /// Numbers of variables.
    #[arg(long, num_args = 1.., value_delimiter = ',', default_values_t = [3, 4])]
    n: Vec<usize>,
    /// Degrees: `3..8` (inclusive), `3..=8`, `5` or `3,5,7`.
    #[arg(long, default_value = "3..8", value_parser = parse_usize_set)]
    d: UsizeSet,
    /// Print the aligned text table instead of JSON.
    #[arg(long)]
    text: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum FamilyArg {
    Veronese,
    Segre,
    Grassmannian,
    PowerOfForms,
}

#[derive(Debug, Args, Serialize)]
struct VarietyArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Number of variables (veronese, power-of-forms).
    #[arg(long)]
    n: Option<usize>,
    /// Degree (veronese, power-of-forms).
    #[arg(short, long)]
    d: Option<usize>,
    /// Power (power-of-forms) or subspace dimension (grassmannian).
    #[arg(long)]
    k: Option<usize>,
    /// Ambient dimension (grassmannian).
    #[arg(long)]
    m: Option<usize>,
    /// Tensor format, e.g. `3,3,3` (segre).
    #[arg(long, value_delimiter = ',')]
    format: Option<Vec<usize>>,
}

impl VarietyArgs {
    fn spec(&self) -> Result<VarietySpec, Error> {
        let need = |v: Option<usize>, flag: &str| {
            v.ok_or_else(|| Error::Input(format!("--family {:?} needs --{flag}", self.family).to_lowercase()))
        };
        match self.family {
            FamilyArg::Veronese => VarietySpec::veronese(need(self.n, "n")?, need(self.d, "d")?),
            FamilyArg::Segre => match &self.format {
                Some(f) => VarietySpec::segre(f),
                None => Err(Error::Input("--family segre needs --format".into())),
            },
            FamilyArg::Grassmannian => VarietySpec::grassmannian(need(self.k, "k")?, need(self.m, "m")?),
            FamilyArg::PowerOfForms => {
                VarietySpec::power_of_forms(need(self.n, "n")?, need(self.d, "d")?, need(self.k, "k")?)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum MethodArg {
    /// Closed form where one is known, stacked tangent spaces otherwise.
    Auto,
    Terracini,
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ModeArg {
    Exact,
    Float,
}

impl From<ModeArg> for ArithmeticMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => ArithmeticMode::ExactRational,
            ModeArg::Float => ArithmeticMode::FloatSvd,
        }
    }
}

#[derive(Debug, Args, Serialize)]
struct GenericRankArgs {
    #[command(flatten)]
    variety: VarietyArgs,
    #[arg(long, value_enum, default_value = "auto")]
    method: MethodArg,
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    /// Random evaluation points per secant order.
    #[arg(long, default_value_t = maxrank::dimension::DEFAULT_TRIALS)]
    trials: usize,
}

#[derive(Debug, Args, Serialize)]
struct BoundsArgs {
    #[command(flatten)]
    variety: VarietyArgs,
    /// Secant-codimension bound inputs `k,c,s`.
    #[arg(long, value_parser = parse_proposition)]
    proposition: Option<PropositionInput>,
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    #[arg(long, default_value_t = maxrank::dimension::DEFAULT_TRIALS)]
    trials: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum FieldArg {
    Real,
    Complex,
}

impl From<FieldArg> for Field {
    fn from(f: FieldArg) -> Self {
        match f {
            FieldArg::Real => Field::Real,
            FieldArg::Complex => Field::Complex,
        }
    }
}

#[derive(Debug, Args, Serialize)]
struct RankBinaryArgs {
    /// The form as a polynomial in x and y, e.g. `x^3 - 3*x*y^2`.
    #[arg(long, conflicts_with = "coeffs", required_unless_present = "coeffs")]
    form: Option<String>,
    /// Coefficients of x^d, x^(d-1) y, ..., y^d, e.g. `1,0,-3,0` or `1/2,0,1`.
    #[arg(long, allow_hyphen_values = true)]
    coeffs: Option<String>,
    #[arg(long, value_enum, default_value = "complex")]
    field: FieldArg,
    /// Also produce an explicit decomposition of the certified length.
    #[arg(long)]
    decompose: bool,
}

#[derive(Debug, Args, Serialize)]
struct DecomposeArgs {
    /// AmbientPoint JSON file (`-` for stdin).
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "complex")]
    mode: FieldArg,
    /// Rank of the two generic points (default: the generic rank).
    #[arg(long)]
    r0: Option<usize>,
    #[arg(long)]
    max_iterations: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    target_residual: Option<f64>,
}

impl DecomposeArgs {
    fn fit_options(&self, seed: u64) -> FitOptions {
        let d = FitOptions::default();
        FitOptions {
            max_iterations: self.max_iterations.unwrap_or(d.max_iterations),
            restarts: self.restarts.unwrap_or(d.restarts),
            target_relative_residual: self.target_residual.unwrap_or(d.target_relative_residual),
            seed,
            ..d
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum TypicalFamily {
    /// Real binary forms of degree `d`.
    Binary,
    /// Real 2x2x2 tensors.
    Tensor222,
}

#[derive(Debug, Args, Serialize)]
struct TypicalArgs {
    #[arg(long, value_enum)]
    family: TypicalFamily,
    #[arg(short, long)]
    d: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// Frequency above which a rank counts as typical.
    #[arg(long, default_value_t = maxrank::typical::DEFAULT_THRESHOLD)]
    threshold: f64,
    /// Instead of a histogram, real-split `samples` random points (plus
    /// adversarial witnesses) into at most `2 r0` terms.
    #[arg(long)]
    verify_r0: bool,
    /// `r0` for `--verify-r0` (default: the complex generic rank).
    #[arg(long, requires = "verify_r0")]
    r0: Option<usize>,
}

/// A set of nonnegative integers given as a range or a list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct UsizeSet(pub Vec<usize>);

/// `a..b` and `a..=b` are both inclusive; otherwise a comma list.
pub fn parse_usize_set(s: &str) -> Result<UsizeSet, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("bad integer {t:?}: {e}"));
    if let Some((a, b)) = s.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let (a, b) = (num(a)?, num(b)?);
        if a > b {
            return Err(format!("empty range {s:?}"));
        }
        if b - a > 1024 {
            return Err(format!("range {s:?} is too long"));
        }
        return Ok(UsizeSet((a..=b).collect()));
    }
    let v = s.split(',').map(num).collect::<Result<Vec<_>, _>>()?;
    Ok(UsizeSet(v))
}

fn parse_proposition(s: &str) -> Result<PropositionInput, String> {
    let v: Vec<u64> = s
        .split(',')
        .map(|t| t.trim().parse::<u64>().map_err(|e| format!("bad integer {t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match v.as_slice() {
        &[k, c, s] => Ok(PropositionInput { k, c, s }),
        _ => Err("expected three integers k,c,s".into()),
    }
}

/// Everything that determines a run's output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    /// The subcommand's arguments, keys sorted.
    pub args: serde_json::Value,
    pub seed: u64,
    pub seed_defaulted: bool,
    pub mode: Option<ArithmeticMode>,
    pub out: Option<PathBuf>,
    pub fit: Option<FitOptions>,
}

impl RunConfig {
    /// SHA-256 of the canonical JSON, lowercase hex.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        Sha256::digest(canonical.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub config_hash: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
}

/// The document every run emits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Output<T> {
    pub header: Header,
    pub config: RunConfig,
    #[serde(default = "Option::default", skip_serializing_if = "Option::is_none")]
    pub result: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
}

/// Result of `rank-binary`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankBinaryOutput {
    pub form: BinaryForm,
    pub display: String,
    pub certificate: RankCertificate,
    /// Rational terms `c * (alpha x + beta y)^d` when every root is rational.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_terms: Option<Vec<ExactTerm>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<Decomposition>,
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Input(_) => "input",
        Error::DimensionMismatch { .. } => "dimension_mismatch",
        Error::Degenerate(_) => "degenerate",
        Error::Unsupported(_) => "unsupported",
        Error::Parse { .. } => "parse",
        Error::Overflow(_) => "overflow",
        Error::FitFailed { .. } => "fit_failed",
        Error::SplitFailed { .. } => "split_failed",
        Error::RootFinding(_) => "root_finding",
    }
}

/// Usage and input errors exit 2; failed computations exit 1.
fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Input(_) | Error::DimensionMismatch { .. } | Error::Unsupported(_) | Error::Parse { .. } => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

enum Rendered {
    Json(serde_json::Value),
    /// JSON plus a presentation-only text rendering for stdout.
    WithText(serde_json::Value, String),
}

fn json<T: Serialize>(v: &T) -> Result<Rendered, Error> {
    serde_json::to_value(v).map(Rendered::Json).map_err(|e| Error::Input(format!("cannot serialize result: {e}")))
}

fn run_table(a: &TableArgs) -> Result<Rendered, Error> {
    if !a.waring {
        return Err(Error::Input("table needs --waring".into()));
    }
    let rows = emit_waring_table(&a.n, &a.d.0)?;
    let v = serde_json::to_value(&rows).map_err(|e| Error::Input(e.to_string()))?;
    Ok(if a.text { Rendered::WithText(v, format_waring_table(&rows)) } else { Rendered::Json(v) })
}

fn run_generic_rank(a: &GenericRankArgs, seed: u64) -> Result<Rendered, Error> {
    let spec = a.variety.spec()?;
    let mode = a.mode.into();
    let res = match a.method {
        MethodArg::Auto => generic_rank(&spec, a.trials, mode, seed)?,
        MethodArg::Terracini => generic_rank_terracini(&spec, a.trials, mode, seed)?,
        MethodArg::ClosedForm => {
            let r = match &spec {
                VarietySpec::Veronese { n, d } => waring_generic_rank(*n, *d)?,
                VarietySpec::Segre { formats } => segre_generic_rank(formats, a.trials, mode, seed)?,
                _ => return Err(Error::Unsupported(format!("no closed form for {spec}"))),
            };
            if r.method != RankMethod::ClosedForm {
                return Err(Error::Unsupported(format!("no closed form for {spec}")));
            }
            r
        }
    };
    json(&res)
}

fn run_bounds(a: &BoundsArgs, seed: u64) -> Result<Rendered, Error> {
    let spec = a.variety.spec()?;
    let report = match spec {
        VarietySpec::Veronese { n, d } => BoundReport::for_waring(n, d, a.proposition)?,
        _ => {
            let g = generic_rank(&spec, a.trials, a.mode.into(), seed)?;
            BoundReport::for_spec(&spec, &g, a.proposition)?
        }
    };
    json(&report)
}

fn run_rank_binary(a: &RankBinaryArgs) -> Result<Rendered, Error> {
    let f = match (&a.form, &a.coeffs) {
        (Some(s), _) => parse_binary_form(s)?,
        (None, Some(c)) => {
            let coeffs = c.split(',').map(|t| parse_rational(t.trim())).collect::<Result<Vec<_>, _>>()?;
            BinaryForm::new(coeffs)?
        }
        (None, None) => return Err(Error::Input("give --form or --coeffs".into())),
    };
    if f.is_zero() {
        return Err(Error::Input("the zero form has no rank certificate".into()));
    }
    let cert = rank(&f, a.field.into())?;
    let (exact_terms, decomposition) = if a.decompose {
        (exact_decomposition(&cert, &f)?, Some(sylvester_decompose(&cert, &f)?))
    } else {
        (None, None)
    };
    json(&RankBinaryOutput { display: f.to_string(), form: f, certificate: cert, exact_terms, decomposition })
}

fn read_input(path: &PathBuf) -> Result<String, Error> {
    let mut s = String::new();
    if path.as_os_str() == "-" {
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| Error::Input(format!("cannot read stdin: {e}")))?;
    } else {
        s = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    }
    Ok(s)
}

fn run_decompose(a: &DecomposeArgs, opts: &FitOptions) -> Result<Rendered, Error> {
    opts.validate()?;
    let text = read_input(&a.input)?;
    let point: AmbientPoint =
        serde_json::from_str(&text).map_err(|e| Error::Input(format!("invalid point JSON: {e}")))?;
    let r = match a.r0 {
        Some(0) => return Err(Error::Input("--r0 must be positive".into())),
        Some(r) => r,
        None => {
            generic_rank(point.spec(), maxrank::dimension::DEFAULT_TRIALS, ArithmeticMode::ExactRational, opts.seed)?
                .r_gen
        }
    };
    let report = match a.mode {
        FieldArg::Complex => two_point_split_complex(&point, r, opts)?,
        FieldArg::Real => two_point_split_real(&point, r, opts)?,
    };
    json(&report)
}

fn run_typical(a: &TypicalArgs, seed: u64) -> Result<Rendered, Error> {
    if !(a.threshold.is_finite() && a.threshold >= 0.0 && a.threshold < 1.0) {
        return Err(Error::Input("--threshold must lie in [0, 1)".into()));
    }
    let spec = match a.family {
        TypicalFamily::Binary => {
            let d = a.d.ok_or_else(|| Error::Input("--family binary needs -d".into()))?;
            VarietySpec::veronese(2, d)?
        }
        TypicalFamily::Tensor222 => VarietySpec::segre(&[2, 2, 2])?,
    };
    if a.verify_r0 {
        let r0 = match a.r0 {
            Some(r) => r,
            None => generic_rank(&spec, 1, ArithmeticMode::ExactRational, seed)?.r_gen,
        };
        let opts = FitOptions { seed, ..FitOptions::default() };
        return json(&verify_r0_bound(&spec, r0, a.samples, seed, &opts)?);
    }
    let report = match a.family {
        TypicalFamily::Binary => sample_binary_typical(spec.ambient_affine_dim() - 1, a.samples, seed)?,
        TypicalFamily::Tensor222 => sample_222_typical(a.samples, seed)?,
    };
    json(&report.with_threshold(a.threshold))
}

fn dispatch(cmd: &Command, seed: u64, fit: Option<&FitOptions>) -> Result<Rendered, Error> {
    match cmd {
        Command::Table(a) => run_table(a),
        Command::GenericRank(a) => run_generic_rank(a, seed),
        Command::Bounds(a) => run_bounds(a, seed),
        Command::RankBinary(a) => run_rank_binary(a),
        Command::Decompose(a) => run_decompose(a, fit.expect("decompose carries fit options")),
        Command::Typical(a) => run_typical(a, seed),
    }
}

/// Runs the tool on `args` (including the program name) and returns the
/// exit code. Nothing touches the process streams except through `stdout`
/// and `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let seed = cli.seed.unwrap_or(0);
    if cli.seed.is_none() && cli.command.stochastic() {
        let _ = writeln!(
            stderr,
            "WARNING: no --seed given; using the default seed 0. Pass --seed to make the choice explicit."
        );
    }
    let fit = match &cli.command {
        Command::Decompose(a) => Some(a.fit_options(seed)),
        _ => None,
    };
    let config = RunConfig {
        command: cli.command.name().to_string(),
        args: serde_json::to_value(&cli.command)
            .ok()
            .and_then(|v| v.as_object().and_then(|o| o.values().next().cloned()))
            .unwrap_or(serde_json::Value::Null),
        seed,
        seed_defaulted: cli.seed.is_none(),
        mode: cli.command.mode(),
        out: cli.out.clone(),
        fit: fit.clone(),
    };
    let header = Header { tool: TOOL.to_string(), version: VERSION.to_string(), seed, config_hash: config.hash() };
    let (doc, text, code) = match dispatch(&cli.command, seed, fit.as_ref()) {
        Ok(r) => {
            let (value, text) = match r {
                Rendered::Json(v) => (v, None),
                Rendered::WithText(v, t) => (v, Some(t)),
            };
            let doc = Output { header, config, result: Some(value), error: None };
            (doc, text, EXIT_OK)
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            let info = ErrorInfo { kind: error_kind(&e).to_string(), message: e.to_string() };
            let doc: Output<serde_json::Value> = Output { header, config, result: None, error: Some(info) };
            (doc, None, exit_code(&e))
        }
    };
    let mut body = serde_json::to_string_pretty(&doc).expect("output serializes");
    body.push('\n');
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &body) {
                let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                return EXIT_USAGE;
            }
            if let Some(t) = text {
                let _ = write!(stdout, "{t}");
            }
        }
        None => {
            let _ = match text {
                Some(t) => write!(stdout, "{t}"),
                None => write!(stdout, "{body}"),
            };
        }
    }
    code
}
