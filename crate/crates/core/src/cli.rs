//! The `multiscreen` command-line tool.
//!
//! Every subcommand prints an ordered report: `key=value` lines by default,
//! or one JSON object with `--json`. Output depends only on the arguments and
//! input files, so repeated invocations are byte-identical.
//!
//! Exit codes: 0 success, 1 usage or I/O, 2 file parse, 3 validation,
//! 4 dimension, 5 numeric (including failed verifications).

#![allow(clippy::result_large_err)]

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{Map, Value};

use crate::entanglement::{self, Bipartition};
use crate::error::{Error, ErrorCategory};
use crate::format::{self, FormatError};
use crate::isa::{sample_outcomes, validate_isa, ExperimentalArrangement, SAMPLER_ALGORITHM};
use crate::random;
use crate::tensor::{MultiIndex, ScreenConfiguration};
use crate::transforms::{self, BasisTransformation};
use crate::viz::{self, RenderOptions};

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_DIMENSION: i32 = 4;
pub const EXIT_NUMERIC: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "multiscreen", version, about = "Multi-screen experimental arrangements")]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Emit the report as a JSON object.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the arrangement conditions for an .ea file.
    Validate(Input),
    /// List the potentia of every power.
    Potentia(Input),
    /// Apply a basis transformation.
    ChangeBasis(ChangeBasisArgs),
    /// Regroup the detectors into a different factorization.
    Refactor(RefactorArgs),
    /// Trace out one or more screens.
    RemoveScreen(RemoveScreenArgs),
    /// Append an ancilla screen in a pure state.
    Extend(ExtendArgs),
    /// Schmidt decomposition of a pure state across a cut.
    Schmidt(SchmidtArgs),
    /// Full separability and Schmidt-rank profile of a pure state.
    Separability(StateInput),
    /// Compare an arrangement with the product of its marginals across a cut.
    ProductTest(ProductTestArgs),
    /// Check that spectrum and valuations survive a change of basis.
    VerifyBasisInvariance(TransformArgs),
    /// Extend-then-remove round trips with random ancillas.
    VerifyFactorizationInvariance(FactorizationArgs),
    /// Draw outcomes according to the potentia.
    Sample(SampleArgs),
    /// Draw the arrangement as SVG.
    Render(RenderArgs),
}

#[derive(Debug, Args)]
struct Input {
    /// Arrangement file (.ea).
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
}

#[derive(Debug, Args)]
struct StateInput {
    /// State file (.qs).
    #[arg(long, value_name = "FILE")]
    state: PathBuf,
}

#[derive(Debug, Args)]
struct Output {
    /// Where to write the resulting arrangement.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct TransformSource {
    /// Transformation file (.bt).
    #[arg(long, value_name = "FILE")]
    transform: Option<PathBuf>,
    /// Haar-random unitary drawn from --seed.
    #[arg(long)]
    random_unitary: bool,
    /// Identity matrix, optionally into --target-shape.
    #[arg(long)]
    identity: bool,
}

#[derive(Debug, Args)]
struct TransformArgs {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    source: TransformSource,
    /// Target factorization, e.g. 4,2 (defaults to the source factorization).
    #[arg(long, value_delimiter = ',', value_name = "COUNTS")]
    target_shape: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
struct ChangeBasisArgs {
    #[command(flatten)]
    transform: TransformArgs,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct RefactorArgs {
    #[command(flatten)]
    input: Input,
    /// New factorization, e.g. 4,4.
    #[arg(long, value_delimiter = ',', value_name = "COUNTS", required = true)]
    shape: Vec<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct RemoveScreenArgs {
    #[command(flatten)]
    input: Input,
    /// 1-based screen position; repeat or separate with commas to remove several.
    #[arg(long, value_delimiter = ',', value_name = "POSITION", required = true)]
    screen: Vec<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct ExtendArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_name = "D")]
    ancilla_dim: usize,
    /// 1-based detector the ancilla sits on (default 1).
    #[arg(long, value_name = "K", conflicts_with = "ancilla_state")]
    ancilla_index: Option<usize>,
    /// Ancilla state file (.qs) with a single screen.
    #[arg(long, value_name = "FILE")]
    ancilla_state: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct SchmidtArgs {
    #[command(flatten)]
    state: StateInput,
    /// Screens on the left of the cut, e.g. 1,3.
    #[arg(long, value_delimiter = ',', value_name = "SCREENS", required = true)]
    cut: Vec<usize>,
}

#[derive(Debug, Args)]
struct ProductTestArgs {
    #[command(flatten)]
    input: Input,
    /// Screens on the left of the cut, e.g. 1,2.
    #[arg(long, value_delimiter = ',', value_name = "SCREENS", required = true)]
    cut: Vec<usize>,
}

#[derive(Debug, Args)]
struct FactorizationArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_name = "D", default_value_t = 2)]
    ancilla_dim: usize,
    #[arg(long, value_name = "N", default_value_t = 10)]
    trials: usize,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_name = "N", default_value_t = 1000)]
    count: u64,
}

#[derive(Debug, Args)]
struct RenderArgs {
    #[command(flatten)]
    input: Input,
    /// SVG destination; the document goes to standard output when omitted.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, value_name = "K")]
    max_powers: Option<usize>,
    #[arg(long, value_name = "P", default_value_t = 1e-6)]
    min_potentia: f64,
    #[arg(long, default_value_t = 640.0)]
    width: f64,
    #[arg(long, default_value_t = 400.0)]
    height: f64,
    /// Write the potentia next to each glyph.
    #[arg(long)]
    labels: bool,
}

#[derive(Debug)]
enum CliError {
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    Format {
        path: PathBuf,
        source: FormatError,
    },
    Model(Error),
    /// A verifier ran but its check did not hold.
    Failed(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Model(e)
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => EXIT_USAGE,
            CliError::Format { source, .. } => match source.model_category() {
                Some(c) => category_code(c),
                None => EXIT_PARSE,
            },
            CliError::Model(e) => category_code(e.category()),
            CliError::Failed(_) => EXIT_NUMERIC,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Format { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Model(e) => write!(f, "{e}"),
            CliError::Failed(what) => write!(f, "{what}"),
        }
    }
}

fn category_code(c: ErrorCategory) -> i32 {
    match c {
        ErrorCategory::Validation => EXIT_VALIDATION,
        ErrorCategory::Dimension => EXIT_DIMENSION,
        ErrorCategory::Numeric => EXIT_NUMERIC,
    }
}

/// Ordered key/value report.
#[derive(Default)]
struct Report(Vec<(String, Value)>);

impl Report {
    fn new(command: &str) -> Self {
        let mut r = Self::default();
        r.put("command", command);
        r
    }

    fn put(&mut self, key: impl Into<String>, value: impl Into<Value>) {
        self.0.push((key.into(), value.into()));
    }

    fn shape(&mut self, key: &str, shape: &ScreenConfiguration) {
        self.put(key, shape.to_string());
    }

    fn render(&self, json: bool) -> String {
        if json {
            let map: Map<String, Value> = self.0.iter().cloned().collect();
            let mut s = serde_json::to_string_pretty(&Value::Object(map)).expect("report serializes");
            s.push('\n');
            s
        } else {
            self.0
                .iter()
                .map(|(k, v)| match v {
                    Value::String(s) => format!("{k}={s}\n"),
                    other => format!("{k}={other}\n"),
                })
                .collect()
        }
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let json = cli.json;
    let mut body = Vec::new();
    let outcome = execute(cli, &mut body);
    let _ = stdout.write_all(&body);
    match outcome {
        Ok(report) => {
            if let Some(report) = report {
                let _ = stdout.write_all(report.render(json).as_bytes());
            }
            0
        }
        Err((report, e)) => {
            if let Some(report) = report {
                let _ = stdout.write_all(report.render(json).as_bytes());
            }
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

type Outcome = Result<Option<Report>, (Option<Report>, CliError)>;

fn fail(e: impl Into<CliError>) -> (Option<Report>, CliError) {
    (None, e.into())
}

fn execute(cli: Cli, raw_out: &mut Vec<u8>) -> Outcome {
    let seed = cli.seed;
    match cli.command {
        Command::Validate(a) => validate(&a.input),
        Command::Potentia(a) => {
            let ea = load_arrangement(&a.input).map_err(fail)?;
            let mut r = Report::new("potentia");
            r.shape("factorization", ea.shape());
            r.put("degree", ea.degree_of_complexity());
            for (index, p) in ea.potentia_table() {
                r.put(format!("potentia{index}"), p);
            }
            Ok(Some(r))
        }
        Command::ChangeBasis(a) => {
            let ea = load_arrangement(&a.transform.input.input).map_err(fail)?;
            let bt = transformation(&a.transform, ea.shape(), seed).map_err(fail)?;
            let out = transforms::change_basis(&ea, &bt).map_err(fail)?;
            let mut r = Report::new("change-basis");
            r.shape("source", bt.source_shape());
            r.shape("target", bt.target_shape());
            r.put("unitarity_deviation", bt.lambda().unitarity_deviation());
            summarize(&mut r, &out);
            write_arrangement(&mut r, &out, a.output.out.as_deref()).map_err(fail)?;
            Ok(Some(r))
        }
        Command::Refactor(a) => {
            let ea = load_arrangement(&a.input.input).map_err(fail)?;
            let shape = ScreenConfiguration::new(a.shape).map_err(fail)?;
            let out = transforms::refactorize(&ea, shape).map_err(fail)?;
            let mut r = Report::new("refactor");
            r.shape("source", ea.shape());
            summarize(&mut r, &out);
            write_arrangement(&mut r, &out, a.output.out.as_deref()).map_err(fail)?;
            Ok(Some(r))
        }
        Command::RemoveScreen(a) => {
            let ea = load_arrangement(&a.input.input).map_err(fail)?;
            let out = transforms::remove_screens(&ea, &a.screen).map_err(fail)?;
            let mut r = Report::new("remove-screen");
            r.shape("source", ea.shape());
            let removed: Vec<String> = a.screen.iter().map(ToString::to_string).collect();
            r.put("removed", removed.join(","));
            summarize(&mut r, &out);
            write_arrangement(&mut r, &out, a.output.out.as_deref()).map_err(fail)?;
            Ok(Some(r))
        }
        Command::Extend(a) => {
            let ea = load_arrangement(&a.input.input).map_err(fail)?;
            let state = ancilla_state(&a).map_err(fail)?;
            let out = transforms::extend_arrangement(&ea, a.ancilla_dim, state.as_deref()).map_err(fail)?;
            let mut r = Report::new("extend");
            r.shape("source", ea.shape());
            summarize(&mut r, &out);
            write_arrangement(&mut r, &out, a.output.out.as_deref()).map_err(fail)?;
            Ok(Some(r))
        }
        Command::Schmidt(a) => {
            let state = load_state(&a.state.state).map_err(fail)?;
            let cut = Bipartition::new(&a.cut, state.shape.screens()).map_err(fail)?;
            let s = entanglement::schmidt_decompose(&state.amplitudes, &state.shape, &cut).map_err(fail)?;
            let mut r = Report::new("schmidt");
            r.shape("factorization", &state.shape);
            r.put("cut", cut.to_string());
            r.put("rank", s.rank);
            for (i, c) in s.coefficients.iter().enumerate() {
                r.put(format!("coefficient.{}", i + 1), *c);
            }
            Ok(Some(r))
        }
        Command::Separability(a) => {
            let state = load_state(&a.state).map_err(fail)?;
            let sep = entanglement::is_fully_separable_pure(&state.amplitudes, &state.shape).map_err(fail)?;
            let mut r = Report::new("separability");
            r.shape("factorization", &state.shape);
            r.put("fully_separable", sep.fully_separable);
            for (cut, rank) in entanglement::schmidt_rank_profile(&state.amplitudes, &state.shape).map_err(fail)? {
                r.put(format!("rank{cut}"), rank);
            }
            Ok(Some(r))
        }
        Command::ProductTest(a) => {
            let ea = load_arrangement(&a.input.input).map_err(fail)?;
            let cut = Bipartition::new(&a.cut, ea.shape().screens()).map_err(fail)?;
            let t = entanglement::is_product_across(&ea, &cut).map_err(fail)?;
            let mut r = Report::new("product-test");
            r.shape("factorization", ea.shape());
            r.put("cut", cut.to_string());
            r.put("is_product", t.is_product);
            r.put("residual", t.residual);
            Ok(Some(r))
        }
        Command::VerifyBasisInvariance(a) => {
            let ea = load_arrangement(&a.input.input).map_err(fail)?;
            let bt = transformation(&a, ea.shape(), seed).map_err(fail)?;
            let rep = transforms::verify_basis_invariance(&ea, &bt).map_err(fail)?;
            let mut r = Report::new("verify-basis-invariance");
            r.shape("source", bt.source_shape());
            r.shape("target", bt.target_shape());
            r.put("seed", seed);
            r.put("probes", rep.probes);
            r.put("spectrum_residual", rep.spectrum_residual);
            r.put("valuation_residual", rep.valuation_residual);
            r.put("passed", rep.passed);
            if rep.passed {
                Ok(Some(r))
            } else {
                Err((
                    Some(r),
                    CliError::Failed("basis invariance residual above tolerance".into()),
                ))
            }
        }
        Command::VerifyFactorizationInvariance(a) => {
            let ea = load_arrangement(&a.input.input).map_err(fail)?;
            let rep =
                transforms::verify_factorization_invariance_seeded(&ea, a.ancilla_dim, a.trials, seed).map_err(fail)?;
            let mut r = Report::new("verify-factorization-invariance");
            r.shape("factorization", ea.shape());
            r.put("seed", seed);
            r.put("ancilla_dim", rep.ancilla_dim);
            r.put("trials", rep.trials);
            r.put("max_roundtrip_residual", rep.max_roundtrip_residual);
            r.put("max_marginal_residual", rep.max_marginal_residual);
            r.put("passed", rep.passed);
            if rep.passed {
                Ok(Some(r))
            } else {
                Err((
                    Some(r),
                    CliError::Failed("factorization invariance residual above tolerance".into()),
                ))
            }
        }
        Command::Sample(a) => {
            let ea = load_arrangement(&a.input.input).map_err(fail)?;
            let rep = sample_outcomes(&ea, a.count, seed);
            let mut r = Report::new("sample");
            r.shape("factorization", ea.shape());
            r.put("algorithm", SAMPLER_ALGORITHM);
            r.put("seed", seed);
            r.put("draws", rep.draws);
            for (index, count) in &rep.counts {
                r.put(format!("count{index}"), *count);
            }
            Ok(Some(r))
        }
        Command::Render(a) => {
            let ea = load_arrangement(&a.input.input).map_err(fail)?;
            let options = RenderOptions {
                max_powers: a.max_powers,
                min_potentia: a.min_potentia,
                width: a.width,
                height: a.height,
                show_labels: a.labels,
            };
            let svg = viz::render_arrangement_svg(&ea, &options).map_err(fail)?;
            match a.out {
                Some(path) => {
                    write_file(&path, &svg).map_err(fail)?;
                    let mut r = Report::new("render");
                    r.shape("factorization", ea.shape());
                    r.put("glyphs", viz::depicted_powers(&ea, &options).len());
                    r.put("written", path.display().to_string());
                    Ok(Some(r))
                }
                None => {
                    raw_out.extend_from_slice(svg.as_bytes());
                    Ok(None)
                }
            }
        }
    }
}

fn validate(path: &Path) -> Outcome {
    let text = read_file(path).map_err(fail)?;
    let (tensor, _) = format::parse_tensor(&text).map_err(|source| {
        fail(CliError::Format {
            path: path.to_path_buf(),
            source,
        })
    })?;
    let report = validate_isa(&tensor);
    let mut r = Report::new("validate");
    r.shape("factorization", tensor.shape());
    r.put("dimension", tensor.dimension());
    for c in &report.checks {
        r.put(format!("check.{}", c.name), if c.passed { "pass" } else { "fail" });
        r.put(format!("value.{}", c.name), c.value);
    }
    r.put("valid", report.is_valid());
    if !report.is_valid() {
        return Err((Some(r), Error::InvalidArrangement(report).into()));
    }
    let ea = ExperimentalArrangement::new(tensor).map_err(fail)?;
    let purity = ea.purity_abstract();
    r.put("purity", purity.value);
    r.put("pure", purity.is_pure);
    Ok(Some(r))
}

fn summarize(r: &mut Report, ea: &ExperimentalArrangement) {
    r.shape("factorization", ea.shape());
    r.put("degree", ea.degree_of_complexity());
    let nonzero = ea
        .alpha()
        .matrix()
        .as_slice()
        .iter()
        .filter(|z| **z != Complex64::new(0.0, 0.0))
        .count();
    r.put("nonzero_entries", nonzero);
}

fn transformation(a: &TransformArgs, source: &ScreenConfiguration, seed: u64) -> Result<BasisTransformation, CliError> {
    let target = match &a.target_shape {
        Some(counts) => ScreenConfiguration::new(counts.clone())?,
        None => source.clone(),
    };
    if let Some(path) = &a.source.transform {
        let text = read_file(path)?;
        let bt = format::parse_transformation(&text).map_err(|source| CliError::Format {
            path: path.clone(),
            source,
        })?;
        if a.target_shape.is_some() && bt.target_shape() != &target {
            return Err(Error::ShapeMismatch {
                expected: target.to_string(),
                found: bt.target_shape().to_string(),
            }
            .into());
        }
        return Ok(bt);
    }
    if a.source.random_unitary {
        let u = random::haar_unitary(source.dimension(), &mut random::seeded(seed));
        return Ok(BasisTransformation::new(source.clone(), target, u)?);
    }
    Ok(BasisTransformation::identity(source.clone(), target)?)
}

fn ancilla_state(a: &ExtendArgs) -> Result<Option<Vec<Complex64>>, CliError> {
    if let Some(path) = &a.ancilla_state {
        let state = load_state(path)?;
        if state.shape.screens() != 1 {
            return Err(
                Error::InvalidShape(format!("ancilla state must have one screen, found {}", state.shape)).into(),
            );
        }
        return Ok(Some(state.amplitudes));
    }
    let k = a.ancilla_index.unwrap_or(1);
    if k == 0 || k > a.ancilla_dim {
        return Err(Error::IndexOutOfRange {
            index: MultiIndex::new(vec![k]).to_string(),
            shape: format!("[{}]", a.ancilla_dim),
        }
        .into());
    }
    let mut v = vec![Complex64::new(0.0, 0.0); a.ancilla_dim];
    v[k - 1] = Complex64::new(1.0, 0.0);
    Ok(Some(v))
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load_arrangement(path: &Path) -> Result<ExperimentalArrangement, CliError> {
    let text = read_file(path)?;
    format::parse_arrangement(&text).map_err(|source| CliError::Format {
        path: path.to_path_buf(),
        source,
    })
}

fn load_state(path: &Path) -> Result<format::StateFile, CliError> {
    let text = read_file(path)?;
    format::parse_state(&text).map_err(|source| CliError::Format {
        path: path.to_path_buf(),
        source,
    })
}

fn write_arrangement(r: &mut Report, ea: &ExperimentalArrangement, out: Option<&Path>) -> Result<(), CliError> {
    if let Some(path) = out {
        write_file(path, &format::serialize_arrangement(ea))?;
        r.put("written", path.display().to_string());
    }
    Ok(())
}
