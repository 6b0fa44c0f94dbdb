//! `homaloid`: polar maps, moving parts, homaloidality verdicts and
//! certificates from the command line.
//!
//! Exit codes: 0 success, 1 other failure, 2 parse error, 3 inconsistent
//! verdicts, 4 resource bound exceeded.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use homaloid_core::oracle::{projective_size, OracleConfig};
use homaloid_core::parser::{
    parse_arrangement_with, parse_polynomial_with, ParseError, ParseErrorKind, ParseOptions,
    ReportDocument, ScanMode,
};
use homaloid_core::polar::{moving_part, polar_system, PolarError};
use homaloid_core::poly::{Field, LinearFormProduct, Polynomial};
use homaloid_core::theorems::{
    census, certify, full_verdict, polynomial_verdict, CensusOptions, TheoremError, VerdictParams,
};

/// `println!` that ignores a closed stdout.
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

#[derive(Parser)]
#[command(
    name = "homaloid",
    version,
    about = "Polar maps and homaloidal polynomials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the partial derivatives.
    Polar(InputArgs),
    /// Print the base divisor, moving part and reduced polynomial.
    Moving(InputArgs),
    /// Decide whether the polar map is birational and emit a JSON report.
    Homaloidal(RunArgs),
    /// Build the inductive restriction certificate of a product of linear forms.
    Certify(RunArgs),
    /// Census of small arrangements comparing the rank criterion with the oracle.
    Classify(ClassifyArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Polynomial in x0, x1, ...
    input: Option<String>,
    /// Read the input from a file instead.
    #[arg(long, conflicts_with = "input")]
    file: Option<PathBuf>,
    /// Projective dimension n; the ring is Q[x0..xn]. Inferred when omitted.
    #[arg(long)]
    dim: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sample,
}

#[derive(Args)]
struct OracleArgs {
    /// Prime for the finite-field oracle; repeat for a stability check.
    #[arg(short = 'p', long = "prime")]
    primes: Vec<u64>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Sampled domain points in sample mode.
    #[arg(long, default_value_t = 64)]
    targets: usize,
    /// Seed for sample mode.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: HOMALOID_WORKERS or all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Record wall-clock milliseconds in the report (makes output nondeterministic).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    oracle: OracleArgs,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Projective dimension, 1 to 3
    #[arg(long)]
    n: usize,
    /// Arrangements have r+1 distinct forms.
    #[arg(long)]
    r: usize,
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        default_value = "-1,0,1"
    )]
    coeffs: Vec<i64>,
    /// Run the oracle on at most this many arrangements (seeded choice).
    #[arg(long)]
    oracle_limit: Option<usize>,
    #[command(flatten)]
    oracle: OracleArgs,
}

enum Failure {
    Parse(String),
    Inconsistent(String),
    Resource(String),
    Other(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Other(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Inconsistent(_) => 3,
            Failure::Resource(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Parse(m)
            | Failure::Inconsistent(m)
            | Failure::Resource(m)
            | Failure::Other(m) => m,
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Parse(format!("parse error at {e}"))
    }
}

impl From<PolarError> for Failure {
    fn from(e: PolarError) -> Self {
        Failure::Other(e.to_string())
    }
}

impl From<TheoremError> for Failure {
    fn from(e: TheoremError) -> Self {
        if e.is_inconsistency() {
            Failure::Inconsistent(e.to_string())
        } else if e.is_resource_bound() {
            Failure::Resource(e.to_string())
        } else {
            Failure::Other(e.to_string())
        }
    }
}

fn read_input(args: &InputArgs) -> Result<String, Failure> {
    match (&args.input, &args.file) {
        (Some(text), _) => Ok(text.clone()),
        (None, Some(path)) => fs::read_to_string(path)
            .map(|s| s.trim().to_string())
            .map_err(|e| Failure::Other(format!("{}: {e}", path.display()))),
        (None, None) => Err(Failure::Other(
            "no input: give an expression or --file".into(),
        )),
    }
}

fn parse_options(args: &InputArgs) -> ParseOptions {
    ParseOptions {
        field: Field::Rational,
        n_vars: args.dim.map(|d| d + 1),
        require_homogeneous: true,
    }
}

fn parse_homogeneous(args: &InputArgs) -> Result<(String, Polynomial), Failure> {
    let text = read_input(args)?;
    let f = parse_polynomial_with(&text, &parse_options(args))?;
    Ok((text, f))
}

/// `Ok(None)` when the input parses as a polynomial but is not a product of
/// linear forms.
fn parse_product(text: &str, args: &InputArgs) -> Result<Option<LinearFormProduct>, Failure> {
    match parse_arrangement_with(text, args.dim.map(|d| d + 1)) {
        Ok(a) => Ok(Some(a)),
        Err(e)
            if matches!(
                e.kind,
                ParseErrorKind::NonLinearFactor
                    | ParseErrorKind::ZeroFactor
                    | ParseErrorKind::EmptyArrangement
            ) =>
        {
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

fn verdict_params(args: &OracleArgs, n: usize) -> Result<VerdictParams, Failure> {
    let mut config = OracleConfig::from_env();
    if let Some(w) = args.workers {
        if w == 0 {
            return Err(Failure::Other("--workers must be positive".into()));
        }
        config.workers = Some(w);
    }
    let mode = args.mode.map(|m| match m {
        ModeArg::Exhaustive => ScanMode::Exhaustive,
        ModeArg::Sample => ScanMode::Sample,
    });
    let params = VerdictParams {
        primes: args.primes.clone(),
        mode,
        targets: args.targets,
        seed: args.seed.unwrap_or(0),
        config,
        timing: args.timing,
    };
    if params.mode_for(n) == ScanMode::Sample && args.seed.is_none() {
        return Err(Failure::Other("sample mode needs --seed".into()));
    }
    if params.mode_for(n) == ScanMode::Exhaustive {
        for p in params.primes_for(n) {
            let size = projective_size(n, p).unwrap_or(u64::MAX);
            if size > params.config.max_exhaustive_domain {
                return Err(Failure::Resource(format!(
                    "P^{n}(F_{p}) has {size} points, above the exhaustive bound {}; use --mode sample or a smaller prime",
                    params.config.max_exhaustive_domain
                )));
            }
        }
    }
    Ok(params)
}

fn emit(doc: &ReportDocument, json: &Option<PathBuf>) -> Result<(), Failure> {
    let text = doc.to_json();
    match json {
        Some(path) => {
            fs::write(path, format!("{text}\n"))
                .map_err(|e| Failure::Other(format!("{}: {e}", path.display())))?;
            say!(
                "homaloidal={} degree={} input={}",
                doc.homaloidal,
                doc.degree.map_or("-".into(), |d| d.to_string()),
                doc.input
            );
        }
        None => say!("{text}"),
    }
    Ok(())
}

fn cmd_polar(args: &InputArgs) -> Result<(), Failure> {
    let (_, f) = parse_homogeneous(args)?;
    for (i, c) in polar_system(&f)?.components().iter().enumerate() {
        say!("d/dx{i}: {c}");
    }
    Ok(())
}

fn cmd_moving(args: &InputArgs) -> Result<(), Failure> {
    let (_, f) = parse_homogeneous(args)?;
    if f.homogeneous_degree().unwrap_or(0) < 2 {
        return Err(Failure::Other(
            "degree < 2: the polar map is constant and has no moving part".into(),
        ));
    }
    let d = moving_part(&f)?;
    say!("base divisor: {}", d.base_divisor);
    for (i, c) in d.moving.components().iter().enumerate() {
        say!("moving[{i}]: {c}");
    }
    say!("reduced: {}", d.reduced);
    Ok(())
}

fn cmd_homaloidal(args: &RunArgs) -> Result<(), Failure> {
    let text = read_input(&args.input)?;
    let mut doc = match parse_product(&text, &args.input)? {
        Some(arrangement) if arrangement.dim() >= 1 => {
            let params = verdict_params(&args.oracle, arrangement.dim())?;
            full_verdict(&arrangement, &params)?
        }
        _ => {
            let f = parse_polynomial_with(&text, &parse_options(&args.input))?;
            let params = verdict_params(&args.oracle, f.n_vars().saturating_sub(1))?;
            polynomial_verdict(&f, &params)?
        }
    };
    doc.input = text;
    emit(&doc, &args.json)
}

fn cmd_certify(args: &RunArgs) -> Result<(), Failure> {
    let text = read_input(&args.input)?;
    let arrangement = parse_arrangement_with(&text, args.input.dim.map(|d| d + 1))?;
    let params = VerdictParams {
        timing: args.oracle.timing,
        ..VerdictParams::default()
    };
    let mut doc = certify(&arrangement, &params)?;
    doc.input = text;
    emit(&doc, &args.json)
}

/// Oracle scans allowed per census, in evaluated points.
const CENSUS_BUDGET: u64 = 20_000_000_000;

fn cmd_classify(args: &ClassifyArgs) -> Result<(), Failure> {
    if args.n == 0 || args.n > 3 || args.r > 5 {
        return Err(Failure::Resource(
            "classify supports 1 <= n <= 3 and r <= 5".into(),
        ));
    }
    let params = verdict_params(&args.oracle, args.n)?;
    let rows = homaloid_core::theorems::canonical_rows(args.n + 1, &args.coeffs).len() as u64;
    let arrangements = binomial(rows, args.r as u64 + 1);
    let checked = args
        .oracle_limit
        .map_or(arrangements, |k| arrangements.min(k as u64));
    let per_scan: u64 = params
        .primes_for(args.n)
        .iter()
        .map(|&p| projective_size(args.n, p).unwrap_or(u64::MAX))
        .sum();
    if params.mode_for(args.n) == ScanMode::Exhaustive
        && checked.saturating_mul(per_scan) > CENSUS_BUDGET
    {
        return Err(Failure::Resource(format!(
            "{checked} oracle runs of {per_scan} points exceed the census budget; pass --oracle-limit"
        )));
    }
    let report = census(&CensusOptions {
        n: args.n,
        r: args.r,
        coeffs: args.coeffs.clone(),
        oracle_limit: args.oracle_limit,
        seed: args.oracle.seed.unwrap_or(0),
        params,
    })?;
    say!("{report}");
    Ok(())
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Polar(a) => cmd_polar(a),
        Command::Moving(a) => cmd_moving(a),
        Command::Homaloidal(a) => cmd_homaloidal(a),
        Command::Certify(a) => cmd_certify(a),
        Command::Classify(a) => cmd_classify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.exit_code())
        }
    }
}
