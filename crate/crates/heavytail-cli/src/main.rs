//! Batch command-line front end for the heavytail library.
//!
//! Exit codes: 0 success, 2 input/validation error, 3 degenerate or
//! statistical failure, 4 I/O error.

use std::io::{BufRead, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use heavytail::diagnostics::{pareto_gof_test, pareto_qq_data};
use heavytail::estimators::{
    alpha_hills, alpha_mle, generate_all_estimates, HillSpec, Method, MleOptions,
    HILL_MLE_WARNING,
};
use heavytail::gpd::{GpdParams, ParetoParams};
use heavytail::harness::{
    bench_estimators, bench_generation, run_accuracy_grid, write_csv, write_json, AccuracyConfig,
    BenchConfig,
};
use heavytail::sampling::{
    generate_gpd, generate_pareto, generate_stable_symmetric, generate_student_t, RngState,
};
use heavytail::{Error, Sample64};

const EXIT_INVALID: u8 = 2;
const EXIT_DEGENERATE: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(
    name = "heavytail",
    version,
    about = "Heavy-tail analysis: generate Pareto-family data, estimate tail indices, run diagnostics and benchmarks",
    after_help = "Default seed comes from HEAVYTAIL_SEED (fallback 0); report directory from HEAVYTAIL_OUT_DIR (fallback '.')."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate heavy-tailed data, one decimal float per line
    Generate(GenerateArgs),
    /// Estimate the tail index of a dataset
    Estimate(EstimateArgs),
    /// Emit QQ-against-exponential plot data as CSV
    Qq(QqArgs),
    /// Pareto goodness-of-fit p-value
    Gof(GofArgs),
    /// Time the estimators over generated samples
    Bench(BenchArgs),
    /// Run the alpha x size x seed accuracy grid
    Accuracy(AccuracyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Dist {
    Pareto,
    Gpd,
    Stable,
    T,
}

#[derive(Args)]
struct GenerateArgs {
    /// Number of observations
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "pareto")]
    dist: Dist,
    /// Pareto shape
    #[arg(long)]
    alpha: Option<f64>,
    /// Pareto scale (minimum)
    #[arg(long)]
    xmin: Option<f64>,
    /// GPD shape
    #[arg(long)]
    xi: Option<f64>,
    /// GPD scale
    #[arg(long)]
    sigma: Option<f64>,
    /// GPD location
    #[arg(long)]
    mu: Option<f64>,
    /// Stability parameter for the symmetric stable distribution
    #[arg(long)]
    stability: Option<f64>,
    /// Degrees of freedom for the Student-t distribution
    #[arg(long)]
    dof: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write to this file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Mle,
    Ls,
    Wls,
    Pm,
    Mpm,
    Gmpm,
    Mom,
    Hill,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Args)]
struct InputArgs {
    /// Input file; stdin when omitted or `-`
    input: Option<PathBuf>,
    /// Parse the input as CSV instead of one float per line
    #[arg(long)]
    csv: bool,
    /// CSV column to read (header name); requires --csv
    #[arg(long, requires = "csv")]
    column: Option<String>,
}

#[derive(Args)]
struct EstimateArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum)]
    method: MethodArg,
    /// Use the unbiased MLE correction
    #[arg(long)]
    unbiased: bool,
    /// Two-sided significance level for an MLE confidence interval
    #[arg(long)]
    significance: Option<f64>,
    /// Hill tuning: number of upper order statistics
    #[arg(long)]
    k: Option<usize>,
    /// Hill tuning: tail threshold value
    #[arg(long, conflicts_with = "k")]
    threshold: Option<f64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct QqArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Write to this file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GofArgs {
    #[command(flatten)]
    input: InputArgs,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated sample sizes
    #[arg(long, value_delimiter = ',', default_value = "1000,100000")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    runs: usize,
    #[arg(long, default_value_t = 3)]
    warmup: usize,
    /// Comma-separated methods (mle,ls,wls,pm,mpm,gmpm,mom)
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<String>>,
    #[arg(long, default_value_t = 1.2)]
    alpha: f64,
    #[arg(long, default_value_t = 3.0)]
    xmin: f64,
    #[arg(long)]
    seed: Option<u64>,
    /// Also time Pareto data generation
    #[arg(long)]
    generation: bool,
    /// Directory for bench.csv / bench.json
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct AccuracyArgs {
    #[arg(long, value_delimiter = ',', default_value = "0.5,1.5,2.2,5")]
    alphas: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1000,100000,1000000")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 4)]
    seeds: usize,
    #[arg(long, default_value_t = 2.0)]
    xmin: f64,
    /// Comma-separated non-Hill methods; default is the six-method grid
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<String>>,
    /// Hill fractions of N (empty string disables Hill)
    #[arg(long, value_delimiter = ',')]
    hill_fractions: Option<Vec<f64>>,
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for accuracy.csv / accuracy.json
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("heavytail: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvalidInput(_) | Error::Unsupported(_) => EXIT_INVALID,
            Error::DegenerateSample(_) => EXIT_DEGENERATE,
            Error::Io(_) | Error::Csv(_) | Error::Json(_) => EXIT_IO,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::new(EXIT_IO, e.to_string())
    }
}

type CliResult = Result<(), CliError>;

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Estimate(args) => cmd_estimate(args),
        Command::Qq(args) => cmd_qq(args),
        Command::Gof(args) => cmd_gof(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Accuracy(args) => cmd_accuracy(args),
    }
}

fn default_seed(explicit: Option<u64>) -> u64 {
    explicit.or_else(|| {
        std::env::var("HEAVYTAIL_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or(0)
}

fn default_out_dir(explicit: Option<PathBuf>) -> PathBuf {
    explicit
        .or_else(|| std::env::var("HEAVYTAIL_OUT_DIR").ok().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn require(opt: Option<f64>, name: &str) -> Result<f64, CliError> {
    opt.ok_or_else(|| CliError::new(EXIT_INVALID, format!("--{name} is required for this distribution")))
}

fn cmd_generate(args: GenerateArgs) -> CliResult {
    let mut rng = RngState::from_seed(default_seed(args.seed));
    let values: Vec<f64> = match args.dist {
        Dist::Pareto => {
            let params = ParetoParams::new(
                require(args.alpha, "alpha")?,
                require(args.xmin, "xmin")?,
            )?;
            generate_pareto(args.n, &params, &mut rng)?.values().to_vec()
        }
        Dist::Gpd => {
            let gpd = GpdParams::new(
                require(args.xi, "xi")?,
                require(args.sigma, "sigma")?,
                require(args.mu, "mu")?,
            )?;
            generate_gpd(args.n, &gpd, &mut rng)?.values().to_vec()
        }
        Dist::Stable => {
            generate_stable_symmetric(args.n, require(args.stability, "stability")?, &mut rng)?
        }
        Dist::T => generate_student_t(args.n, require(args.dof, "dof")?, &mut rng)?,
    };

    let mut out: Box<dyn Write> = match &args.output {
        Some(path) => Box::new(std::io::BufWriter::new(std::fs::File::create(path)?)),
        None => Box::new(std::io::BufWriter::new(std::io::stdout().lock())),
    };
    for v in values {
        writeln!(out, "{v}")?;
    }
    out.flush()?;
    Ok(())
}

fn read_values(input: &InputArgs) -> Result<Vec<f64>, CliError> {
    let reader: Box<dyn Read> = match &input.input {
        Some(p) if p.as_os_str() != "-" => Box::new(
            std::fs::File::open(p)
                .map_err(|e| CliError::new(EXIT_INVALID, format!("{}: {e}", p.display())))?,
        ),
        _ => Box::new(std::io::stdin().lock()),
    };
    if input.csv {
        let column = input
            .column
            .as_deref()
            .ok_or_else(|| CliError::new(EXIT_INVALID, "--csv requires --column"))?;
        read_csv_column(reader, column)
    } else {
        read_plain(reader)
    }
}

fn read_plain(reader: impl Read) -> Result<Vec<f64>, CliError> {
    let mut values = Vec::new();
    for (idx, line) in std::io::BufReader::new(reader).lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let v: f64 = trimmed.parse().map_err(|_| {
            CliError::new(
                EXIT_INVALID,
                format!("line {}: cannot parse `{trimmed}` as a number", idx + 1),
            )
        })?;
        values.push(v);
    }
    Ok(values)
}

fn read_csv_column(reader: impl Read, column: &str) -> Result<Vec<f64>, CliError> {
    let mut rdr = csv::Reader::from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| CliError::new(EXIT_INVALID, e.to_string()))?;
    let col = headers
        .iter()
        .position(|h| h == column)
        .ok_or_else(|| CliError::new(EXIT_INVALID, format!("no column named `{column}`")))?;
    let mut values = Vec::new();
    for (idx, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| CliError::new(EXIT_INVALID, e.to_string()))?;
        let field = record.get(col).unwrap_or("");
        let v: f64 = field.trim().parse().map_err(|_| {
            CliError::new(
                EXIT_INVALID,
                format!("line {}: cannot parse `{field}` as a number", idx + 2),
            )
        })?;
        values.push(v);
    }
    Ok(values)
}

fn load_sample(input: &InputArgs) -> Result<Sample64, CliError> {
    let values = read_values(input)?;
    if values.is_empty() {
        return Err(CliError::new(EXIT_INVALID, "no input values"));
    }
    Ok(Sample64::new(values)?)
}

/// Fixed six-significant-digit rendering for plain output.
fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = (5 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

fn parse_methods(names: &Option<Vec<String>>, default: Vec<Method>) -> Result<Vec<Method>, CliError> {
    match names {
        None => Ok(default),
        Some(list) => list
            .iter()
            .map(|s| s.parse::<Method>().map_err(CliError::from))
            .collect(),
    }
}

fn cmd_estimate(args: EstimateArgs) -> CliResult {
    let sample = load_sample(&args.input)?;

    if args.method == MethodArg::All {
        return print_all_estimates(&sample, args.format);
    }

    let mut warnings: Vec<String> = Vec::new();
    let mut extra: Vec<(&str, f64)> = Vec::new();
    let (name, shape, scale) = match args.method {
        MethodArg::Mle => {
            let opts = MleOptions {
                biased: !args.unbiased,
                significance: args.significance,
            };
            let est = alpha_mle(&sample, &opts)?;
            if let Some(ci) = est.ci {
                extra.push(("lower_bound", ci.lower));
                extra.push(("upper_bound", ci.upper));
                extra.push(("std_err", ci.std_err));
            }
            ("mle", est.estimate.shape, est.estimate.scale)
        }
        MethodArg::Hill => {
            let spec = match (args.k, args.threshold) {
                (Some(k), None) => HillSpec::ByRank(k),
                (None, Some(t)) => HillSpec::ByValue(t),
                _ => {
                    return Err(CliError::new(
                        EXIT_INVALID,
                        "hill requires exactly one of --k or --threshold",
                    ))
                }
            };
            let est = alpha_hills(&sample, &spec)?;
            if est.mle_equivalent {
                warnings.push(HILL_MLE_WARNING.to_string());
            }
            ("hill", est.estimate.shape, est.estimate.scale)
        }
        MethodArg::Mom => {
            let est = heavytail::alpha_moment(&sample)?;
            if est.near_unity {
                warnings.push(
                    "estimate is at most 1.05; the method of moments does not converge for \
                     alpha <= 1 - cross-check with another estimator"
                        .to_string(),
                );
            }
            ("mom", est.estimate.shape, est.estimate.scale)
        }
        other => {
            let method = match other {
                MethodArg::Ls => Method::Ls,
                MethodArg::Wls => Method::Wls,
                MethodArg::Pm => Method::Pm,
                MethodArg::Mpm => Method::Mpm,
                MethodArg::Gmpm => Method::Gmpm,
                _ => unreachable!(),
            };
            let est = method.estimate(&sample)?;
            (method.code(), est.shape, est.scale)
        }
    };

    match args.format {
        Format::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert("method".into(), name.into());
            obj.insert("shape".into(), shape.into());
            obj.insert("scale".into(), scale.into());
            for (k, v) in extra {
                obj.insert(k.into(), v.into());
            }
            if !warnings.is_empty() {
                obj.insert("warnings".into(), warnings.clone().into());
            }
            println!("{}", serde_json::Value::Object(obj));
        }
        Format::Csv => {
            println!("method,shape,scale");
            println!("{name},{shape},{scale}");
        }
        Format::Plain => {
            println!("method: {name}");
            println!("shape:  {}", sig6(shape));
            println!("scale:  {}", sig6(scale));
            for (k, v) in extra {
                println!("{k}: {}", sig6(v));
            }
        }
    }
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    Ok(())
}

fn print_all_estimates(sample: &Sample64, format: Format) -> CliResult {
    let rows = generate_all_estimates(sample);
    match format {
        Format::Json => {
            let arr: Vec<serde_json::Value> = rows
                .iter()
                .map(|row| {
                    let mut obj = serde_json::Map::new();
                    obj.insert("method".into(), row.method.code().into());
                    obj.insert("name".into(), row.method.display_name().into());
                    match &row.result {
                        Ok(est) => {
                            obj.insert("shape".into(), est.shape.into());
                            obj.insert("scale".into(), est.scale.into());
                        }
                        Err(e) => {
                            obj.insert("error".into(), e.to_string().into());
                        }
                    }
                    serde_json::Value::Object(obj)
                })
                .collect();
            println!("{}", serde_json::Value::Array(arr));
        }
        Format::Csv => {
            println!("method,shape,scale,error");
            for row in &rows {
                match &row.result {
                    Ok(est) => println!("{},{},{},", row.method.code(), est.shape, est.scale),
                    Err(e) => println!("{},,,\"{e}\"", row.method.code()),
                }
            }
        }
        Format::Plain => {
            println!("{:<30} {:>14} {:>14}", "Method of Estimation", "Shape", "Scale");
            for row in &rows {
                match &row.result {
                    Ok(est) => println!(
                        "{:<30} {:>14} {:>14}",
                        row.method.display_name(),
                        sig6(est.shape),
                        sig6(est.scale)
                    ),
                    Err(e) => {
                        println!("{:<30} error: {e}", row.method.display_name())
                    }
                }
            }
        }
    }
    Ok(())
}

fn cmd_qq(args: QqArgs) -> CliResult {
    let sample = load_sample(&args.input)?;
    let qq = pareto_qq_data(&sample)?;
    let mut out: Box<dyn Write> = match &args.output {
        Some(path) => Box::new(std::io::BufWriter::new(std::fs::File::create(path)?)),
        None => Box::new(std::io::BufWriter::new(std::io::stdout().lock())),
    };
    qq.write_csv(&mut out)?;
    writeln!(out, "# fitted_slope,{}", qq.fitted_slope)?;
    out.flush()?;
    Ok(())
}

fn cmd_gof(args: GofArgs) -> CliResult {
    let sample = load_sample(&args.input)?;
    let gof = pareto_gof_test(&sample)?;
    println!("{}", serde_json::to_string(&gof).map_err(Error::from)?);
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> CliResult {
    let cfg = BenchConfig {
        sizes: args.sizes,
        runs: args.runs,
        warmup: args.warmup,
        methods: parse_methods(&args.methods, Method::ALL.to_vec())?,
        alpha: args.alpha,
        xmin: args.xmin,
        seed: default_seed(args.seed),
    };
    let mut reports = bench_estimators(&cfg)?;
    if args.generation {
        reports.extend(bench_generation(&cfg)?);
    }
    let dir = default_out_dir(args.out_dir);
    std::fs::create_dir_all(&dir)?;
    let csv_path = dir.join("bench.csv");
    let json_path = dir.join("bench.json");
    write_csv(&csv_path, &reports)?;
    write_json(&json_path, &reports)?;
    eprintln!("wrote {} and {}", csv_path.display(), json_path.display());
    Ok(())
}

fn cmd_accuracy(args: AccuracyArgs) -> CliResult {
    let defaults = AccuracyConfig::default();
    let cfg = AccuracyConfig {
        alphas: args.alphas,
        sizes: args.sizes,
        seeds_per_cell: args.seeds,
        xmin: args.xmin,
        methods: parse_methods(&args.methods, defaults.methods)?,
        hill_fractions: args.hill_fractions.unwrap_or(defaults.hill_fractions),
        base_seed: default_seed(args.seed).wrapping_add(defaults.base_seed),
    };
    let records = run_accuracy_grid(&cfg)?;
    let dir = default_out_dir(args.out_dir);
    std::fs::create_dir_all(&dir)?;
    let csv_path = dir.join("accuracy.csv");
    let json_path = dir.join("accuracy.json");
    write_csv(&csv_path, &records)?;
    write_json(&json_path, &records)?;
    eprintln!("wrote {} and {}", csv_path.display(), json_path.display());
    Ok(())
}
