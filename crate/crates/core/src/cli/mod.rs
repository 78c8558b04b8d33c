//! Command-line front end. Data goes to stdout (or `--out`), diagnostics to
//! stderr. Exit codes: 0 success, 2 usage/input error, 3 domain error,
//! 4 numerical non-convergence.

mod ingest;
mod output;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dist::{ContinuousDistribution, Support};
use crate::error::Error;
use crate::family::DistributionSpec;
use crate::fit::{self, Family, FitOptions};
use crate::oracle;

pub use ingest::ingest;
pub use output::{format_number, Cell, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_NONCONVERGENCE: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "kappa-dist", version, about = "Evaluate, tabulate, sample and fit κ-distributions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate pdf/cdf/survival/hazard at points, or quantiles at probabilities.
    Eval(EvalArgs),
    /// Evaluate quantities over a `lin:a:b:n` or `log:a:b:n` grid.
    Tabulate(TabulateArgs),
    /// Raw moments of the given orders.
    Moments(MomentsArgs),
    /// Inverse-transform random draws.
    Sample(SampleArgs),
    /// Maximum-likelihood fit to data read from a file.
    Fit(FitArgs),
    /// Pareto tail exponent of data read from a file.
    Tail(TailArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Type1,
    Erlang,
    Type2,
    Type3,
    Type4,
    Type5,
    Knormal,
    Klogistic,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FitFamilyName {
    Type1,
    Type2,
    Type3,
    Type4,
    Type5,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    Pdf,
    Cdf,
    Survival,
    Hazard,
}

impl Quantity {
    fn name(self) -> &'static str {
        match self {
            Quantity::Pdf => "pdf",
            Quantity::Cdf => "cdf",
            Quantity::Survival => "survival",
            Quantity::Hazard => "hazard",
        }
    }

    fn eval<D: ContinuousDistribution + ?Sized>(self, d: &D, x: f64) -> f64 {
        match self {
            Quantity::Pdf => d.pdf(x),
            Quantity::Cdf => d.cdf(x),
            Quantity::Survival => d.survival(x),
            Quantity::Hazard => d.hazard(x),
        }
    }
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: FamilyName,
    #[arg(long)]
    pub kappa: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Erlang order or Type V order.
    #[arg(long)]
    pub n: Option<u32>,
    /// Location of the κ-logistic law.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub location: f64,
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    pub dist: FamilyArgs,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required_unless_present = "p")]
    pub x: Vec<f64>,
    /// Probabilities for quantile rows.
    #[arg(long, value_delimiter = ',', conflicts_with = "x")]
    pub p: Vec<f64>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "pdf,cdf")]
    pub what: Vec<Quantity>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct TabulateArgs {
    #[command(flatten)]
    pub dist: FamilyArgs,
    #[arg(long)]
    pub grid: String,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "pdf,cdf")]
    pub what: Vec<Quantity>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct MomentsArgs {
    #[command(flatten)]
    pub dist: FamilyArgs,
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub orders: Vec<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[command(flatten)]
    pub dist: FamilyArgs,
    #[arg(long)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct InputArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// CSV column, by header name or 1-based index.
    #[arg(long)]
    pub col: Option<String>,
    /// The CSV has a header row (implied when `--col` is a name).
    #[arg(long)]
    pub header: bool,
}

#[derive(Args, Debug)]
pub struct FitArgs {
    #[arg(long, value_enum)]
    pub family: FitFamilyName,
    /// Type V order.
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub fix_kappa: Option<f64>,
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct TailArgs {
    #[arg(long, default_value_t = 0.05)]
    pub fraction: f64,
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Errors surfaced by the CLI, each with its exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Lib(Error::Io(e))
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Lib(e) => match e {
                Error::Io(_) | Error::Parse { .. } | Error::EmptySample => EXIT_USAGE,
                Error::NoConvergence { .. } | Error::FitNonConvergence { .. } | Error::AllMassAtBoundary { .. } => {
                    EXIT_NONCONVERGENCE
                }
                _ => EXIT_DOMAIN,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

fn need<T>(v: Option<T>, flag: &str, family: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--{flag} is required for --family {family}")))
}

impl FamilyArgs {
    pub fn spec(&self) -> Result<DistributionSpec, CliError> {
        let (beta, kappa) = (self.beta, self.kappa);
        Ok(match self.family {
            FamilyName::Type1 => DistributionSpec::Type1 {
                alpha: need(self.alpha, "alpha", "type1")?,
                beta,
                nu: need(self.nu, "nu", "type1")?,
                kappa,
            },
            FamilyName::Erlang => DistributionSpec::Erlang { n: need(self.n, "n", "erlang")?, beta, kappa },
            FamilyName::Type2 => DistributionSpec::Type2 { alpha: need(self.alpha, "alpha", "type2")?, beta, kappa },
            FamilyName::Type3 => DistributionSpec::Type3 {
                alpha: need(self.alpha, "alpha", "type3")?,
                beta,
                lambda: need(self.lambda, "lambda", "type3")?,
                kappa,
            },
            FamilyName::Type4 => DistributionSpec::Type4 { alpha: need(self.alpha, "alpha", "type4")?, beta, kappa },
            FamilyName::Type5 => DistributionSpec::Type5 { n: need(self.n, "n", "type5")?, beta, kappa },
            FamilyName::Knormal => DistributionSpec::KappaNormal { beta, kappa },
            FamilyName::Klogistic => DistributionSpec::KappaLogistic { beta, location: self.location, kappa },
        })
    }
}

/// Parses `lin:a:b:n` or `log:a:b:n` (n ≥ 2 points, both ends included).
pub fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("grid {s:?} must be lin:a:b:n or log:a:b:n"));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 4 {
        return Err(bad());
    }
    let a: f64 = parts[1].parse().map_err(|_| bad())?;
    let b: f64 = parts[2].parse().map_err(|_| bad())?;
    let n: usize = parts[3].parse().map_err(|_| bad())?;
    if n < 2 || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    let t = |i: usize| i as f64 / (n - 1) as f64;
    match parts[0] {
        "lin" => Ok((0..n).map(|i| a + (b - a) * t(i)).collect()),
        "log" if a > 0.0 && b > 0.0 => {
            let (la, lb) = (a.ln(), b.ln());
            Ok((0..n)
                .map(|i| match i {
                    0 => a,
                    _ if i == n - 1 => b,
                    _ => (la + (lb - la) * t(i)).exp(),
                })
                .collect())
        }
        _ => Err(bad()),
    }
}

fn family_table(spec: &DistributionSpec, columns: Vec<String>) -> Table {
    Table {
        family: spec.family_name().into(),
        params: spec.params().into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        columns,
        rows: Vec::new(),
    }
}

fn points_table(args: &FamilyArgs, xs: &[f64], what: &[Quantity]) -> Result<Table, CliError> {
    let spec = args.spec()?;
    let d = spec.build()?;
    let mut cols = vec!["x".to_string()];
    cols.extend(what.iter().map(|q| q.name().to_string()));
    let mut t = family_table(&spec, cols);
    for &x in xs {
        if !x.is_finite() {
            return Err(Error::domain("eval", x, "x finite").into());
        }
        if x < 0.0 && d.support() == Support::HalfLine {
            return Err(Error::domain("eval", x, "x≥0 for half-line families").into());
        }
        let mut row = vec![Cell::Num(x)];
        row.extend(what.iter().map(|q| Cell::Num(q.eval(&d, x))));
        t.rows.push(row);
    }
    Ok(t)
}

fn eval(a: &EvalArgs) -> Result<Table, CliError> {
    if a.p.is_empty() {
        return points_table(&a.dist, &a.x, &a.what);
    }
    let spec = a.dist.spec()?;
    let d = spec.build()?;
    let mut t = family_table(&spec, vec!["p".into(), "quantile".into()]);
    for &p in &a.p {
        t.rows.push(vec![Cell::Num(p), Cell::Num(d.quantile(p)?)]);
    }
    Ok(t)
}

/// Divergent orders become flagged rows; the first divergence is returned
/// alongside the table so the caller can exit with the domain code.
fn moments(a: &MomentsArgs) -> Result<(Table, Option<Error>), CliError> {
    let spec = a.dist.spec()?;
    let d = spec.build()?;
    let mut t = family_table(&spec, vec!["order".into(), "value".into(), "status".into(), "constraint".into()]);
    let mut first = None;
    for &m in &a.orders {
        match d.raw_moment(m) {
            Ok(v) => t.rows.push(vec![Cell::Num(m), Cell::Num(v), Cell::Text("ok".into()), Cell::Empty]),
            Err(e @ Error::MomentDiverges { .. }) => {
                let Error::MomentDiverges { constraint, .. } = &e else { unreachable!() };
                t.rows.push(vec![Cell::Num(m), Cell::Empty, Cell::Text("divergent".into()), Cell::Text(constraint.clone())]);
                eprintln!("{e}");
                first.get_or_insert(e);
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok((t, first))
}

fn sample_cmd(a: &SampleArgs) -> Result<Table, CliError> {
    if a.count == 0 {
        return Err(CliError::Usage("--count must be at least 1".into()));
    }
    let spec = a.dist.spec()?;
    let d = spec.build()?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let xs = fit::sample(&d, a.count, &mut rng)?;
    let mut t = family_table(&spec, vec!["x".into()]);
    t.rows = xs.into_iter().map(|x| vec![Cell::Num(x)]).collect();
    Ok(t)
}

fn read_sample(i: &InputArgs) -> Result<fit::Sample, CliError> {
    Ok(ingest(&i.input, i.col.as_deref(), i.header)?)
}

fn fit_cmd(a: &FitArgs) -> Result<Table, CliError> {
    let family = match a.family {
        FitFamilyName::Type1 => Family::Type1,
        FitFamilyName::Type2 => Family::Type2,
        FitFamilyName::Type3 => Family::Type3,
        FitFamilyName::Type4 => Family::Type4,
        FitFamilyName::Type5 => Family::Type5 { n: need(a.n, "n", "type5")? },
    };
    let sample = read_sample(&a.input)?;
    let opts = FitOptions { fixed_kappa: a.fix_kappa, ..Default::default() };
    let r = fit::fit_mle(family, &sample, &opts)?;
    let mut t = family_table(&r.spec, vec!["param".into(), "estimate".into(), "stderr".into()]);
    let values = r.spec.params();
    for (i, (name, v)) in values.iter().filter(|(n, _)| *n != "n").enumerate() {
        let se = r.stderr_estimates.as_ref().map_or(Cell::Empty, |s| Cell::Num(s[i]));
        t.rows.push(vec![Cell::Text((*name).into()), Cell::Num(*v), se]);
    }
    t.rows.push(vec![Cell::Text("log_likelihood".into()), Cell::Num(r.log_likelihood), Cell::Empty]);
    t.rows.push(vec![Cell::Text("iterations".into()), Cell::Int(r.iterations as i64), Cell::Empty]);
    Ok(t)
}

fn tail_cmd(a: &TailArgs) -> Result<Table, CliError> {
    let sample = read_sample(&a.input)?;
    sample.check_support(Support::HalfLine)?;
    let b = fit::tail_index(&sample, a.fraction)?;
    let k = (a.fraction * sample.len() as f64).floor() as i64;
    Ok(Table {
        family: "empirical".into(),
        params: vec![("fraction".into(), a.fraction)],
        columns: vec!["n".into(), "k".into(), "tail_exponent".into()],
        rows: vec![vec![Cell::Int(sample.len() as i64), Cell::Int(k), Cell::Num(b)]],
    })
}

fn emit(table: &Table, out: &OutputArgs) -> Result<(), CliError> {
    let sink: Box<dyn Write> = match &out.out {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    };
    let w = BufWriter::new(sink);
    match out.format {
        Format::Csv => output::write_csv(table, w)?,
        Format::Json => output::write_json(table, w)?,
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<i32, CliError> {
    let (table, out, deferred) = match &cli.command {
        Command::Eval(a) => (eval(a)?, &a.output, None),
        Command::Tabulate(a) => (points_table(&a.dist, &parse_grid(&a.grid)?, &a.what)?, &a.output, None),
        Command::Moments(a) => {
            let (t, e) = moments(a)?;
            (t, &a.output, e)
        }
        Command::Sample(a) => (sample_cmd(a)?, &a.output, None),
        Command::Fit(a) => (fit_cmd(a)?, &a.output, None),
        Command::Tail(a) => (tail_cmd(a)?, &a.output, None),
    };
    emit(&table, out)?;
    Ok(deferred.map_or(EXIT_OK, |e| CliError::Lib(e).exit_code()))
}

fn apply_budget() -> Result<(), CliError> {
    if let Ok(v) = std::env::var(oracle::EVAL_BUDGET_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{} must be a positive integer, got {v:?}", oracle::EVAL_BUDGET_ENV)))?;
        oracle::set_default_eval_budget(n);
    }
    Ok(())
}

/// Parses `argv` (program name first) and runs the command; returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match apply_budget().and_then(|_| dispatch(&cli)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
