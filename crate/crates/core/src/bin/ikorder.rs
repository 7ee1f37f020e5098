//! Command-line front end.
//!
//! Exit codes: 0 success or order holds, 1 domain error, 2 usage error,
//! 3 order violated or fixture failure, 4 inconclusive, 5 soundness alarm.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ikorder::fixtures::{reproduce_all, run_fixture, FixtureCatalog};
use ikorder::ikdist::{ik_cdf, ik_pdf, ik_quantile, ik_reversed_hazard, ik_sf, IkParams};
use ikorder::mixture::FiniteMixture;
use ikorder::ordercheck::{check_order, difference_curve, write_curve_csv, CurveKind, Grid, OrderKind, Status};
use ikorder::scan::{run_scan, ScanConfig};
use ikorder::theorems::{Outcome, TheoremCase};
use ikorder::Error;

const EXIT_DOMAIN: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_VIOLATED: u8 = 3;
const EXIT_INCONCLUSIVE: u8 = 4;
const EXIT_ALARM: u8 = 5;

#[derive(Parser)]
#[command(name = "ikorder", version, about = "Inverted-Kumaraswamy mixtures and stochastic-order checks")]
struct Cli {
    /// Evaluation grid `MIN:MAX:N[:log|lin]`.
    #[arg(long, global = true, env = "IKORDER_GRID")]
    grid: Option<Grid>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a distribution or mixture function at one point.
    Eval(EvalArgs),
    /// Check an order between two mixtures on a grid.
    Order(OrderArgs),
    /// Check a theorem's hypotheses and, optionally, its conclusion.
    Check(CheckArgs),
    /// Run the bundled examples and counterexamples.
    Reproduce(ReproduceArgs),
    /// Tabulate a curve over the grid as CSV.
    Curve(CurveArgs),
    /// Sample a parameter box and look for violations.
    Scan(ScanArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Dist {
    Ik,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EvalFn {
    Cdf,
    Pdf,
    Sf,
    Rh,
    Quantile,
    Sfdiff,
}

#[derive(clap::Args)]
struct EvalArgs {
    #[arg(long, value_enum, conflicts_with = "mixture", requires_all = ["alpha", "beta"])]
    dist: Option<Dist>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    /// Mixture JSON file.
    #[arg(long)]
    mixture: Option<PathBuf>,
    /// Second mixture for `sfdiff`, which prints `sf(mixture) - sf(against)`.
    #[arg(long)]
    against: Option<PathBuf>,
    /// Evaluation point; the probability for `quantile`.
    #[arg(long, allow_negative_numbers = true)]
    x: f64,
    #[arg(long = "fn", value_enum)]
    func: EvalFn,
}

#[derive(clap::Args)]
struct OrderArgs {
    #[arg(long, value_parser = parse_kind)]
    kind: OrderKind,
    #[arg(long)]
    m1: PathBuf,
    #[arg(long)]
    m2: PathBuf,
}

#[derive(clap::Args)]
struct CheckArgs {
    /// Theorem case JSON file.
    case: PathBuf,
    /// Also check the conclusion on the grid.
    #[arg(long)]
    verify: bool,
}

#[derive(clap::Args)]
struct ReproduceArgs {
    /// Fixture id, e.g. `ex3.4`.
    #[arg(required_unless_present = "all", conflicts_with = "all")]
    id: Option<String>,
    #[arg(long)]
    all: bool,
    /// Directory holding `manifest.json` and fixture files.
    #[arg(long)]
    fixtures: Option<PathBuf>,
    /// Print full outcomes as JSON instead of the table.
    #[arg(long)]
    json: bool,
    /// Write each fixture's mixture pair as `<id>.m1.json` / `<id>.m2.json`.
    #[arg(long)]
    write_mixtures: Option<PathBuf>,
}

#[derive(clap::Args)]
struct CurveArgs {
    #[arg(long, value_parser = parse_curve)]
    which: CurveKind,
    #[arg(long)]
    m1: PathBuf,
    #[arg(long)]
    m2: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args)]
struct ScanArgs {
    /// Scan configuration JSON file.
    config: PathBuf,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_kind(s: &str) -> Result<OrderKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_curve(s: &str) -> Result<CurveKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Domain(_) | Error::InvalidParameter(_) | Error::LengthMismatch { .. } | Error::IndexOutOfRange { .. } => {
                EXIT_DOMAIN
            }
            Error::UnknownFixture(_) | Error::Io(_) | Error::Json(_) => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    usage(format!("{}: {e}", path.display()))
}

type CmdResult = Result<u8, Failure>;

fn load_mixture(path: &Path) -> Result<FiniteMixture, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    FiniteMixture::from_json(&text).map_err(|e| match e {
        Error::Json(j) => usage(format!("{}: {j}", path.display())),
        other => other.into(),
    })
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(Error::from)?;
    println!("{text}");
    Ok(())
}

fn status_code(s: Status) -> u8 {
    match s {
        Status::HoldsOnGrid => 0,
        Status::Violated => EXIT_VIOLATED,
        Status::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn cmd_eval(a: &EvalArgs) -> CmdResult {
    let value = match (&a.dist, &a.mixture) {
        (Some(Dist::Ik), None) => {
            let p = IkParams::new(a.alpha.unwrap_or(f64::NAN), a.beta.unwrap_or(f64::NAN))?;
            match a.func {
                EvalFn::Cdf => ik_cdf(a.x, p)?,
                EvalFn::Pdf => ik_pdf(a.x, p)?.value(),
                EvalFn::Sf => ik_sf(a.x, p)?,
                EvalFn::Rh => ik_reversed_hazard(a.x, p)?,
                EvalFn::Quantile => ik_quantile(a.x, p)?,
                EvalFn::Sfdiff => return Err(usage("--fn sfdiff needs --mixture and --against")),
            }
        }
        (None, Some(path)) => {
            let m = load_mixture(path)?;
            match a.func {
                EvalFn::Cdf => m.cdf(a.x)?,
                EvalFn::Pdf => m.pdf(a.x)?.value(),
                EvalFn::Sf => m.sf(a.x)?,
                EvalFn::Rh => m.reversed_hazard(a.x)?,
                EvalFn::Quantile => return Err(usage("--fn quantile is available for --dist ik only")),
                EvalFn::Sfdiff => {
                    let other = a.against.as_ref().ok_or_else(|| usage("--fn sfdiff needs --against"))?;
                    m.sf(a.x)? - load_mixture(other)?.sf(a.x)?
                }
            }
        }
        _ => return Err(usage("give either --dist ik with --alpha/--beta, or --mixture")),
    };
    println!("{value}");
    Ok(0)
}

fn cmd_order(a: &OrderArgs, grid: &Grid) -> CmdResult {
    let (m1, m2) = (load_mixture(&a.m1)?, load_mixture(&a.m2)?);
    let verdict = check_order(a.kind, &m1, &m2, grid);
    print_json(&verdict)?;
    Ok(status_code(verdict.status))
}

fn cmd_check(a: &CheckArgs, grid: &Grid) -> CmdResult {
    let text = fs::read_to_string(&a.case).map_err(|e| io_failure(&a.case, e))?;
    let case: TheoremCase = serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", a.case.display())))?;
    if !a.verify {
        print_json(&case.check()?)?;
        return Ok(0);
    }
    let (report, prediction) = case.verify(grid)?;
    print_json(&serde_json::json!({ "report": report, "prediction": prediction }))?;
    Ok(match prediction.outcome {
        Outcome::NotApplicable | Outcome::Consistent => 0,
        Outcome::Contradiction => EXIT_ALARM,
        Outcome::Inconclusive => EXIT_INCONCLUSIVE,
    })
}

fn write_json_file<T: Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(Error::from)?;
    fs::write(path, text + "\n").map_err(|e| io_failure(path, e))
}

fn cmd_reproduce(a: &ReproduceArgs, grid: &Grid) -> CmdResult {
    let catalog = match &a.fixtures {
        Some(dir) => FixtureCatalog::from_dir(dir)?,
        None => FixtureCatalog::builtin(),
    };
    let outcomes = match &a.id {
        Some(id) => vec![run_fixture(catalog.get(id)?, grid)?],
        None => reproduce_all(&catalog, grid)?,
    };
    if let Some(dir) = &a.write_mixtures {
        fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
        for o in &outcomes {
            let (m1, m2) = catalog.get(&o.id)?.case.mixtures()?;
            write_json_file(&dir.join(format!("{}.m1.json", o.id)), &m1)?;
            write_json_file(&dir.join(format!("{}.m2.json", o.id)), &m2)?;
        }
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    if a.json {
        print_json(&outcomes)?;
    } else {
        for o in &outcomes {
            println!("{o}");
        }
        println!("{passed}/{} PASS", outcomes.len());
    }
    Ok(if passed == outcomes.len() { 0 } else { EXIT_VIOLATED })
}

fn cmd_curve(a: &CurveArgs, grid: &Grid) -> CmdResult {
    let m1 = load_mixture(&a.m1)?;
    let m2 = match (&a.m2, a.which) {
        (Some(p), _) => load_mixture(p)?,
        (None, CurveKind::Sf) => m1.clone(),
        (None, _) => return Err(usage("--m2 is required for this curve")),
    };
    let rows = difference_curve(&m1, &m2, grid, a.which);
    let file = File::create(&a.out).map_err(|e| io_failure(&a.out, e))?;
    let mut out = BufWriter::new(file);
    write_curve_csv(&mut out, &rows)?;
    out.flush().map_err(|e| io_failure(&a.out, e))?;
    Ok(0)
}

fn cmd_scan(a: &ScanArgs, grid: Option<&Grid>) -> CmdResult {
    let text = fs::read_to_string(&a.config).map_err(|e| io_failure(&a.config, e))?;
    let config = ScanConfig::from_json(&text).map_err(|e| usage(format!("{}: {e}", a.config.display())))?;
    let report = run_scan(&config, grid)?;
    match &a.out {
        Some(path) => write_json_file(path, &report)?,
        None => print_json(&report)?,
    }
    eprintln!(
        "{}: {} samples, {} soundness alarm(s)",
        report.theorem,
        report.samples,
        report.alarms()
    );
    Ok(if report.alarms() > 0 { EXIT_ALARM } else { 0 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let grid = cli.grid.unwrap_or_default();
    let result = match &cli.command {
        Command::Eval(a) => cmd_eval(a),
        Command::Order(a) => cmd_order(a, &grid),
        Command::Check(a) => cmd_check(a, &grid),
        Command::Reproduce(a) => cmd_reproduce(a, &grid),
        Command::Curve(a) => cmd_curve(a, &grid),
        Command::Scan(a) => cmd_scan(a, cli.grid.as_ref()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
