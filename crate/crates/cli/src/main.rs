//! snx: skew-normal extreme-value diagnostics from the command line.
//!
//! Exit codes: 0 success, 2 usage/validation error, 3 solver/precision
//! error, 4 i/o error.

mod parse;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sn_extremes::diagnostics::{
    monte_carlo_maxima, rate_ratio_scan, ExportFormat, ScanMethod, ScanOrder, Table,
};
use sn_extremes::fmt::sig15;
use sn_extremes::norming::{self, BaselineVariant, NormingPair};
use sn_extremes::{dist, tail, Error, Shape};
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "snx",
    version,
    about = "Skew-normal tail functions, norming constants and Gumbel convergence diagnostics",
    after_help = "Sample sizes accept scientific notation with arbitrary exponent (e.g. --n 1e300); \
                  they are parsed symbolically to log n, never through a float n."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the density, CDF, survival or log-survival at a point
    Dist(DistArgs),
    /// Tabulate Mills bounds and the true ratio over an x range
    Bounds(BoundsArgs),
    /// Compute norming constants (scale, location) for a sample size
    Norming(NormingArgs),
    /// Scan convergence-rate diagnostics over n- and x-grids
    Rates(RatesArgs),
    /// Simulate normalized maxima and compare against the exact law
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct DistArgs {
    /// Skew parameter lambda
    #[arg(long, allow_hyphen_values = true)]
    lambda: f64,
    /// Evaluation point
    #[arg(long, allow_hyphen_values = true)]
    x: f64,
    #[arg(long, group = "quantity")]
    pdf: bool,
    #[arg(long, group = "quantity")]
    cdf: bool,
    #[arg(long, group = "quantity")]
    survival: bool,
    #[arg(long = "log-survival", group = "quantity")]
    log_survival: bool,
}

#[derive(Args)]
struct BoundsArgs {
    /// Skew parameter lambda (omit with --normal)
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
    #[arg(long = "x-min")]
    x_min: f64,
    #[arg(long = "x-max")]
    x_max: f64,
    /// Number of grid rows
    #[arg(long)]
    steps: usize,
    /// Use the classical standard-normal bounds instead of SN(lambda)
    #[arg(long)]
    normal: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Closed,
    Quantile,
    Leadbetter0,
    Hall0,
    Nair0,
}

#[derive(Args)]
struct NormingArgs {
    /// Skew parameter lambda (ignored by the lambda = 0 baselines)
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
    /// Sample size, e.g. 1000, 1e6, 2.5e120
    #[arg(long)]
    n: String,
    #[arg(long, value_enum)]
    method: MethodArg,
    /// Log-space residual tolerance for the solver-based methods
    #[arg(long, default_value_t = norming::DEFAULT_TOL)]
    tol: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OrderArg {
    Leading,
    First,
    Second,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct RatesArgs {
    #[arg(long, allow_hyphen_values = true)]
    lambda: f64,
    /// Comma-separated sample sizes, e.g. 1e8,1e16,1e32
    #[arg(long = "n-grid")]
    n_grid: String,
    /// Comma-separated x values, e.g. -1,0.5,1,2
    #[arg(long = "x-grid", allow_hyphen_values = true)]
    x_grid: String,
    #[arg(long, value_enum)]
    order: OrderArg,
    #[arg(long, value_enum)]
    method: MethodArg,
    /// Output path; '-' or omitted streams to stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, allow_hyphen_values = true)]
    lambda: f64,
    /// Draws per maximum (n * reps is budgeted at 1e10)
    #[arg(long)]
    n: String,
    #[arg(long)]
    reps: String,
    #[arg(long)]
    seed: u64,
    /// Norming pair used to normalize the maxima
    #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
    method: MethodArg,
    /// Output path for the full summary; '-' streams to stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(exit_code(&e));
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::Usage(_) => 2,
        Error::Solver(_) | Error::Precision(_) | Error::Overflow(_) => 3,
        Error::Io(_) => 4,
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Dist(args) => cmd_dist(args),
        Command::Bounds(args) => cmd_bounds(args),
        Command::Norming(args) => cmd_norming(args),
        Command::Rates(args) => cmd_rates(args),
        Command::Simulate(args) => cmd_simulate(args),
    }
}

fn cmd_dist(args: DistArgs) -> Result<(), Error> {
    let shape = Shape::new(args.lambda)?;
    let value = if args.pdf {
        dist::pdf(args.x, shape)?
    } else if args.cdf {
        dist::cdf(args.x, shape)?
    } else if args.survival {
        dist::survival(args.x, shape)?
    } else if args.log_survival {
        dist::log_survival(args.x, shape)?.value()
    } else {
        return Err(Error::Usage(
            "pick one of --pdf, --cdf, --survival, --log-survival".into(),
        ));
    };
    println!("{}", sig15(value));
    Ok(())
}

fn cmd_bounds(args: BoundsArgs) -> Result<(), Error> {
    if args.steps == 0 {
        return Err(Error::Usage("--steps must be at least 1".into()));
    }
    if !(args.x_min.is_finite() && args.x_max.is_finite() && args.x_min <= args.x_max) {
        return Err(Error::Usage(format!(
            "bad x range [{}, {}]",
            args.x_min, args.x_max
        )));
    }
    let shape = match (args.normal, args.lambda) {
        (true, _) => None,
        (false, Some(lambda)) => Some(Shape::new(lambda)?),
        (false, None) => {
            return Err(Error::Usage("--lambda is required unless --normal is given".into()))
        }
    };
    let mut rows = String::from("x,lower,upper,ratio\n");
    for i in 0..args.steps {
        let x = if args.steps == 1 {
            args.x_min
        } else {
            args.x_min + (args.x_max - args.x_min) * i as f64 / (args.steps - 1) as f64
        };
        let b = match shape {
            Some(s) => tail::mills_bounds_sn(x, s)?,
            None => tail::mills_bounds_normal(x)?,
        };
        let field = |v: Option<f64>| v.map(sig15).unwrap_or_default();
        rows.push_str(&format!(
            "{},{},{},{}\n",
            sig15(x),
            field(b.lower),
            field(b.upper),
            sig15(b.ratio)
        ));
    }
    print!("{rows}");
    Ok(())
}

fn build_pair(method: MethodArg, lambda: Option<f64>, log_n: f64, tol: f64) -> Result<NormingPair, Error> {
    let need_shape = || -> Result<Shape, Error> {
        let lambda = lambda.ok_or_else(|| Error::Usage("--lambda is required for this method".into()))?;
        Shape::new(lambda)
    };
    match method {
        MethodArg::Closed => norming::closed_form_norming(log_n, need_shape()?),
        MethodArg::Quantile => norming::quantile_norming(log_n, need_shape()?, tol),
        MethodArg::Leadbetter0 => baseline(log_n, BaselineVariant::Leadbetter, tol, lambda),
        MethodArg::Hall0 => baseline(log_n, BaselineVariant::Hall, tol, lambda),
        MethodArg::Nair0 => baseline(log_n, BaselineVariant::Nair, tol, lambda),
    }
}

fn baseline(log_n: f64, variant: BaselineVariant, tol: f64, lambda: Option<f64>) -> Result<NormingPair, Error> {
    if let Some(lambda) = lambda {
        if lambda != 0.0 {
            return Err(Error::Usage(format!(
                "the {variant:?} baseline is a lambda = 0 family; drop --lambda or pass 0, got {lambda}"
            )));
        }
    }
    norming::baseline_norming_lambda0(log_n, variant, tol)
}

fn cmd_norming(args: NormingArgs) -> Result<(), Error> {
    let log_n = parse::log_n(&args.n)?;
    let pair = build_pair(args.method, args.lambda, log_n, args.tol)?;
    println!("scale={}", sig15(pair.scale));
    println!("location={}", sig15(pair.location));
    Ok(())
}

fn cmd_rates(args: RatesArgs) -> Result<(), Error> {
    let shape = Shape::new(args.lambda)?;
    let n_grid = parse::log_n_grid(&args.n_grid)?;
    let x_grid = parse::x_grid(&args.x_grid)?;
    let order = match args.order {
        OrderArg::Leading => ScanOrder::Leading,
        OrderArg::First => ScanOrder::First,
        OrderArg::Second => ScanOrder::Second,
    };
    let method = match args.method {
        MethodArg::Closed => ScanMethod::ClosedForm,
        MethodArg::Quantile => ScanMethod::Quantile,
        other => {
            return Err(Error::Usage(format!(
                "rates scans take --method closed or quantile, got {other:?}"
            )))
        }
    };
    let records = rate_ratio_scan(shape, &n_grid, &x_grid, order, method)?;
    write_out(args.out, |sink| {
        sn_extremes::diagnostics::export_table(Table::Rates(&records), format_of(args.format), sink)
    })
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), Error> {
    let shape = Shape::new(args.lambda)?;
    let n = parse::count(&args.n)?;
    let reps = parse::count(&args.reps)?;
    let log_n = (n as f64).ln();
    let pair = build_pair(args.method, Some(args.lambda), log_n, norming::DEFAULT_TOL)?;
    let summary = monte_carlo_maxima(shape, n, reps, args.seed, &pair)?;
    println!(
        "lambda={} n={} reps={} seed={} method={}",
        sig15(summary.lambda),
        summary.n,
        summary.reps,
        summary.seed,
        summary.method.as_str()
    );
    println!("sup_dist_exact={}", sig15(summary.sup_dist_exact));
    println!("sup_dist_gumbel={}", sig15(summary.sup_dist_gumbel));
    if args.out.is_some() {
        write_out(args.out, |sink| {
            sn_extremes::diagnostics::export_table(
                Table::Simulation(&summary),
                format_of(args.format),
                sink,
            )
        })?;
    }
    Ok(())
}

fn format_of(arg: FormatArg) -> ExportFormat {
    match arg {
        FormatArg::Csv => ExportFormat::Csv,
        FormatArg::Json => ExportFormat::Json,
    }
}

/// Run `write` against the chosen sink; '-' or no path means stdout, so
/// file and stdout outputs are byte-identical by construction.
fn write_out<F>(out: Option<PathBuf>, write: F) -> Result<(), Error>
where
    F: FnOnce(&mut dyn Write) -> Result<(), Error>,
{
    match out {
        Some(path) if path.as_os_str() != "-" => {
            let mut file = File::create(&path)?;
            write(&mut file)
        }
        _ => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)
        }
    }
}
