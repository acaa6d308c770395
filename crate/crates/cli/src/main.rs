//! Command-line surface for the growth-trend toolkit.
//!
//! Three subcommands share one input format and one windowing model:
//! `r2` compares curve fits, `select` runs the two-step rate/order
//! selection per series, and `curve` dumps the criterion-vs-rate curves
//! for a single series. Tables go to stdout, diagnostics to stderr.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use trendsel_core::{
    build_grid, compare_fits, parse_csv, select_growth, Criterion, GrowthError, SampleWindow,
};

#[derive(Parser)]
#[command(name = "trendsel", version, about = "Linear vs. exponential trend discrimination for annual series")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compare best-grid exponential and linear curve fits by R²
    R2(CommonArgs),
    /// Select growth rate and ARIMA order per series under AIC, AICc, BIC
    Select(CommonArgs),
    /// Emit criterion-vs-rate curves for one series
    Curve(CurveArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Input CSV with header id,year,value
    #[arg(long)]
    input: String,
    /// First year of the sample window (inclusive)
    #[arg(long)]
    start_year: i32,
    /// Last year of the sample window (inclusive)
    #[arg(long)]
    end_year: i32,
    /// Number of grid points including the zero rate
    #[arg(long, default_value_t = 50)]
    grid_points: usize,
    /// Largest candidate growth rate
    #[arg(long, default_value_t = 0.06)]
    grid_max: f64,
    /// Largest AR order searched
    #[arg(long, default_value_t = 3)]
    max_p: usize,
    /// Largest MA order searched
    #[arg(long, default_value_t = 3)]
    max_q: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Seed for the optimizer's extra starting points
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Decimal places in every numeric cell
    #[arg(long, default_value_t = 4)]
    digits: usize,
}

#[derive(Args)]
struct CurveArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Series id to trace
    #[arg(long)]
    id: String,
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Csv,
    Markdown,
}

const EXIT_USAGE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_COMPUTE: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap prints help/version through the same error path; those
            // are not usage errors
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::R2(args) => cmd_r2(&args),
        Command::Select(args) => cmd_select(&args),
        Command::Curve(args) => cmd_curve(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

struct CliError {
    code: u8,
    message: String,
}

fn err(code: u8, message: impl Into<String>) -> CliError {
    CliError { code, message: message.into() }
}

/// Reads, parses, and windows the input; also validates grid parameters.
fn load(args: &CommonArgs) -> Result<Setup, CliError> {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| err(EXIT_INPUT, format!("{}: {e}", args.input)))?;
    let series = parse_csv(&text).map_err(|e| err(EXIT_INPUT, e.to_string()))?;
    let window = SampleWindow::new(args.start_year, args.end_year)
        .map_err(|e| err(EXIT_USAGE, e.to_string()))?;
    let grid = build_grid(args.grid_points, args.grid_max)
        .map_err(|e| err(EXIT_USAGE, e.to_string()))?;
    Ok(Setup { series, window, grid })
}

struct Setup {
    series: Vec<trendsel_core::CountrySeries>,
    window: SampleWindow,
    grid: trendsel_core::GrowthGrid,
}

/// Half-away-from-zero rounding, then fixed-point formatting. The sign
/// of an exact zero is dropped so NA-adjacent cells never print "-0".
fn fmt_num(x: f64, digits: usize) -> String {
    let m = 10f64.powi(digits as i32);
    let r = (x.abs() * m + 0.5).floor() / m * x.signum();
    let r = if r == 0.0 { 0.0 } else { r };
    format!("{r:.digits$}")
}

fn emit(format: Format, header: &[&str], rows: &[Vec<String>]) {
    match format {
        Format::Csv => {
            println!("{}", header.join(","));
            for row in rows {
                println!("{}", row.join(","));
            }
        }
        Format::Markdown => {
            println!("| {} |", header.join(" | "));
            println!("|{}|", header.iter().map(|_| " --- ").collect::<Vec<_>>().join("|"));
            for row in rows {
                println!("| {} |", row.join(" | "));
            }
        }
    }
}

fn cmd_r2(args: &CommonArgs) -> Result<(), CliError> {
    let setup = load(args)?;
    let mut rows = Vec::new();
    for s in &setup.series {
        let windowed = match s.window(setup.window) {
            Ok(w) => w,
            Err(e) => {
                eprintln!("{}: skipped: {e}", s.id());
                rows.push(vec![s.id().to_string(), "NA".into(), "NA".into(), "NA".into()]);
                continue;
            }
        };
        match compare_fits(&windowed, &setup.grid) {
            Ok(c) => rows.push(vec![
                c.id.clone(),
                fmt_num(c.r2_exp, args.digits),
                fmt_num(c.r2_lin, args.digits),
                fmt_num(c.diff, args.digits),
            ]),
            Err(GrowthError::ZeroVariance) => {
                eprintln!("{}: constant series, R² undefined", s.id());
                rows.push(vec![s.id().to_string(), "NA".into(), "NA".into(), "NA".into()]);
            }
            Err(e) => return Err(err(EXIT_COMPUTE, format!("{}: {e}", s.id()))),
        }
    }
    emit(args.format, &["id", "r2_exp", "r2_lin", "diff"], &rows);
    Ok(())
}

fn cmd_select(args: &CommonArgs) -> Result<(), CliError> {
    let setup = load(args)?;
    let mut rows = Vec::new();
    for s in &setup.series {
        let na_row = |id: &str| {
            let mut row = vec![id.to_string()];
            row.extend(std::iter::repeat("NA".to_string()).take(6));
            row
        };
        let windowed = match s.window(setup.window) {
            Ok(w) => w,
            Err(e) => {
                eprintln!("{}: skipped: {e}", s.id());
                let mut row = na_row(s.id());
                row.push(e.to_string());
                rows.push(row);
                continue;
            }
        };
        match select_growth(&windowed, &setup.grid, args.max_p, args.max_q, args.seed) {
            Ok(sel) => {
                let mut row = vec![sel.id.clone()];
                for c in Criterion::ALL {
                    row.push(fmt_num(sel.per_criterion[&c].rate, args.digits));
                }
                for c in Criterion::ALL {
                    row.push(sel.per_criterion[&c].order.to_string());
                }
                for w in &sel.warnings {
                    eprintln!("{}: {w}", sel.id);
                }
                row.push(sel.warnings.join("; "));
                rows.push(row);
            }
            Err(e) => {
                eprintln!("{}: {e}", s.id());
                let mut row = na_row(s.id());
                row.push(e.to_string());
                rows.push(row);
            }
        }
    }
    emit(
        args.format,
        &["id", "aic", "aicc", "bic", "order_aic", "order_aicc", "order_bic", "warnings"],
        &rows,
    );
    Ok(())
}

fn cmd_curve(args: &CurveArgs) -> Result<(), CliError> {
    let common = &args.common;
    let setup = load(common)?;
    let series = setup
        .series
        .iter()
        .find(|s| s.id() == args.id)
        .ok_or_else(|| err(EXIT_INPUT, format!("unknown id: {}", args.id)))?;
    let windowed = series
        .window(setup.window)
        .map_err(|e| err(EXIT_INPUT, format!("{}: {e}", args.id)))?;
    let sel = select_growth(&windowed, &setup.grid, common.max_p, common.max_q, common.seed)
        .map_err(|e| err(EXIT_COMPUTE, format!("{}: {e}", args.id)))?;

    // one row per grid point; the reported (p,q) is the AIC winner, while
    // each criterion column carries its own best-order score at that rate
    let aic_curve = &sel.curves[&Criterion::Aic];
    let mut rows = Vec::with_capacity(aic_curve.len());
    for (i, g) in aic_curve.iter().enumerate() {
        let aicc = &sel.curves[&Criterion::Aicc][i];
        let bic = &sel.curves[&Criterion::Bic][i];
        rows.push(vec![
            fmt_num(g.rate, common.digits),
            fmt_num(g.scores.aic, common.digits),
            fmt_num(aicc.scores.aicc, common.digits),
            fmt_num(bic.scores.bic, common.digits),
            g.best_order.p.to_string(),
            g.best_order.q.to_string(),
        ]);
    }
    emit(common.format, &["rate", "aic", "aicc", "bic", "p", "q"], &rows);
    Ok(())
}
