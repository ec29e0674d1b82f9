//! Thin command-line front-end: flag parsing and output formatting only; all
//! computation lives in the library (see `cli`).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use qchain::cli::{
    cmd_eval_single, cmd_eval_table, cmd_series, format_series_text, run_bench, run_verify,
    SeriesParams, SeriesTarget, Suite,
};
use qchain::numeric::{TABLE_N, TABLE_Q_DEN};
use qchain::Error;

#[derive(Parser)]
#[command(
    name = "qchain",
    about = "Exact q-series engine: multisum/theta identity verification, series printing, \
             numeric grid evaluation and benchmarks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite; exit code 0 iff every check passes.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Range of N, inclusive: `2..6` or a single `4`.
        #[arg(long, default_value = "2..6")]
        n: String,
        /// Truncation order (suite-specific default when omitted).
        #[arg(long)]
        order: Option<i64>,
        /// Worker-pool size (QCHAIN_WORKERS env var as fallback).
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Optional JSON config with defaults for order/workers (flags win).
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Print a series with exact coefficients.
    Series {
        #[arg(long, value_enum)]
        target: SeriesTarget,
        #[arg(long)]
        n: Option<i64>,
        #[arg(long)]
        m: Option<i64>,
        /// String-function index ell.
        #[arg(long)]
        l: Option<i64>,
        /// Theta symbol for `--target j`, e.g. "j(-q^2; q^5)" or "Jbar(0,8)".
        #[arg(long)]
        symbol: Option<String>,
        #[arg(long, default_value_t = 20)]
        order: i64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Numeric evaluation: one cell or the full reference grid.
    Eval {
        /// Emit the full grid (N in {2..10, 100} x 1/q in {2,3,5,7,11} plus
        /// the Euler row).
        #[arg(long)]
        table1: bool,
        #[arg(long)]
        n: Option<i64>,
        /// Rational q as `p/q`, e.g. `1/2`.
        #[arg(long)]
        q: Option<String>,
        #[arg(long, default_value_t = 5)]
        digits: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Time the multisum route against the theta route on identical input.
    Bench {
        #[arg(long)]
        n: i64,
        #[arg(long, default_value_t = 60)]
        order: i64,
        #[arg(long, default_value_t = 3)]
        repeats: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Deserialize, Default)]
struct ConfigFile {
    order: Option<i64>,
    workers: Option<usize>,
}

const EXIT_OK: u8 = 0;
const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn parse_n_range(s: &str) -> Result<(i64, i64), Error> {
    let parse = |v: &str| {
        v.parse::<i64>()
            .map_err(|_| Error::ParseError(format!("bad N range component {v:?}")))
    };
    if let Some((lo, hi)) = s.split_once("..") {
        let (lo, hi) = (parse(lo)?, parse(hi)?);
        if lo > hi {
            return Err(Error::ParseError(format!("empty N range {s:?}")));
        }
        Ok((lo, hi))
    } else {
        let v = parse(s)?;
        Ok((v, v))
    }
}

fn parse_rational(s: &str) -> Result<(i64, i64), Error> {
    let (num, den) = s
        .split_once('/')
        .ok_or_else(|| Error::ParseError(format!("expected p/q, got {s:?}")))?;
    let num = num
        .trim()
        .parse::<i64>()
        .map_err(|_| Error::ParseError(format!("bad numerator in {s:?}")))?;
    let den = den
        .trim()
        .parse::<i64>()
        .map_err(|_| Error::ParseError(format!("bad denominator in {s:?}")))?;
    if num <= 0 || den <= 0 || num >= den {
        return Err(Error::RangeError(format!("q must lie in (0,1), got {s}")));
    }
    Ok((num, den))
}

fn usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::RangeError(_) | Error::ParseError(_) | Error::DivisibilityError { .. }
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if usage_error(&e) { EXIT_USAGE } else { EXIT_VERIFY_FAILED })
        }
    }
}

fn dispatch(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Verify {
            suite,
            n,
            order,
            workers,
            format,
            config,
        } => {
            let cfg: ConfigFile = match config {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| Error::ParseError(format!("config {path:?}: {e}")))?;
                    serde_json::from_str(&text)
                        .map_err(|e| Error::ParseError(format!("config {path:?}: {e}")))?
                }
                None => ConfigFile::default(),
            };
            let range = parse_n_range(&n)?;
            let reports = run_verify(suite, range, order.or(cfg.order), workers.or(cfg.workers));
            let all_pass = reports.iter().all(|r| r.pass);
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&reports).expect("reports serialize")
                ),
                Format::Text => {
                    for r in &reports {
                        let status = if r.pass { "pass" } else { "FAIL" };
                        print!(
                            "{status}  {:<28} order={:<4} {:>9.1} ms",
                            r.id, r.order, r.wall_ms
                        );
                        if let Some(d) = &r.first_diff {
                            print!("  first diff at q^{}: {} vs {}", d.exponent, d.lhs, d.rhs);
                        }
                        if let Some(e) = &r.error {
                            print!("  error: {e}");
                        }
                        println!();
                    }
                }
                Format::Csv => {
                    println!("id,order,pass,wall_ms");
                    for r in &reports {
                        println!("{},{},{},{:.3}", r.id, r.order, r.pass, r.wall_ms);
                    }
                }
            }
            Ok(if all_pass { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }
        Command::Series {
            target,
            n,
            m,
            l,
            symbol,
            order,
            format,
        } => {
            let params = SeriesParams { n, m, ell: l, symbol };
            let series = cmd_series(target, &params, order)?;
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&series).expect("series serialize")
                ),
                Format::Text => print!("{}", format_series_text(&series)),
                Format::Csv => {
                    println!("exponent,coefficient");
                    let scale = series.scale();
                    for (pos, c) in series.iter_units() {
                        println!("{},{}", qchain::series::Exponent::new(pos, scale), c);
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::Eval {
            table1,
            n,
            q,
            digits,
            format,
        } => {
            if table1 {
                let table = cmd_eval_table(digits)?;
                match format {
                    Format::Json => println!(
                        "{}",
                        serde_json::to_string_pretty(&table).expect("table serialize")
                    ),
                    Format::Csv => print!("{}", table.to_csv()),
                    Format::Text => {
                        print!("N\\1/q ");
                        for d in TABLE_Q_DEN {
                            print!("{d:>10}");
                        }
                        println!();
                        for n in TABLE_N.iter().map(|&v| Some(v)).chain([None]) {
                            match n {
                                Some(v) => print!("{v:>5} "),
                                None => print!("euler "),
                            }
                            for d in TABLE_Q_DEN {
                                let c = table.cell(n, d).expect("cell");
                                print!("{:>10.*}", digits as usize, c.value);
                            }
                            println!();
                        }
                    }
                }
                Ok(EXIT_OK)
            } else {
                let n = n.ok_or_else(|| Error::RangeError("eval needs --table1 or --n".into()))?;
                let q = q.ok_or_else(|| Error::RangeError("eval needs --q p/q".into()))?;
                let q = parse_rational(&q)?;
                let r = if n <= 10 && q.1 > 16 {
                    // deep in the q -> 0 regime the series partial sum is the
                    // natural route
                    let series = qchain::identities::bn_multisum(n, 60);
                    qchain::numeric::eval_series_partial(&series, q, digits)?
                } else {
                    cmd_eval_single(n, q, digits)?
                };
                match format {
                    Format::Json => println!(
                        "{}",
                        serde_json::to_string_pretty(&r).expect("result serialize")
                    ),
                    Format::Text | Format::Csv => {
                        println!(
                            "{:.*}  (err_est {:.2e}, route {:?})",
                            digits as usize, r.value, r.err_est, r.route
                        );
                    }
                }
                Ok(EXIT_OK)
            }
        }
        Command::Bench {
            n,
            order,
            repeats,
            format,
        } => {
            let report = run_bench(n, order, repeats)?;
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("report serialize")
                ),
                Format::Csv => {
                    println!("route,terms_or_indices,best_ms");
                    let best = report.theta_ms.iter().cloned().fold(f64::INFINITY, f64::min);
                    println!("theta,{},{best:.3}", report.theta_terms);
                    if let (Some(work), Some(ms)) = (&report.multisum_work, &report.multisum_ms) {
                        let best = ms.iter().cloned().fold(f64::INFINITY, f64::min);
                        println!("multisum,{work},{best:.3}");
                    }
                }
                Format::Text => {
                    println!(
                        "N = {}, order = {}, repeats = {}",
                        report.n, report.order, report.repeats
                    );
                    let best = report.theta_ms.iter().cloned().fold(f64::INFINITY, f64::min);
                    println!(
                        "theta route:    {:>6} double-sum terms, best {best:.2} ms",
                        report.theta_terms
                    );
                    match (&report.multisum_work, &report.multisum_ms, &report.multisum_refused) {
                        (Some(work), Some(ms), _) => {
                            let best = ms.iter().cloned().fold(f64::INFINITY, f64::min);
                            println!(
                                "multisum route: {work:>6} enumerated indices, best {best:.2} ms"
                            );
                            println!(
                                "series identical: {}",
                                report.series_identical == Some(true)
                            );
                        }
                        (_, _, Some(reason)) => println!("multisum route refused: {reason}"),
                        _ => {}
                    }
                }
            }
            Ok(EXIT_OK)
        }
    }
}
