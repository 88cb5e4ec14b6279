//! The `probit` command-line tool.
//!
//! [`run`] takes its streams as arguments so it can be driven from tests
//! without spawning a process. Exit codes: 0 success, 1 computation or
//! verification failure, 2 usage error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use probit_core::fmt::fmt_f64;
use probit_core::golden::{format_p_line, render_c_table};
use probit_core::{
    approx_eval, c_via_derivative_recurrence, coeffs_via_matrices, error_scan, lambert_w0,
    lambert_w0_series, moment, pn_via_nested, poly_next_triple_sum, poly_sequence, probit_hybrid,
    probit_reference, s_derivative_n, s_series, series_coeff_c, verify, ApproxKind, EvalConfig,
    IntPolynomial,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

const USAGE_HINT: &str =
    "usage: probit <eval|w|polys|coeffs|scan|moments|verify|bench> [OPTIONS]; see 'probit --help'";

#[derive(Debug, Parser)]
#[command(name = "probit", version, about = "Inverse normal CDF toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate S(p), or its n-th derivative.
    Eval {
        #[arg(
            long,
            conflicts_with = "stdin",
            required_unless_present = "stdin",
            allow_negative_numbers = true
        )]
        p: Option<f64>,
        /// Read one probability per line.
        #[arg(long)]
        stdin: bool,
        #[arg(long, value_enum, default_value_t = Method::Hybrid)]
        method: Method,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        deriv: Option<u32>,
    },
    /// Principal-branch Lambert W.
    W {
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        /// Sum this many terms of the power series instead of iterating.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        series: Option<u32>,
    },
    /// Print P_0..P_max as `n<TAB>c0,c1,...`.
    Polys {
        #[arg(long)]
        max: usize,
        #[arg(long, value_enum, default_value_t = PolyRoute::Recurrence)]
        route: PolyRoute,
    },
    /// Print the odd C_n up to max as `n<TAB>C_n`.
    Coeffs {
        #[arg(long)]
        max: usize,
        #[arg(long, value_enum, default_value_t = CoeffRoute::Poly)]
        route: CoeffRoute,
    },
    /// Write the g0..g3 error scan as CSV.
    Scan {
        #[arg(long)]
        points: usize,
        #[arg(long)]
        min: f64,
        #[arg(long)]
        max: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Gaussian moments as CSV.
    Moments {
        #[arg(long)]
        max: usize,
    },
    /// Run every identity check.
    Verify,
    /// Time the evaluators over a uniform interior grid.
    Bench {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1000..))]
        points: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Hybrid,
    Series,
    Reference,
    G0,
    G1,
    G2,
    G3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolyRoute {
    Recurrence,
    Matrix,
    Triple,
    Nested,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CoeffRoute {
    Poly,
    Derivative,
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<probit_core::Error> for Failure {
    fn from(e: probit_core::Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

/// Parses `args` (including the program name) and executes the command.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn BufRead,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = write!(stdout, "{}", e.render());
            return EXIT_OK;
        }
        Err(e) => {
            let rendered = e.render().to_string();
            let first = rendered.lines().next().unwrap_or("invalid arguments");
            let _ = writeln!(stderr, "{first}");
            let _ = writeln!(stderr, "{USAGE_HINT}");
            return EXIT_USAGE;
        }
    };
    match dispatch(cli.command, stdin, stdout) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            let _ = writeln!(stderr, "{USAGE_HINT}");
            EXIT_USAGE
        }
        Err(Failure::Compute(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_FAILURE
        }
    }
}

fn dispatch(command: Command, stdin: &mut dyn BufRead, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Eval {
            p,
            stdin: batch,
            method,
            deriv,
        } => {
            if deriv.is_some() && !matches!(method, Method::Hybrid | Method::Reference) {
                return Err(Failure::Usage(
                    "--deriv works with --method hybrid or reference".into(),
                ));
            }
            let eval = |p: f64| -> Result<f64, probit_core::Error> {
                match deriv {
                    Some(n) => s_derivative_n(p, n as usize),
                    None => eval_method(method, p),
                }
            };
            match p {
                Some(p) => writeln!(out, "{}", fmt_f64(eval(p)?))?,
                None if batch => {
                    let mut buf = String::new();
                    for (i, line) in stdin.lines().enumerate() {
                        let line = line?;
                        let text = line.trim();
                        if text.is_empty() {
                            continue;
                        }
                        let p: f64 = text.parse().map_err(|_| {
                            Failure::Compute(format!("line {}: not a number: {text:?}", i + 1))
                        })?;
                        let v = eval(p)
                            .map_err(|e| Failure::Compute(format!("line {}: {e}", i + 1)))?;
                        let _ = writeln!(buf, "{}", fmt_f64(v));
                    }
                    out.write_all(buf.as_bytes())?;
                }
                None => unreachable!("clap requires --p or --stdin"),
            }
        }
        Command::W { x, series } => {
            let value = match series {
                Some(terms) => lambert_w0_series(x, terms as usize)?,
                None => lambert_w0(x)?.value,
            };
            writeln!(out, "{}", fmt_f64(value))?;
        }
        Command::Polys { max, route } => {
            let seq = poly_sequence(max);
            let mut text = String::new();
            for n in 0..=max {
                let p = match route {
                    PolyRoute::Recurrence => seq[n].clone(),
                    PolyRoute::Matrix => IntPolynomial::new(coeffs_via_matrices(n)),
                    PolyRoute::Triple if n == 0 => seq[0].clone(),
                    PolyRoute::Triple => poly_next_triple_sum(&seq[..n])?,
                    PolyRoute::Nested => pn_via_nested(n)?,
                };
                text.push_str(&format_p_line(n, &p));
                text.push('\n');
            }
            out.write_all(text.as_bytes())?;
        }
        Command::Coeffs { max, route } => {
            let table = match route {
                CoeffRoute::Poly => series_coeff_c(max),
                CoeffRoute::Derivative => c_via_derivative_recurrence(max),
            };
            out.write_all(render_c_table(&table).as_bytes())?;
        }
        Command::Scan {
            points,
            min,
            max,
            out: path,
        } => {
            let scan = error_scan(points, min, max)?;
            fs::write(&path, scan.to_csv())?;
            let e = scan.max_error;
            writeln!(
                out,
                "rows={} max_e0={} max_e1={} max_e2={} max_e3={}",
                scan.rows.len(),
                fmt_f64(e[0]),
                fmt_f64(e[1]),
                fmt_f64(e[2]),
                fmt_f64(e[3])
            )?;
        }
        Command::Moments { max } => {
            let mut text = String::from("n,closed_form,quadrature,paper_formula\n");
            for n in 0..=max {
                let m = moment(n)?;
                let _ = writeln!(
                    text,
                    "{},{},{},{}",
                    m.n,
                    fmt_f64(m.closed_form),
                    fmt_f64(m.quadrature),
                    fmt_f64(m.paper_formula)
                );
            }
            out.write_all(text.as_bytes())?;
        }
        Command::Verify => {
            let checks = verify::run_all()?;
            let failed = checks.iter().filter(|c| !c.passed).count();
            let mut text = String::new();
            for c in &checks {
                let _ = writeln!(text, "{c}");
            }
            let _ = writeln!(
                text,
                "{} checks, {} passed, {failed} failed",
                checks.len(),
                checks.len() - failed
            );
            out.write_all(text.as_bytes())?;
            return Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILURE });
        }
        Command::Bench { points } => {
            let rows = bench(points as usize)?;
            let mut text = String::from("method,points,median_ns_per_call,checksum\n");
            for r in rows {
                let _ = writeln!(
                    text,
                    "{},{},{},{}",
                    r.method,
                    r.points,
                    fmt_f64(r.median_ns_per_call),
                    fmt_f64(r.checksum)
                );
            }
            out.write_all(text.as_bytes())?;
        }
    }
    Ok(EXIT_OK)
}

fn eval_method(method: Method, p: f64) -> Result<f64, probit_core::Error> {
    let cfg = EvalConfig::default();
    match method {
        Method::Hybrid => probit_hybrid(p, &cfg),
        Method::Series => s_series(p, &cfg).map(|s| s.value),
        Method::Reference => probit_reference(p).map(|r| r.value),
        Method::G0 => approx_eval(ApproxKind::G0, p),
        Method::G1 => approx_eval(ApproxKind::G1, p),
        Method::G2 => approx_eval(ApproxKind::G2, p),
        Method::G3 => approx_eval(ApproxKind::G3, p),
    }
}

/// One line of the `bench` report.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub method: &'static str,
    pub points: usize,
    pub median_ns_per_call: f64,
    /// Sum of all outputs over the grid; identical across runs.
    pub checksum: f64,
}

const BENCH_REPS: usize = 5;

type Evaluator = Box<dyn Fn(f64) -> Result<f64, probit_core::Error>>;

/// Times hybrid, reference, g2 and g3 on `i/(points+1)`, reporting the
/// median of [`BENCH_REPS`] passes.
pub fn bench(points: usize) -> Result<Vec<BenchRow>, probit_core::Error> {
    let grid: Vec<f64> = (1..=points)
        .map(|i| i as f64 / (points + 1) as f64)
        .collect();
    let cfg = EvalConfig::default();
    let methods: [(&'static str, Evaluator); 4] = [
        ("hybrid", Box::new(move |p| probit_hybrid(p, &cfg))),
        (
            "reference",
            Box::new(|p| probit_reference(p).map(|r| r.value)),
        ),
        ("g2", Box::new(|p| approx_eval(ApproxKind::G2, p))),
        ("g3", Box::new(|p| approx_eval(ApproxKind::G3, p))),
    ];
    let mut rows = Vec::with_capacity(methods.len());
    for (method, f) in &methods {
        let mut times = Vec::with_capacity(BENCH_REPS);
        let mut checksum = 0.0;
        for _ in 0..BENCH_REPS {
            let start = Instant::now();
            let mut sum = 0.0;
            for &p in &grid {
                sum += std::hint::black_box(f(std::hint::black_box(p))?);
            }
            times.push(start.elapsed().as_nanos() as f64 / points as f64);
            checksum = sum;
        }
        times.sort_by(f64::total_cmp);
        rows.push(BenchRow {
            method,
            points,
            median_ns_per_call: times[BENCH_REPS / 2],
            checksum,
        });
    }
    Ok(rows)
}
