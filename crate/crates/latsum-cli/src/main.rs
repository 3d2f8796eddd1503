use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use latsum::fixtures::{check_entry, manifest};
use latsum::genfun::{lattice_sum_value, Mode, Options, Strategy, WeightVector};
use latsum::hierarchy::check_hierarchy;
use latsum::io::{parse_rational_list, parse_weights, NamedArrangement, ResultRecord};
use latsum::lattice::GenericDirection;
use latsum::oracle::convergence_scan;
use latsum::polytope::genfun_via_polytopes;
use latsum::rat::Q;
use latsum::scalar::{cyclotomic_order, ExactRing, NumericRing, DEFAULT_PRECISION};
use latsum::{genfun, Error};

#[derive(Parser)]
#[command(name = "latsum", version, about = "Exact evaluation of lattice sums over hyperplane arrangements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate S(k, y; Λ) and C(k, y; Λ).
    Eval(EvalArgs),
    /// Recompute the bundled table of known values and print pass/fail per row.
    ReproduceExamples(TableArgs),
    /// Run one verification suite.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Same as `verify oracle`.
    OracleCheck(OracleArgs),
    /// Same as `verify polytope`.
    PolytopeCheck(PolytopeArgs),
    /// Same as `verify hierarchy`.
    HierarchyCheck(HierarchyArgs),
}

#[derive(Subcommand)]
enum Suite {
    /// Compare truncated sums Z(N) with the closed form.
    Oracle(OracleArgs),
    /// Compare the polytope assembly of F with the basis sum.
    Polytope(PolytopeArgs),
    /// Check (∏ D_g)F(Λ) = F(Λ ∖ removed).
    Hierarchy(HierarchyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Numeric,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Auto,
    Targeted,
    Full,
}

#[derive(Args)]
struct Input {
    /// Arrangement JSON file.
    #[arg(long, conflicts_with = "fixture", required_unless_present = "fixture")]
    arrangement: Option<PathBuf>,
    /// Bundled arrangement id instead of a file.
    #[arg(long)]
    fixture: Option<String>,
    /// Comma-separated rational coordinates of y (default 0).
    #[arg(long, allow_hyphen_values = true)]
    y: Option<String>,
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    /// Mantissa bits in numeric mode.
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    precision: usize,
    /// Write the result or report here as well as to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    input: Input,
    /// Comma-separated weights, one per functional.
    #[arg(long)]
    k: String,
    #[arg(long, value_enum, default_value = "auto")]
    strategy: StrategyArg,
    /// Comma-separated generic direction φ.
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<String>,
}

#[derive(Args)]
struct TableArgs {
    /// Only rows whose id contains this string.
    #[arg(long)]
    filter: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long)]
    k: String,
    /// Increasing truncation sizes.
    #[arg(long = "N", default_value = "250,500,1000,2000")]
    n: String,
    /// Largest accepted |Z(N) − S| at the last N.
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
}

#[derive(Args)]
struct PolytopeArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, default_value_t = 4)]
    order: u32,
}

#[derive(Args)]
struct HierarchyArgs {
    #[command(flatten)]
    input: Input,
    /// Functionals to remove, by name or position.
    #[arg(long, allow_hyphen_values = true)]
    remove: String,
    #[arg(long, default_value_t = 5)]
    order: u32,
}

enum Failure {
    Lib(Error),
    Io(String),
    Verify(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Verify(_) => 4,
            Failure::Lib(Error::ExcludedPoint(_)) => 2,
            Failure::Lib(Error::NonDivisible { .. }) => 3,
            Failure::Lib(_) => 1,
        }
    }
}

type Outcome = Result<(), Failure>;

impl Input {
    fn load(&self) -> Result<NamedArrangement, Failure> {
        match (&self.arrangement, &self.fixture) {
            (Some(p), _) => {
                let text = std::fs::read_to_string(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
                Ok(NamedArrangement::parse(&text)?)
            }
            (None, Some(id)) => Ok(latsum::fixtures::arrangement(id)?),
            (None, None) => Err(Failure::Io("no arrangement given".into())),
        }
    }

    fn y(&self, rank: usize) -> Result<Vec<Q>, Failure> {
        match &self.y {
            None => Ok(vec![Q::from_integer(0.into()); rank]),
            Some(s) => {
                let y = parse_rational_list(s)?;
                if y.len() != rank {
                    return Err(Error::InvalidInput(format!("y has {} coordinates, rank is {rank}", y.len())).into());
                }
                Ok(y)
            }
        }
    }

    fn mode(&self) -> Mode {
        match self.mode {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Numeric => Mode::Numeric { precision: self.precision },
        }
    }

    fn emit(&self, text: &str) -> Outcome {
        print!("{text}");
        write_out(self.out.as_ref(), text)
    }
}

fn write_out(path: Option<&PathBuf>, text: &str) -> Outcome {
    if let Some(p) = path {
        std::fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn eval(a: &EvalArgs) -> Outcome {
    let arr = a.input.load()?;
    let y = a.input.y(arr.arrangement.rank())?;
    let k = parse_weights(&a.k)?;
    let phi = match &a.phi {
        None => None,
        Some(s) => Some(GenericDirection {
            phi: s.split(',').map(|x| x.trim().parse::<i64>().map_err(|_| Error::Parse(format!("not an integer: {x:?}")))).collect::<Result<_, _>>()?,
        }),
    };
    let strategy = match a.strategy {
        StrategyArg::Auto => Strategy::Auto,
        StrategyArg::Targeted => Strategy::Targeted,
        StrategyArg::Full => Strategy::FullSeries,
    };
    let opts = Options { mode: a.input.mode(), strategy, phi };
    let start = Instant::now();
    let report = lattice_sum_value(&arr.arrangement, &y, &WeightVector::new(k.clone()), &opts)?;
    let record = ResultRecord::new(&report, &k, &y, start.elapsed().as_secs_f64() * 1e3);
    let text = match a.input.format {
        Format::Json => serde_json::to_string_pretty(&record).expect("record serializes") + "\n",
        Format::Csv => format!("{}\n{}\n", ResultRecord::csv_header(), record.csv_row()),
    };
    a.input.emit(&text)
}

fn reproduce(a: &TableArgs) -> Outcome {
    let mut rows = vec![];
    let mut text = String::new();
    let mut failed = 0;
    for e in manifest().iter().filter(|e| a.filter.as_ref().is_none_or(|f| e.id.contains(f.as_str()))) {
        let (pass, got, secs) = match check_entry(e, &Options::default()) {
            Ok(o) => (o.pass && o.seconds <= e.budget_s, o.got, o.seconds),
            Err(err) => (false, format!("error: {err}"), 0.0),
        };
        failed += usize::from(!pass);
        println!("{:<6} {:<24} {:>8.3}s  {}", if pass { "PASS" } else { "FAIL" }, e.id, secs, got);
        rows.push(serde_json::json!({ "id": e.id, "pass": pass, "seconds": secs, "got": got, "expected": e.expected }));
        if !pass {
            println!("       expected {}", e.expected);
        }
    }
    match a.format {
        Format::Json => text.push_str(&(serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n")),
        Format::Csv => {
            text.push_str("id,pass,seconds\n");
            for r in &rows {
                let _ = writeln!(text, "{},{},{:.3}", r["id"].as_str().unwrap_or(""), r["pass"], r["seconds"].as_f64().unwrap_or(0.0));
            }
        }
    }
    write_out(a.out.as_ref(), &text)?;
    println!("{} of {} rows pass", rows.len() - failed, rows.len());
    if failed > 0 {
        return Err(Failure::Verify(format!("{failed} rows failed")));
    }
    Ok(())
}

fn oracle(a: &OracleArgs) -> Outcome {
    let arr = a.input.load()?;
    let y = a.input.y(arr.arrangement.rank())?;
    let k = WeightVector::new(parse_weights(&a.k)?);
    let ns: Vec<u64> = a.n.split(',').map(|x| x.trim().parse::<u64>().map_err(|_| Error::Parse(format!("not a size: {x:?}")))).collect::<Result<_, _>>()?;
    let precision = a.input.precision;
    let opts = Options { mode: a.input.mode(), ..Options::default() };
    let report = lattice_sum_value(&arr.arrangement, &y, &k, &opts)?;
    let target = report.s.to_numeric(precision);
    let rows = convergence_scan(&arr.arrangement, &k, &y, &ns, Some(&target), precision)?;
    let errors: Vec<f64> = rows.iter().map(|r| r.error.unwrap_or(f64::NAN)).collect();
    let monotone = errors.windows(2).all(|w| w[1] < w[0]);
    let last = *errors.last().unwrap_or(&f64::NAN);
    let pass = monotone && last < a.tol;
    println!("S = {}", report.s);
    println!("{:>8} {:>26} {:>26} {:>12} {:>12}", "N", "Re Z(N)", "Im Z(N)", "error", "step");
    for r in &rows {
        println!("{:>8} {:>26.18e} {:>26.18e} {:>12.4e} {:>12.4e}", r.n, r.value.re_f64(), r.value.im_f64(), r.error.unwrap_or(f64::NAN), r.step);
    }
    println!("monotone: {monotone}, final error {last:.3e} (tolerance {:e})", a.tol);
    let text = match a.input.format {
        Format::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|r| serde_json::json!({ "N": r.n, "re": r.value.re_f64(), "im": r.value.im_f64(), "error": r.error, "step": r.step }))
                .collect();
            serde_json::to_string_pretty(&serde_json::json!({ "S": report.s.to_string(), "rows": rows, "monotone": monotone, "pass": pass })).expect("json")
                + "\n"
        }
        Format::Csv => {
            let mut t = String::from("N,re,im,error,step\n");
            for r in &rows {
                let _ = writeln!(t, "{},{:e},{:e},{:e},{:e}", r.n, r.value.re_f64(), r.value.im_f64(), r.error.unwrap_or(f64::NAN), r.step);
            }
            t
        }
    };
    write_out(a.input.out.as_ref(), &text)?;
    verdict(pass, "oracle scan")
}

fn verdict(pass: bool, what: &str) -> Outcome {
    if pass {
        println!("PASS");
        Ok(())
    } else {
        println!("FAIL");
        Err(Failure::Verify(format!("{what} failed")))
    }
}

fn discrepancy_line(d: f64, exact: bool) -> String {
    if exact {
        if d == 0.0 {
            "max discrepancy: 0 (exact)".into()
        } else {
            format!("max discrepancy: {d:e} (exact arithmetic, nonzero)")
        }
    } else {
        format!("max discrepancy: {d:e} (numeric)")
    }
}

fn polytope(a: &PolytopeArgs) -> Outcome {
    let arr = a.input.load()?;
    let y = a.input.y(arr.arrangement.rank())?;
    let lam = &arr.arrangement;
    let phi = lam.choose_phi();
    let (d, cells, exact) = match a.input.mode {
        ModeArg::Exact => {
            let ring = ExactRing::new(cyclotomic_order(lam, lam.bases(), &phi, &y)?);
            let f = genfun::generating_function(&ring, lam, &y, &phi, a.order)?;
            let p = genfun_via_polytopes(&ring, lam, &y, a.order)?;
            let gap = f.sub(&p.series)?;
            (if gap.is_zero() { 0.0 } else { gap.max_magnitude().max(f64::MIN_POSITIVE) }, p.cells, true)
        }
        ModeArg::Numeric => {
            let ring = NumericRing::new(a.input.precision);
            let f = genfun::generating_function(&ring, lam, &y, &phi, a.order)?;
            let p = genfun_via_polytopes(&ring, lam, &y, a.order)?;
            (f.sub(&p.series)?.max_magnitude(), p.cells, false)
        }
    };
    let vertices: usize = cells.iter().map(|c| c.vertices).sum();
    println!("cells: {}, vertices: {vertices}, order: {}", cells.len(), a.order);
    let line = discrepancy_line(d, exact);
    println!("{line}");
    let pass = if exact { d == 0.0 } else { d < 1e-20 };
    let text = serde_json::to_string_pretty(&serde_json::json!({
        "order": a.order,
        "cells": cells.iter().map(|c| serde_json::json!({ "m": c.m, "vertices": c.vertices, "simple": c.simple })).collect::<Vec<_>>(),
        "max_discrepancy": d,
        "exact": exact,
        "pass": pass,
    }))
    .expect("json")
        + "\n";
    write_out(a.input.out.as_ref(), &text)?;
    verdict(pass, "polytope cross-check")
}

fn hierarchy(a: &HierarchyArgs) -> Outcome {
    let arr = a.input.load()?;
    let y = a.input.y(arr.arrangement.rank())?;
    let removed: Vec<usize> = a.remove.split(',').map(|s| arr.resolve(s.trim())).collect::<Result<_, _>>()?;
    let lam = &arr.arrangement;
    let rep = match a.input.mode {
        ModeArg::Exact => {
            let ring = ExactRing::new(cyclotomic_order(lam, lam.bases(), &lam.choose_phi(), &y)?);
            check_hierarchy(&ring, lam, &removed, &y, a.order)?
        }
        ModeArg::Numeric => check_hierarchy(&NumericRing::new(a.input.precision), lam, &removed, &y, a.order)?,
    };
    let names: Vec<&str> = removed.iter().map(|&i| arr.names[i].as_str()).collect();
    println!("removed: {}, summands: {} ({} annihilated), order: {}", names.join(","), rep.summands, rep.vanishing_summands, rep.order);
    println!("{}", discrepancy_line(rep.max_discrepancy, rep.exact));
    let text = serde_json::to_string_pretty(&serde_json::json!({
        "removed": names,
        "order": rep.order,
        "summands": rep.summands,
        "max_discrepancy": rep.max_discrepancy,
        "exact": rep.exact,
        "pass": rep.passed(),
    }))
    .expect("json")
        + "\n";
    write_out(a.input.out.as_ref(), &text)?;
    verdict(rep.passed(), "hierarchy check")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Eval(a) => eval(a),
        Command::ReproduceExamples(a) => reproduce(a),
        Command::Verify { suite: Suite::Oracle(a) } | Command::OracleCheck(a) => oracle(a),
        Command::Verify { suite: Suite::Polytope(a) } | Command::PolytopeCheck(a) => polytope(a),
        Command::Verify { suite: Suite::Hierarchy(a) } | Command::HierarchyCheck(a) => hierarchy(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Lib(e) => eprintln!("error: {e}"),
                Failure::Io(m) | Failure::Verify(m) => eprintln!("error: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}
