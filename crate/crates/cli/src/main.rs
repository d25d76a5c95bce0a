//! `kbip`: build, verify and analyze acyclic edge-colorings of `K_{n,n}`.
//!
//! Every command writes JSON artifacts to files and a short summary to
//! stdout. Exit codes: 0 success, 1 mathematical failure (the artifact says
//! why), 2 invalid arguments or malformed input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use kbip_core::analysis::{self, CaseReport};
use kbip_core::coloring::{self, Certificate};
use kbip_core::factorization::{
    cyclic_factorization, p_squared_factorization, validate_p1f_pairs, validate_p1f_with,
    Factorization, P1fMode, P1fReport,
};
use kbip_core::verify::{self, exhaustive_lower_bound};
use kbip_core::{Error, Execution, FieldContext};

/// Pair checks cost `O(n)` each; beyond this many label visits the factorize
/// command falls back to spot checks unless `--exhaustive` is given.
const EXHAUSTIVE_BUDGET: u64 = 2_000_000_000;

#[derive(Parser)]
#[command(
    name = "kbip",
    version,
    about = "Acyclic edge-colorings of complete bipartite graphs"
)]
struct Cli {
    /// Worker threads for parallel sections (default: available parallelism).
    #[arg(long, global = true, env = "KBIP_THREADS", value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a perfect 1-factorization and check its pairwise unions.
    Factorize(FactorizeArgs),
    /// Build a Δ+2 coloring and write its certificate.
    Color(ColorArgs),
    /// Check a certificate for properness and acyclicity.
    Verify(VerifyArgs),
    /// Cycle structure of π⁻¹∘π_(a,b) for the p² family.
    Analyze(AnalyzeArgs),
    /// Exhaustive search for an acyclic proper coloring of a tiny K_{n,n}.
    Lowerbound(LowerboundArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Cyclic,
    #[value(name = "p-squared", alias = "p_squared")]
    PSquared,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Kpp,
    Kp2,
}

#[derive(Args)]
struct FactorizeArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Side size for the cyclic family (odd, ≥ 3).
    #[arg(long)]
    n: Option<usize>,
    /// Prime for the p² family.
    #[arg(long)]
    p: Option<u32>,
    /// Generator override for the p² family.
    #[arg(long)]
    x: Option<u32>,
    /// Factorization JSON.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Pairwise-union report JSON.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Stop at the first failing pair.
    #[arg(long)]
    fast: bool,
    /// Check every pair even when that is expensive.
    #[arg(long)]
    exhaustive: bool,
}

#[derive(Args)]
struct ColorArgs {
    #[arg(long, value_enum)]
    target: Target,
    #[arg(long)]
    p: u32,
    /// Generator of Z_p^* (default: the smallest one).
    #[arg(long)]
    x: Option<u32>,
    /// Allow p = 3 for kp2; the result is not acyclic.
    #[arg(long)]
    allow_p3: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    cert: PathBuf,
    /// Verification report JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    x: Option<u32>,
    /// Every (a, b) in Z_p × Z_p.
    #[arg(long, conflicts_with_all = ["a", "b"])]
    all: bool,
    #[arg(long, required_unless_present = "all", requires = "b")]
    a: Option<u32>,
    #[arg(long, required_unless_present = "all", requires = "a")]
    b: Option<u32>,
    /// Case report list JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LowerboundArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    colors: u32,
    /// Result JSON (witness edges when one exists).
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Why a command stopped early.
enum Failure {
    /// Mathematical failure, exit 1.
    Check(String),
    /// Bad arguments or input, exit 2.
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Structure { .. }
            | Error::TransversalCondition { .. }
            | Error::InvalidFactorization(_) => Failure::Check(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads(cli.threads) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let result = match cli.command {
        Command::Factorize(args) => factorize(args),
        Command::Color(args) => color(args),
        Command::Verify(args) => verify_cert(args),
        Command::Analyze(args) => analyze(args),
        Command::Lowerbound(args) => lowerbound(args),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

#[cfg(feature = "parallel")]
fn configure_threads(threads: Option<u16>) -> std::result::Result<(), String> {
    match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t as usize)
            .build_global()
            .map_err(|e| e.to_string()),
        None => Ok(()),
    }
}

#[cfg(not(feature = "parallel"))]
fn configure_threads(_threads: Option<u16>) -> std::result::Result<(), String> {
    Ok(())
}

fn usage_error(kind: clap::error::ErrorKind, msg: &str) -> ! {
    Cli::command().error(kind, msg).exit()
}

fn write_json(path: &Path, value: &impl Serialize) -> std::result::Result<(), Failure> {
    let mut text = serde_json::to_string(value).map_err(|e| Failure::Input(e.to_string()))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct FactorizeReport<'a> {
    mode: &'static str,
    #[serde(flatten)]
    report: &'a P1fReport,
}

fn factorize(args: FactorizeArgs) -> Outcome {
    use clap::error::ErrorKind;
    let f: Factorization = match args.family {
        Family::Cyclic => {
            if args.p.is_some() || args.x.is_some() {
                usage_error(
                    ErrorKind::ArgumentConflict,
                    "--p and --x apply to --family p-squared only",
                );
            }
            let Some(n) = args.n else {
                usage_error(
                    ErrorKind::MissingRequiredArgument,
                    "--family cyclic requires --n",
                );
            };
            cyclic_factorization(n)?
        }
        Family::PSquared => {
            if args.n.is_some() {
                usage_error(
                    ErrorKind::ArgumentConflict,
                    "--n applies to --family cyclic only; use --p",
                );
            }
            let Some(p) = args.p else {
                usage_error(
                    ErrorKind::MissingRequiredArgument,
                    "--family p-squared requires --p",
                );
            };
            p_squared_factorization(&FieldContext::new(p, args.x)?)?
        }
    };
    let n = f.n();
    let cost = (n as u64) * (n as u64) * (n as u64 - 1) / 2;
    let mode = if args.fast {
        P1fMode::Fast
    } else {
        P1fMode::Full
    };
    let (label, report) = if args.exhaustive || cost <= EXHAUSTIVE_BUDGET {
        (
            "exhaustive",
            validate_p1f_with(&f, mode, Execution::Parallel),
        )
    } else {
        // Every pair with factor 0 and every pair of neighbours.
        let pairs: Vec<(usize, usize)> = (1..n)
            .map(|j| (0, j))
            .chain((1..n - 1).map(|i| (i, i + 1)))
            .collect();
        ("spot", validate_p1f_pairs(&f, &pairs))
    };
    if let Some(path) = &args.out {
        write_json(path, &f.to_json_repr())?;
    }
    if let Some(path) = &args.report {
        write_json(
            path,
            &FactorizeReport {
                mode: label,
                report: &report,
            },
        )?;
    }
    println!(
        "{} factorization of K_{{{n},{n}}}: {} of {} pairs checked ({label}), {}",
        f.kind().as_str(),
        report.pairs_checked,
        n * (n - 1) / 2,
        if report.ok {
            "every union is a Hamiltonian cycle".to_string()
        } else {
            format!("{} failing pairs", report.failing_pairs.len())
        }
    );
    if let Some(first) = report.failing_pairs.first() {
        println!(
            "first failing pair ({}, {}): cycle lengths {:?}",
            first.i, first.j, first.cycle_lengths
        );
    }
    Ok(report.ok)
}

fn color(args: ColorArgs) -> Outcome {
    let ctx = FieldContext::new(args.p, args.x)?;
    let (name, c) = match args.target {
        Target::Kpp => ("kpp", coloring::color_kpp(&ctx)?),
        Target::Kp2 => ("kp2", coloring::color_kp2(&ctx, args.allow_p3)?),
    };
    write_json(&args.out, &Certificate::new(&c, name, Some(&ctx)))?;
    println!(
        "{name}: K_{{{n},{n}}} with {} colors (p = {}, x = {}), {} edges written to {}",
        c.num_colors(),
        ctx.p(),
        ctx.x(),
        c.raw().len(),
        args.out.display(),
        n = c.n(),
    );
    Ok(true)
}

fn verify_cert(args: VerifyArgs) -> Outcome {
    let text = fs::read_to_string(&args.cert)
        .map_err(|e| Failure::Input(format!("{}: {e}", args.cert.display())))?;
    let cert: Certificate = serde_json::from_str(&text)
        .map_err(|e| Failure::Input(format!("malformed certificate: {e}")))?;
    let c = cert.to_coloring()?;
    let report = verify::verify_with(&c, Execution::Parallel);
    if let Some(path) = &args.out {
        write_json(path, &report)?;
    }
    let n = c.n();
    if !report.proper {
        let first = &report.proper_violations[0];
        println!(
            "K_{{{n},{n}}}: NOT proper, {} clashes (first: {:?} vertex {} has two edges of color {})",
            report.proper_violations.len(),
            first.side,
            first.vertex,
            first.color
        );
    } else if let Some(w) = &report.bichromatic_witness {
        println!(
            "K_{{{n},{n}}}: proper but NOT acyclic; colors {} and {} form a {}-cycle: {:?}",
            w.colors[0],
            w.colors[1],
            w.edges.len(),
            w.edges
        );
    } else {
        println!(
            "K_{{{n},{n}}}: proper and acyclic with {} colors ({} color pairs checked)",
            c.num_colors(),
            report.pairs_checked
        );
    }
    Ok(report.proper && report.acyclic)
}

fn analyze(args: AnalyzeArgs) -> Outcome {
    let ctx = FieldContext::new(args.p, args.x)?;
    let reports: Vec<CaseReport> = if args.all {
        analysis::survey_with(&ctx, Execution::Parallel)?
    } else {
        let (a, b) = (args.a.unwrap_or_default(), args.b.unwrap_or_default());
        if a >= ctx.p() || b >= ctx.p() {
            return Err(Failure::Input(format!(
                "a and b must be below p = {}",
                ctx.p()
            )));
        }
        vec![analysis::case_report(&ctx, a, b)?]
    };
    if let Some(path) = &args.out {
        write_json(path, &reports)?;
    }
    for r in &reports {
        let t = r.t.map(|t| format!(", t = {t}")).unwrap_or_default();
        println!(
            "({}, {}) {:?}: cycle lengths {:?}{t}",
            r.a,
            r.b,
            r.case_kind,
            r.cycle_lengths()
        );
    }
    println!(
        "{} case reports passed (p = {}, x = {})",
        reports.len(),
        ctx.p(),
        ctx.x()
    );
    Ok(true)
}

#[derive(Serialize)]
struct LowerboundReport {
    n: usize,
    colors: u32,
    exists: bool,
    nodes: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<[u32; 3]>>,
}

fn lowerbound(args: LowerboundArgs) -> Outcome {
    let r = exhaustive_lower_bound(args.n, args.colors)?;
    let witness = r.witness.as_ref().map(|w| w.edges().collect::<Vec<_>>());
    if let Some(path) = &args.out {
        let out = LowerboundReport {
            n: r.n,
            colors: r.colors,
            exists: r.exists,
            nodes: r.nodes,
            witness: witness.clone(),
        };
        write_json(path, &out)?;
    }
    let n = r.n;
    match witness {
        None => println!(
            "K_{{{n},{n}}} with {} colors: no acyclic proper coloring exists ({} nodes searched)",
            r.colors, r.nodes
        ),
        Some(edges) => println!(
            "K_{{{n},{n}}} with {} colors: acyclic proper coloring found: {edges:?}",
            r.colors
        ),
    }
    Ok(true)
}
