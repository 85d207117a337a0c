//! `lowss`: generate, solve, verify and benchmark Subset Sum instances.
//!
//! `solve` exits 0 on NO, 1 on YES and 2 on any error. `verify` exits 3 when
//! an answer contradicts the algorithm's guarantee.

mod algo;
mod bench;
mod gen;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use lowss::{Eps, SeedPack, SolveOutcome};

use algo::{Algo, Params};

#[derive(Parser)]
#[command(name = "lowss", version, about = "Low-space Subset Sum solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random instance.
    Gen(GenArgs),
    /// Decide one instance and print a CSV row.
    Solve(SolveArgs),
    /// Compare an algorithm with the dynamic program on a corpus.
    Verify(VerifyArgs),
    /// Sweep a grid of sizes and algorithms on planted instances.
    Bench(BenchArgs),
}

fn parse_eps(s: &str) -> Result<Eps, String> {
    Eps::parse(s).map_err(|e| e.to_string())
}

#[derive(Args)]
struct AlgoArgs {
    #[arg(long, value_enum)]
    algo: Algo,
    /// Target batch count (tradeoff only).
    #[arg(long)]
    k: Option<u64>,
    /// Rational `num/den` (rand-eps, default 1/2; wssap, required).
    #[arg(long, value_parser = parse_eps)]
    eps: Option<Eps>,
    /// Master seed for all randomness.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl AlgoArgs {
    fn params(&self) -> Result<Params> {
        Params::new(self.algo, self.k, self.eps)
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    t_max: u64,
    /// Items are drawn from `[1, ceil(density * t_max)]`.
    #[arg(long, default_value_t = 1.0)]
    density: f64,
    /// Set the target to the sum of a random subset.
    #[arg(long)]
    planted: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output if absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    algo: AlgoArgs,
    /// Instance file, or `-` for standard input.
    input: PathBuf,
    /// Print the CSV header first.
    #[arg(long)]
    header: bool,
    /// Report a wall time of 0 so the output is reproducible.
    #[arg(long)]
    no_timing: bool,
    /// Print the solver's parameter choices to standard error.
    #[arg(short, long)]
    verbose: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    algo: AlgoArgs,
    /// Instance files or directories of them.
    #[arg(required = true)]
    corpus: Vec<PathBuf>,
    /// Runs per instance, each with its own seed.
    #[arg(long, default_value_t = 1)]
    reps: u64,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    algos: Vec<Algo>,
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    t: Vec<u64>,
    /// Batch counts for tradeoff.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    k: Vec<u64>,
    /// Values for rand-eps and wssap.
    #[arg(long, value_delimiter = ',', value_parser = parse_eps)]
    eps: Vec<Eps>,
    #[arg(long, default_value_t = 3)]
    reps: u64,
    #[arg(long, default_value_t = 1.0)]
    density: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report a wall time of 0 so the output is reproducible.
    #[arg(long)]
    no_timing: bool,
    /// Write the per-cell medians here instead of after the rows.
    #[arg(long)]
    summary: Option<PathBuf>,
}

fn write_out(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => std::io::stdout().write_all(text.as_bytes()).context("writing standard output"),
    }
}

fn cmd_gen(a: &GenArgs) -> Result<ExitCode> {
    anyhow::ensure!(a.t_max >= 1, "--t-max must be at least 1");
    anyhow::ensure!(a.density > 0.0 && a.density <= 1.0, "--density must lie in (0, 1]");
    let spec = gen::GenSpec { n: a.n, t_max: a.t_max, density: a.density, planted: a.planted };
    write_out(a.output.as_ref(), &gen::generate(&spec, a.seed).to_text())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_solve(a: &SolveArgs) -> Result<ExitCode> {
    let params = a.algo.params()?;
    let inst = verify::read_instance(&a.input)?;
    let mut out: SolveOutcome = params.run(&inst, &SeedPack::new(a.algo.seed))?;
    if a.no_timing {
        out.wall_time = Duration::ZERO;
    }
    if a.verbose {
        for n in &out.notes {
            eprintln!("{n}");
        }
    }
    let mut text = String::new();
    if a.header {
        text.push_str(SolveOutcome::CSV_HEADER);
        text.push('\n');
    }
    text.push_str(&params.row(&inst, &out));
    text.push('\n');
    write_out(None, &text)?;
    Ok(ExitCode::from(out.answer.is_yes() as u8))
}

fn cmd_verify(a: &VerifyArgs) -> Result<ExitCode> {
    let params = a.algo.params()?;
    let corpus = verify::load_corpus(&a.corpus)?;
    let report = verify::verify(&params, &corpus, a.algo.seed, a.reps)?;
    write_out(None, &report.render(&params))?;
    Ok(if report.failures.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(3) })
}

fn cmd_bench(a: &BenchArgs) -> Result<ExitCode> {
    let grid = bench::Grid {
        algos: a.algos.clone(),
        ns: a.n.clone(),
        ts: a.t.clone(),
        ks: a.k.clone(),
        epss: a.eps.clone(),
        reps: a.reps.max(1),
        density: a.density,
        seed: a.seed,
        timing: !a.no_timing,
    };
    let out = bench::run(&grid)?;
    let mut rows = format!("{}\n", SolveOutcome::CSV_HEADER);
    for r in &out.rows {
        rows.push_str(r);
        rows.push('\n');
    }
    let mut medians = format!("{}\n", bench::MEDIAN_HEADER);
    for m in &out.medians {
        medians.push_str(m);
        medians.push('\n');
    }
    match &a.summary {
        Some(p) => {
            write_out(None, &rows)?;
            write_out(Some(p), &medians)?;
        }
        None => write_out(None, &format!("{rows}\n{medians}"))?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match &cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => cmd_bench(a),
    };
    r.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::from(2)
    })
}
