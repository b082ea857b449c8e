// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use quanfuzz_core::campaign::{self, BenchConfig, Document};
use quanfuzz_core::interpreter::coverage_with;
use quanfuzz_core::{extract_sensitive, fuzz_main, matrix_io, parse, rng, Execution, FuzzConfig, Program, StateVector};

#[derive(Parser)]
#[command(name = "quanfuzz", version, about = "Greybox fuzzer for quantum programs")]
struct Cli {
    /// Run every stage on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct SeedArg {
    /// Random seed; falls back to QUANFUZZ_SEED, then 0.
    #[arg(long, env = "QUANFUZZ_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Print the sensitive branches of a program.
    Analyze { program: PathBuf },
    /// Execute a program repeatedly and report branch coverage.
    Run {
        program: PathBuf,
        /// Input state file.
        #[arg(long, conflicts_with = "basis")]
        matrix: Option<PathBuf>,
        /// Start from this computational basis state.
        #[arg(long)]
        basis: Option<u64>,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Search for an input state that drives a sensitive branch.
    Fuzz(FuzzArgs),
    /// Run fuzz-vs-random campaigns over the generated benchmarks.
    Bench {
        #[arg(long, default_value_t = campaign::MIN_BENCH_QUBITS)]
        min_qubits: usize,
        #[arg(long, default_value_t = campaign::MAX_BENCH_QUBITS)]
        max_qubits: usize,
        #[arg(long, default_value_t = 5)]
        repeats: usize,
        /// Seed for the benchmark target values; 0 guards value 5.
        #[arg(long, default_value_t = 0)]
        benchmark_seed: u64,
        #[arg(long, default_value_t = 50)]
        max_iters: usize,
        #[arg(long)]
        max_candidates: Option<usize>,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Summarize a campaign directory into trace.csv and tables.md.
    Report { dir: PathBuf },
}

#[derive(Args)]
struct FuzzArgs {
    program: PathBuf,
    /// Sensitive site to target.
    #[arg(long, default_value_t = 0)]
    site: usize,
    /// Stop once the target branch probability reaches this value.
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long, default_value_t = 6)]
    capacity: usize,
    #[arg(long, default_value_t = 50)]
    max_iters: usize,
    #[arg(long)]
    max_candidates: Option<usize>,
    /// Starting state file; defaults to |0...0>.
    #[arg(long)]
    matrix: Option<PathBuf>,
    #[command(flatten)]
    seed: SeedArg,
    /// Write the per-iteration trace as CSV.
    #[arg(long)]
    emit_trace: Option<PathBuf>,
    /// Write the best state found as a matrix file.
    #[arg(long)]
    emit_matrix: Option<PathBuf>,
}

fn load_program(path: &Path) -> Result<Program> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse(&text).with_context(|| format!("{}", path.display()))
}

fn load_matrix(path: &Path) -> Result<StateVector> {
    matrix_io::read_matrix(path).with_context(|| format!("{}", path.display()))
}

fn print_document<T: serde::Serialize>(kind: &str, body: T) -> Result<()> {
    let text = serde_json::to_string_pretty(&Document::new(kind, body))?;
    emit(&text)
}

/// Writes to stdout, treating a closed pipe as success.
fn emit(text: &str) -> Result<()> {
    let mut out = io::stdout().lock();
    match writeln!(out, "{text}").and_then(|()| out.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn register_width(program: &Program) -> Result<usize> {
    match extract_sensitive(program).ket {
        Some(k) => Ok(k.width),
        None => bail!("program declares no quantum register"),
    }
}

fn fuzz(args: FuzzArgs, execution: Execution) -> Result<ExitCode> {
    let program = load_program(&args.program)?;
    let report = extract_sensitive(&program);
    let Some(site) = report.site(args.site) else {
        bail!(
            "program has {} sensitive site(s), no site {}",
            report.sites.len(),
            args.site
        );
    };
    let initial = args.matrix.as_deref().map(load_matrix).transpose()?;
    let cfg = FuzzConfig {
        p: args.p,
        capacity: args.capacity,
        max_iterations: args.max_iters,
        seed: args.seed.seed,
        max_candidates: args.max_candidates,
        initial,
        execution,
        ..FuzzConfig::default()
    };
    let result = fuzz_main(&program, site, &cfg)?;

    if let Some(path) = &args.emit_trace {
        fs::write(path, campaign::fuzz_trace_csv(&result)?).with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = &args.emit_matrix {
        matrix_io::write_matrix(path, &result.best.state).with_context(|| format!("writing {}", path.display()))?;
    }
    let converged = result.converged;
    print_document("fuzz-result", &result)?;
    Ok(if converged {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    let execution = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    match cli.command {
        Command::Analyze { program } => {
            print_document("sensitivity-report", extract_sensitive(&load_program(&program)?))?;
        }
        Command::Run {
            program,
            matrix,
            basis,
            trials,
            seed,
        } => {
            if trials == 0 {
                bail!("--trials must be at least 1");
            }
            let program = load_program(&program)?;
            let init = match matrix {
                Some(path) => load_matrix(&path)?,
                None => StateVector::basis(register_width(&program)?, basis.unwrap_or(0))?,
            };
            let report = coverage_with(&program, &init, trials, &mut rng::seeded(seed.seed), execution)?;
            print_document("coverage-report", report)?;
        }
        Command::Fuzz(args) => return fuzz(args, execution),
        Command::Bench {
            min_qubits,
            max_qubits,
            repeats,
            benchmark_seed,
            max_iters,
            max_candidates,
            seed,
            out,
        } => {
            if min_qubits > max_qubits {
                bail!("--min-qubits must not exceed --max-qubits");
            }
            let cfg = BenchConfig {
                min_qubits,
                max_qubits,
                repeats,
                seed: seed.seed,
                benchmark_seed,
                fuzz: FuzzConfig {
                    max_iterations: max_iters,
                    max_candidates,
                    ..FuzzConfig::default()
                },
                execution,
                ..BenchConfig::default()
            };
            let reports = campaign::bench(&cfg, &out)?;
            for r in &reports {
                emit(&format!(
                    "{} qubits={} converged={}/{} probability={:.3} baseline={:.3}",
                    r.benchmark,
                    r.n_qubits,
                    r.summary.converged_repeats,
                    r.repeats.len(),
                    r.summary.fuzz_mean_weight,
                    r.summary.baseline_mean_weight
                ))?;
            }
        }
        Command::Report { dir } => {
            let out = campaign::report(&dir)?;
            emit(out.tables.trim_end())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
