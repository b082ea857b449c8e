// SPDX-License-Identifier: Apache-2.0

//! Benchmark generation, fuzz-vs-random campaigns and report emission.
//!
//! Benchmarks `QB_01`..`QB_07` are single-register programs of 2..8 qubits:
//! declare, `Mix`, guard a division by zero behind one measurement, print.
//! A campaign runs the fuzzer and an evaluation-matched random baseline a
//! number of times per benchmark and measures sampled branch coverage with
//! both the default `|0…0⟩` input and the fuzzed one.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::extract_sensitive;
use crate::dsl::{self, DslError, Program};
use crate::fuzzer::{fuzz_main, random_baseline_with, FuzzConfig, FuzzError, FuzzResult, Lineage};
use crate::interpreter::{coverage_with, CoverageReport, ExecError};
use crate::math::{GateKind, StateVector};
use crate::par::{self, Execution};
use crate::rng;

pub const SCHEMA_VERSION: u32 = 1;
pub const MIN_BENCH_QUBITS: usize = 2;
pub const MAX_BENCH_QUBITS: usize = 8;
pub const TRACE_FILE: &str = "trace.csv";
pub const TABLES_FILE: &str = "tables.md";
pub const SUMMARY_FILE: &str = "summary.csv";

#[derive(Debug, Error)]
pub enum CampaignError {
    #[error("benchmark width must be between {MIN_BENCH_QUBITS} and {MAX_BENCH_QUBITS}, got {0}")]
    BadWidth(usize),
    #[error("benchmark {0} has no sensitive site")]
    NoSite(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("no campaign reports found in {0}")]
    NoReports(PathBuf),
    #[error("{path}: unsupported schema version {found}")]
    Schema { path: PathBuf, found: u32 },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Dsl(#[from] DslError),
    #[error(transparent)]
    Fuzz(#[from] FuzzError),
    #[error(transparent)]
    Exec(#[from] ExecError),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CampaignError + '_ {
    move |source| CampaignError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Versioned wrapper for every JSON document the tool emits.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Document<T> {
    pub schema_version: u32,
    pub kind: String,
    #[serde(flatten)]
    pub body: T,
}

impl<T> Document<T> {
    pub fn new(kind: &str, body: T) -> Self {
        Document {
            schema_version: SCHEMA_VERSION,
            kind: kind.to_string(),
            body,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkSpec {
    pub id: String,
    pub n_qubits: usize,
    pub target_value: u64,
    pub program: Program,
}

impl BenchmarkSpec {
    pub fn source(&self) -> String {
        dsl::pretty_print(&self.program)
    }
}

pub fn benchmark_id(n_qubits: usize) -> String {
    format!("QB_{:02}", n_qubits - 1)
}

/// Source text of the benchmark with `n` qubits guarding `target`.
pub fn benchmark_source(n_qubits: usize, target: u64) -> String {
    format!(
        "procedure example(){{
    qureg q[{n_qubits}];
    Mix(q);
    if (measure(q) == {target}) {{
        print \"crash\";
        int i = 1 / 0;
    }}
    print \"safe\";
}}
"
    )
}

/// Benchmark for `n` qubits. Seed 0 guards `5 mod 2^n`; any other seed picks
/// the target value pseudo-randomly from `(n, seed)`.
pub fn gen_benchmark(n_qubits: usize, seed: u64) -> Result<BenchmarkSpec, CampaignError> {
    if !(MIN_BENCH_QUBITS..=MAX_BENCH_QUBITS).contains(&n_qubits) {
        return Err(CampaignError::BadWidth(n_qubits));
    }
    let dim = 1u64 << n_qubits;
    let target_value = if seed == 0 {
        5 % dim
    } else {
        rng::derive_seed(seed, n_qubits as u64) % dim
    };
    let program = dsl::parse(&benchmark_source(n_qubits, target_value))?;
    Ok(BenchmarkSpec {
        id: benchmark_id(n_qubits),
        n_qubits,
        target_value,
        program,
    })
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub min_qubits: usize,
    pub max_qubits: usize,
    pub repeats: usize,
    pub seed: u64,
    /// Seed passed to [`gen_benchmark`].
    pub benchmark_seed: u64,
    pub coverage_trials: usize,
    /// Search parameters; `seed` and `initial` are overridden per repeat.
    pub fuzz: FuzzConfig,
    pub execution: Execution,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            min_qubits: MIN_BENCH_QUBITS,
            max_qubits: MAX_BENCH_QUBITS,
            repeats: 5,
            seed: 0,
            benchmark_seed: 0,
            coverage_trials: 10,
            fuzz: FuzzConfig::default(),
            execution: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub seed: u64,
    pub benchmark_seed: u64,
    pub repeats: usize,
    pub coverage_trials: usize,
    pub p: f64,
    pub capacity: usize,
    pub max_iterations: usize,
    pub gate_set: Vec<GateKind>,
    pub max_candidates: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzSummary {
    pub best_weight: f64,
    pub iterations_used: usize,
    pub converged: bool,
    pub evaluations: usize,
    pub per_iteration_best: Vec<f64>,
    pub per_iteration_evaluations: Vec<usize>,
    pub lineage: Lineage,
    pub best_state: StateVector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineSummary {
    pub best_weight: f64,
    pub evaluations: usize,
    /// Baseline best after the same number of evaluations as the fuzzer had
    /// spent at the end of each of its iterations.
    pub best_at_iteration: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepeatReport {
    pub repeat: usize,
    pub seed: u64,
    pub fuzz: FuzzSummary,
    pub baseline: BaselineSummary,
    pub coverage_default: CoverageReport,
    pub coverage_fuzz: CoverageReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub fuzz_mean_weight: f64,
    pub fuzz_mean_iterations: f64,
    pub mean_evaluations: f64,
    pub converged_repeats: usize,
    pub baseline_mean_weight: f64,
    pub coverage_default_mean: f64,
    pub coverage_fuzz_mean: f64,
    pub coverage_uplift_mean: f64,
    pub crashes_default: usize,
    pub crashes_fuzz: usize,
}

/// Wall-clock data; not part of the reproducible content.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub started_unix_ms: u64,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub benchmark: String,
    pub n_qubits: usize,
    pub target_value: u64,
    pub config: ConfigEcho,
    pub repeats: Vec<RepeatReport>,
    pub summary: CampaignSummary,
    pub timing: Timing,
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

/// Seed of repeat `repeat` on the `n`-qubit benchmark under campaign seed `seed`.
pub fn repeat_seed(seed: u64, n_qubits: usize, repeat: usize) -> u64 {
    rng::derive_seed(rng::derive_seed(seed, n_qubits as u64), repeat as u64)
}

pub fn run_repeat(spec: &BenchmarkSpec, cfg: &BenchConfig, repeat: usize) -> Result<RepeatReport, CampaignError> {
    let site = extract_sensitive(&spec.program)
        .sites
        .first()
        .cloned()
        .ok_or_else(|| CampaignError::NoSite(spec.id.clone()))?;
    let seed = repeat_seed(cfg.seed, spec.n_qubits, repeat);

    let fuzz_cfg = FuzzConfig {
        seed: rng::derive_seed(seed, 0),
        initial: None,
        execution: cfg.execution,
        ..cfg.fuzz.clone()
    };
    let fuzz = fuzz_main(&spec.program, &site, &fuzz_cfg)?;

    let baseline = random_baseline_with(
        &spec.program,
        &site,
        fuzz.evaluations,
        &mut rng::seeded(rng::derive_seed(seed, 1)),
        cfg.execution,
    )?;
    let best_at_iteration = fuzz
        .per_iteration_evaluations
        .iter()
        .map(|&e| baseline.best_after(e))
        .collect();

    let default_init = StateVector::basis(spec.n_qubits, 0).expect("benchmark widths are valid");
    let coverage_default = coverage_with(
        &spec.program,
        &default_init,
        cfg.coverage_trials,
        &mut rng::seeded(rng::derive_seed(seed, 2)),
        cfg.execution,
    )?;
    let coverage_fuzz = coverage_with(
        &spec.program,
        &fuzz.best.state,
        cfg.coverage_trials,
        &mut rng::seeded(rng::derive_seed(seed, 3)),
        cfg.execution,
    )?;

    Ok(RepeatReport {
        repeat,
        seed,
        fuzz: FuzzSummary {
            best_weight: fuzz.best.weight,
            iterations_used: fuzz.iterations_used,
            converged: fuzz.converged,
            evaluations: fuzz.evaluations,
            per_iteration_best: fuzz.per_iteration_best,
            per_iteration_evaluations: fuzz.per_iteration_evaluations,
            lineage: fuzz.best.lineage,
            best_state: fuzz.best.state,
        },
        baseline: BaselineSummary {
            best_weight: baseline.best_weight,
            evaluations: baseline.evaluations,
            best_at_iteration,
        },
        coverage_default,
        coverage_fuzz,
    })
}

pub fn run_campaign(spec: &BenchmarkSpec, cfg: &BenchConfig) -> Result<CampaignReport, CampaignError> {
    let started = Instant::now();
    let started_unix_ms = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_millis() as u64);

    let repeats = par::map_range(cfg.execution, cfg.repeats, |r| run_repeat(spec, cfg, r))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;

    let summary = CampaignSummary {
        fuzz_mean_weight: mean(repeats.iter().map(|r| r.fuzz.best_weight)),
        fuzz_mean_iterations: mean(repeats.iter().map(|r| r.fuzz.iterations_used as f64)),
        mean_evaluations: mean(repeats.iter().map(|r| r.fuzz.evaluations as f64)),
        converged_repeats: repeats.iter().filter(|r| r.fuzz.converged).count(),
        baseline_mean_weight: mean(repeats.iter().map(|r| r.baseline.best_weight)),
        coverage_default_mean: mean(repeats.iter().map(|r| r.coverage_default.coverage_ratio)),
        coverage_fuzz_mean: mean(repeats.iter().map(|r| r.coverage_fuzz.coverage_ratio)),
        coverage_uplift_mean: mean(
            repeats
                .iter()
                .map(|r| r.coverage_fuzz.coverage_ratio - r.coverage_default.coverage_ratio),
        ),
        crashes_default: repeats.iter().map(|r| r.coverage_default.crashes).sum(),
        crashes_fuzz: repeats.iter().map(|r| r.coverage_fuzz.crashes).sum(),
    };

    Ok(CampaignReport {
        benchmark: spec.id.clone(),
        n_qubits: spec.n_qubits,
        target_value: spec.target_value,
        config: ConfigEcho {
            seed: cfg.seed,
            benchmark_seed: cfg.benchmark_seed,
            repeats: cfg.repeats,
            coverage_trials: cfg.coverage_trials,
            p: cfg.fuzz.p,
            capacity: cfg.fuzz.capacity,
            max_iterations: cfg.fuzz.max_iterations,
            gate_set: cfg.fuzz.gate_set.clone(),
            max_candidates: cfg.fuzz.max_candidates,
        },
        repeats,
        summary,
        timing: Timing {
            started_unix_ms,
            elapsed_ms: started.elapsed().as_millis() as u64,
        },
    })
}

#[derive(Debug, Serialize)]
struct SummaryRow<'a> {
    benchmark: &'a str,
    qubits: usize,
    target: u64,
    repeats: usize,
    converged: usize,
    mean_iterations: f64,
    mean_evaluations: f64,
    fuzz_probability: f64,
    baseline_probability: f64,
    coverage_default: f64,
    coverage_fuzz: f64,
    coverage_uplift: f64,
}

/// Runs one campaign per qubit count in the configured range and writes
/// `QB_xx.json`, `QB_xx.qpl` and `summary.csv` into `out_dir`.
pub fn bench(cfg: &BenchConfig, out_dir: &Path) -> Result<Vec<CampaignReport>, CampaignError> {
    for n in [cfg.min_qubits, cfg.max_qubits] {
        if !(MIN_BENCH_QUBITS..=MAX_BENCH_QUBITS).contains(&n) {
            return Err(CampaignError::BadWidth(n));
        }
    }
    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;

    let specs = (cfg.min_qubits..=cfg.max_qubits)
        .map(|n| gen_benchmark(n, cfg.benchmark_seed))
        .collect::<Result<Vec<_>, _>>()?;
    let reports = par::map(cfg.execution, &specs, |spec| run_campaign(spec, cfg))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;

    for (spec, report) in specs.iter().zip(&reports) {
        let qpl = out_dir.join(format!("{}.qpl", spec.id));
        fs::write(&qpl, spec.source()).map_err(io_err(&qpl))?;
        write_json(
            &out_dir.join(format!("{}.json", spec.id)),
            &Document::new("campaign-report", report),
        )?;
    }

    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for r in &reports {
        w.serialize(SummaryRow {
            benchmark: &r.benchmark,
            qubits: r.n_qubits,
            target: r.target_value,
            repeats: r.repeats.len(),
            converged: r.summary.converged_repeats,
            mean_iterations: r.summary.fuzz_mean_iterations,
            mean_evaluations: r.summary.mean_evaluations,
            fuzz_probability: r.summary.fuzz_mean_weight,
            baseline_probability: r.summary.baseline_mean_weight,
            coverage_default: r.summary.coverage_default_mean,
            coverage_fuzz: r.summary.coverage_fuzz_mean,
            coverage_uplift: r.summary.coverage_uplift_mean,
        })?;
    }
    let summary = out_dir.join(SUMMARY_FILE);
    fs::write(&summary, w.into_inner().expect("in-memory writer")).map_err(io_err(&summary))?;
    Ok(reports)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CampaignError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|source| CampaignError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    text.push('\n');
    fs::write(path, text).map_err(io_err(path))
}

/// Loads every campaign report in `dir`, ordered by benchmark id.
pub fn load_reports(dir: &Path) -> Result<Vec<CampaignReport>, CampaignError> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io_err(dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    paths.sort();

    let mut reports = Vec::new();
    for path in paths {
        let text = fs::read_to_string(&path).map_err(io_err(&path))?;
        let value: serde_json::Value = serde_json::from_str(&text).map_err(|source| CampaignError::Json {
            path: path.clone(),
            source,
        })?;
        if value.get("kind").and_then(|k| k.as_str()) != Some("campaign-report") {
            continue;
        }
        let doc: Document<CampaignReport> = serde_json::from_value(value).map_err(|source| CampaignError::Json {
            path: path.clone(),
            source,
        })?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(CampaignError::Schema {
                path,
                found: doc.schema_version,
            });
        }
        reports.push(doc.body);
    }
    if reports.is_empty() {
        return Err(CampaignError::NoReports(dir.to_path_buf()));
    }
    reports.sort_by(|a, b| a.benchmark.cmp(&b.benchmark));
    Ok(reports)
}

#[derive(Debug, Serialize)]
struct TraceRow<'a> {
    benchmark: &'a str,
    iteration: usize,
    fuzz_weight: f64,
    baseline_best_so_far: f64,
}

/// Per-iteration best weights of the first repeat of each campaign, one row
/// per iteration including iteration 0.
pub fn trace_csv(reports: &[CampaignReport]) -> Result<String, CampaignError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for r in reports {
        let Some(rep) = r.repeats.first() else { continue };
        for (iteration, (&fuzz_weight, &baseline_best_so_far)) in rep
            .fuzz
            .per_iteration_best
            .iter()
            .zip(&rep.baseline.best_at_iteration)
            .enumerate()
        {
            w.serialize(TraceRow {
                benchmark: &r.benchmark,
                iteration,
                fuzz_weight,
                baseline_best_so_far,
            })?;
        }
    }
    Ok(String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv output is UTF-8"))
}

#[derive(Debug, Serialize)]
struct FuzzTraceRow {
    iteration: usize,
    best_weight: f64,
    evaluations: usize,
}

/// Per-iteration trace of a single fuzz run, including iteration 0.
pub fn fuzz_trace_csv(result: &FuzzResult) -> Result<String, CampaignError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for (iteration, (&best_weight, &evaluations)) in result
        .per_iteration_best
        .iter()
        .zip(&result.per_iteration_evaluations)
        .enumerate()
    {
        w.serialize(FuzzTraceRow {
            iteration,
            best_weight,
            evaluations,
        })?;
    }
    Ok(String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv output is UTF-8"))
}

/// Markdown tables: fuzzer results, random-baseline results and coverage.
pub fn tables_markdown(reports: &[CampaignReport]) -> String {
    let mut out = String::new();
    out.push_str("## Matrix generator\n\n");
    out.push_str("| Benchmark | Qubit number | Iteration | Evaluations | Probability |\n");
    out.push_str("|---|---|---|---|---|\n");
    for r in reports {
        let s = &r.summary;
        out.push_str(&format!(
            "| {} | {} | {:.1} | {:.1} | {:.3} |\n",
            r.benchmark, r.n_qubits, s.fuzz_mean_iterations, s.mean_evaluations, s.fuzz_mean_weight
        ));
    }
    out.push_str("\n## Random generator\n\n");
    out.push_str("| Benchmark | Qubit number | Evaluations | Probability |\n");
    out.push_str("|---|---|---|---|\n");
    for r in reports {
        let s = &r.summary;
        out.push_str(&format!(
            "| {} | {} | {:.1} | {:.3} |\n",
            r.benchmark, r.n_qubits, s.mean_evaluations, s.baseline_mean_weight
        ));
    }
    out.push_str("\n## Branch coverage\n\n");
    out.push_str("| Benchmark | Qubit number | Default input | Fuzzed input | Uplift | Crashes (default / fuzzed) |\n");
    out.push_str("|---|---|---|---|---|---|\n");
    for r in reports {
        let s = &r.summary;
        out.push_str(&format!(
            "| {} | {} | {:.3} | {:.3} | {:+.3} | {} / {} |\n",
            r.benchmark,
            r.n_qubits,
            s.coverage_default_mean,
            s.coverage_fuzz_mean,
            s.coverage_uplift_mean,
            s.crashes_default,
            s.crashes_fuzz
        ));
    }
    out
}

#[derive(Debug, Clone)]
pub struct ReportOutput {
    pub trace_csv: String,
    pub tables: String,
}

/// Reads the campaign reports in `dir` and writes `trace.csv` and
/// `tables.md` next to them.
pub fn report(dir: &Path) -> Result<ReportOutput, CampaignError> {
    let reports = load_reports(dir)?;
    let trace = trace_csv(&reports)?;
    let tables = tables_markdown(&reports);
    let trace_path = dir.join(TRACE_FILE);
    fs::write(&trace_path, &trace).map_err(io_err(&trace_path))?;
    let tables_path = dir.join(TABLES_FILE);
    fs::write(&tables_path, &tables).map_err(io_err(&tables_path))?;
    Ok(ReportOutput {
        trace_csv: trace,
        tables,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_qubit_benchmark_is_the_motivating_example() {
        let spec = gen_benchmark(5, 0).unwrap();
        assert_eq!(spec.id, "QB_04");
        assert_eq!(spec.target_value, 5);
        let listing = dsl::parse(
            "procedure example(){
    qureg q[5];
    Mix(q);
    if (measure(q)==5)
    {
        print \"crash\";
        int i=1/0;
    }
    print \"safe\";
}",
        )
        .unwrap();
        assert_eq!(spec.program.without_spans(), listing.without_spans());
    }

    #[test]
    fn targets_wrap_modulo_register_size() {
        assert_eq!(gen_benchmark(2, 0).unwrap().target_value, 1);
        assert_eq!(gen_benchmark(3, 0).unwrap().target_value, 5);
        assert_eq!(gen_benchmark(8, 0).unwrap().target_value, 5);
        let a = gen_benchmark(6, 99).unwrap();
        assert_eq!(a, gen_benchmark(6, 99).unwrap());
        assert!(a.target_value < 64);
    }

    #[test]
    fn width_range_is_enforced() {
        assert!(matches!(gen_benchmark(1, 0), Err(CampaignError::BadWidth(1))));
        assert!(matches!(gen_benchmark(9, 0), Err(CampaignError::BadWidth(9))));
    }

    #[test]
    fn every_benchmark_has_one_site_and_round_trips() {
        for n in MIN_BENCH_QUBITS..=MAX_BENCH_QUBITS {
            let spec = gen_benchmark(n, 0).unwrap();
            let report = extract_sensitive(&spec.program);
            assert_eq!(report.sites.len(), 1);
            assert_eq!(report.ket.as_ref().unwrap().width, n);
            let reparsed = dsl::parse(&spec.source()).unwrap();
            assert_eq!(reparsed.without_spans(), spec.program.without_spans());
        }
    }

    #[test]
    fn small_campaign_report_is_consistent() {
        let cfg = BenchConfig {
            repeats: 2,
            seed: 3,
            ..BenchConfig::default()
        };
        let spec = gen_benchmark(3, 0).unwrap();
        let r = run_campaign(&spec, &cfg).unwrap();
        assert_eq!(r.repeats.len(), 2);
        for rep in &r.repeats {
            assert_eq!(rep.baseline.evaluations, rep.fuzz.evaluations);
            assert_eq!(rep.baseline.best_at_iteration.len(), rep.fuzz.per_iteration_best.len());
            assert_eq!(rep.coverage_default.trials, 10);
        }
        assert_ne!(r.repeats[0].seed, r.repeats[1].seed);
    }

    #[test]
    fn trace_and_tables_shape() {
        let cfg = BenchConfig {
            repeats: 1,
            seed: 1,
            ..BenchConfig::default()
        };
        let reports: Vec<_> = [2, 3]
            .into_iter()
            .map(|n| run_campaign(&gen_benchmark(n, 0).unwrap(), &cfg).unwrap())
            .collect();
        let csv = trace_csv(&reports).unwrap();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next(),
            Some("benchmark,iteration,fuzz_weight,baseline_best_so_far")
        );
        let expected: usize = reports.iter().map(|r| r.repeats[0].fuzz.iterations_used + 1).sum();
        assert_eq!(lines.count(), expected);
        assert!(!csv.contains('\r'));

        let md = tables_markdown(&reports);
        assert!(md.contains("| Benchmark | Qubit number | Iteration | Evaluations | Probability |"));
        assert!(md.contains("| QB_01 | 2 |"));
    }
}
