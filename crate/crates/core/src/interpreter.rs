// SPDX-License-Identifier: Apache-2.0

//! Program execution on a given input state.
//!
//! *Weight mode* replays only the unitary prefix before a sensitive site and
//! reads the probability of the site's target value; it is deterministic and
//! is what the fuzzer optimizes. *Sampling mode* runs the whole program,
//! drawing a concrete outcome at every measurement.

use std::collections::{BTreeSet, HashMap};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{else_branch_id, exit_branch_id, extract_sensitive, then_branch_id, SensitiveSite};
use crate::dsl::{BinOp, Expr, ExprKind, Program, Span, Stmt, StmtKind};
use crate::math::{GateKind, StateVector};
use crate::par::{self, Execution};
use crate::rng;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExecError {
    #[error("input state has {found} qubits but the program declares a {expected}-qubit register")]
    WidthMismatch { expected: usize, found: usize },
    #[error("site {0} does not belong to this program")]
    UnknownSite(usize),
    #[error("site {site} at {span} cannot be evaluated in weight mode: {reason}")]
    UnsupportedProgram { site: usize, span: Span, reason: String },
}

/// A unitary step of the pre-measurement prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum UnitaryOp {
    Gate(GateKind, usize),
    /// Gate on every qubit, in index order. `Mix` is `All(H)`.
    All(GateKind),
}

/// Pre-compiled weight-mode evaluator for one sensitive site.
#[derive(Debug, Clone)]
pub struct WeightEvaluator {
    width: usize,
    target: u64,
    ops: Vec<UnitaryOp>,
}

impl WeightEvaluator {
    /// Collects the unitary statements in front of `site`. The site must be
    /// the first measurement reached; anything behind an earlier measurement
    /// is rejected.
    pub fn new(program: &Program, site: &SensitiveSite) -> Result<Self, ExecError> {
        let report = extract_sensitive(program);
        if report.site(site.site_id) != Some(site) {
            return Err(ExecError::UnknownSite(site.site_id));
        }
        let width = site.width;
        let mut ops = Vec::new();
        for stmt in &program.body {
            match &stmt.kind {
                StmtKind::GateApply { gate, target } => ops.push(match target.qubit {
                    Some(q) => UnitaryOp::Gate(*gate, q),
                    None => UnitaryOp::All(*gate),
                }),
                StmtKind::Mix { .. } => ops.push(UnitaryOp::All(GateKind::H)),
                StmtKind::IfMeasure { site: id, .. } if *id == site.site_id => {
                    return Ok(WeightEvaluator {
                        width,
                        target: site.target,
                        ops,
                    });
                }
                StmtKind::IfMeasure { site: id, .. } => {
                    return Err(ExecError::UnsupportedProgram {
                        site: site.site_id,
                        span: site.span,
                        reason: format!("measurement site {id} at {} is reached first", stmt.span),
                    });
                }
                StmtKind::QuregDecl { .. }
                | StmtKind::Print(_)
                | StmtKind::IntDecl { .. }
                | StmtKind::Assign { .. } => {}
            }
        }
        unreachable!(
            "a site known to the report lies before the end of the top-level body or behind an earlier measurement"
        )
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn target(&self) -> u64 {
        self.target
    }

    /// Ket right before the site's measurement.
    pub fn run_to_measurement(&self, init: &StateVector) -> Result<StateVector, ExecError> {
        self.check_width(init)?;
        let mut state = init.clone();
        for op in &self.ops {
            match *op {
                UnitaryOp::Gate(g, q) => state.apply_gate_in_place(g, q),
                UnitaryOp::All(g) => (0..self.width).try_for_each(|q| state.apply_gate_in_place(g, q)),
            }
            .expect("qubit indices were bound against the register width");
        }
        Ok(state)
    }

    /// Probability of the site's target value at the measurement.
    pub fn weight(&self, init: &StateVector) -> Result<f64, ExecError> {
        let state = self.run_to_measurement(init)?;
        Ok(state
            .prob_of_value(self.target)
            .expect("target was bound against the register width"))
    }

    fn check_width(&self, init: &StateVector) -> Result<(), ExecError> {
        if init.n_qubits() != self.width {
            return Err(ExecError::WidthMismatch {
                expected: self.width,
                found: init.n_qubits(),
            });
        }
        Ok(())
    }
}

pub fn run_to_measurement(
    program: &Program,
    init: &StateVector,
    site: &SensitiveSite,
) -> Result<StateVector, ExecError> {
    WeightEvaluator::new(program, site)?.run_to_measurement(init)
}

pub fn weight_analysis(program: &Program, init: &StateVector, site: &SensitiveSite) -> Result<f64, ExecError> {
    WeightEvaluator::new(program, site)?.weight(init)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CrashKind {
    DivisionByZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crash {
    pub kind: CrashKind,
    pub span: Span,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExecutionTrace {
    /// Branch ids as numbered by [`crate::analysis`].
    pub branches_taken: BTreeSet<usize>,
    /// `(site_id, value)` in execution order.
    pub measurements: Vec<(usize, u64)>,
    pub crash: Option<Crash>,
    pub output: Vec<String>,
}

/// Callbacks at the four instrumentation points of
/// [`crate::analysis::instrumentation_points`].
pub trait Observer {
    fn input_read(&mut self, _span: Span, _init: &StateVector) {}
    fn ket_transform(&mut self, _span: Span, _ket: &StateVector) {}
    fn before_measurement(&mut self, _site: usize, _span: Span, _ket: &StateVector) {}
    fn measurement(&mut self, _site: usize, _span: Span, _value: u64) {}
}

struct NoObserver;

impl Observer for NoObserver {}

/// Runs the whole program once, sampling every measurement from one uniform
/// draw of `rng` (inverse CDF). A division by zero stops execution and is
/// recorded in the trace.
pub fn execute_sampled<R: Rng + ?Sized>(
    program: &Program,
    init: &StateVector,
    rng: &mut R,
) -> Result<ExecutionTrace, ExecError> {
    execute_observed(program, init, rng, &mut NoObserver)
}

pub fn execute_observed<R: Rng + ?Sized, O: Observer + ?Sized>(
    program: &Program,
    init: &StateVector,
    rng: &mut R,
    observer: &mut O,
) -> Result<ExecutionTrace, ExecError> {
    check_program_width(program, init)?;
    let site_count = count_sites(program);
    let mut machine = Machine {
        init,
        register: None,
        scopes: vec![HashMap::new()],
        trace: ExecutionTrace::default(),
        rng,
        observer,
    };
    let first = program.body.first().map_or(program.span, |s| s.span);
    machine.observer.input_read(first, init);
    if machine.block(&program.body).is_ok() {
        machine.trace.branches_taken.insert(exit_branch_id(site_count));
    }
    Ok(machine.trace)
}

fn check_program_width(program: &Program, init: &StateVector) -> Result<(), ExecError> {
    match program.register() {
        Some((_, width)) if width != init.n_qubits() => Err(ExecError::WidthMismatch {
            expected: width,
            found: init.n_qubits(),
        }),
        _ => Ok(()),
    }
}

fn count_sites(program: &Program) -> usize {
    let mut n = 0;
    program.walk(&mut |s| {
        if matches!(s.kind, StmtKind::IfMeasure { .. }) {
            n += 1;
        }
    });
    n
}

struct Halt;

struct Machine<'a, R: ?Sized, O: ?Sized> {
    init: &'a StateVector,
    register: Option<StateVector>,
    scopes: Vec<HashMap<String, i64>>,
    trace: ExecutionTrace,
    rng: &'a mut R,
    observer: &'a mut O,
}

impl<R: Rng + ?Sized, O: Observer + ?Sized> Machine<'_, R, O> {
    fn block(&mut self, stmts: &[Stmt]) -> Result<(), Halt> {
        for stmt in stmts {
            self.stmt(stmt)?;
        }
        Ok(())
    }

    fn nested(&mut self, stmts: &[Stmt]) -> Result<(), Halt> {
        self.scopes.push(HashMap::new());
        let r = self.block(stmts);
        self.scopes.pop();
        r
    }

    fn ket(&mut self) -> &mut StateVector {
        self.register.as_mut().expect("binding guarantees a declared register")
    }

    fn stmt(&mut self, stmt: &Stmt) -> Result<(), Halt> {
        match &stmt.kind {
            StmtKind::QuregDecl { .. } => {
                let ket = self.init.clone();
                self.observer.ket_transform(stmt.span, &ket);
                self.register = Some(ket);
            }
            StmtKind::GateApply { gate, target } => {
                let ket = self.ket();
                match target.qubit {
                    Some(q) => ket.apply_gate_in_place(*gate, q),
                    None => (0..ket.n_qubits()).try_for_each(|q| ket.apply_gate_in_place(*gate, q)),
                }
                .expect("qubit indices were bound against the register width");
            }
            StmtKind::Mix { .. } => self.ket().mix_in_place(),
            StmtKind::IfMeasure {
                site,
                cmp,
                target,
                measure_span,
                then_body,
                else_body,
                ..
            } => {
                let u: f64 = self.rng.random();
                let ket = self.register.as_ref().expect("binding guarantees a declared register");
                self.observer.before_measurement(*site, stmt.span, ket);
                let value = ket.sample_value(u);
                let collapsed = ket.collapse(value).expect("sampled outcomes have nonzero probability");
                self.register = Some(collapsed);
                self.observer.measurement(*site, *measure_span, value);
                self.trace.measurements.push((*site, value));
                if cmp.holds(value, *target) {
                    self.trace.branches_taken.insert(then_branch_id(*site));
                    self.nested(then_body)?;
                } else {
                    self.trace.branches_taken.insert(else_branch_id(*site));
                    if let Some(e) = else_body {
                        self.nested(e)?;
                    }
                }
            }
            StmtKind::Print(text) => self.trace.output.push(text.clone()),
            StmtKind::IntDecl { name, value } => {
                let v = self.eval(value)?;
                self.scopes.last_mut().unwrap().insert(name.clone(), v);
            }
            StmtKind::Assign { name, value } => {
                let v = self.eval(value)?;
                let slot = self
                    .scopes
                    .iter_mut()
                    .rev()
                    .find_map(|s| s.get_mut(name))
                    .expect("binding guarantees declared variables");
                *slot = v;
            }
        }
        Ok(())
    }

    fn lookup(&self, name: &str) -> i64 {
        self.scopes
            .iter()
            .rev()
            .find_map(|s| s.get(name).copied())
            .expect("binding guarantees declared variables")
    }

    fn eval(&mut self, e: &Expr) -> Result<i64, Halt> {
        Ok(match &e.kind {
            ExprKind::Int(v) => *v,
            ExprKind::Var(name) => self.lookup(name),
            ExprKind::Binary { op, lhs, rhs } => {
                let a = self.eval(lhs)?;
                let b = self.eval(rhs)?;
                match op {
                    BinOp::Add => a.wrapping_add(b),
                    BinOp::Sub => a.wrapping_sub(b),
                    BinOp::Mul => a.wrapping_mul(b),
                    BinOp::Div if b == 0 => {
                        self.trace.crash = Some(Crash {
                            kind: CrashKind::DivisionByZero,
                            span: e.span,
                        });
                        return Err(Halt);
                    }
                    BinOp::Div => a.wrapping_div(b),
                }
            }
        })
    }
}

/// Aggregate of repeated sampled executions from one input state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub trials: usize,
    pub universe: usize,
    pub covered: BTreeSet<usize>,
    pub coverage_ratio: f64,
    /// Per site, the fraction of trials that entered the then-branch.
    pub sensitive_hit_frequency: Vec<f64>,
    pub crashes: usize,
}

pub fn coverage<R: Rng + ?Sized>(
    program: &Program,
    init: &StateVector,
    trials: usize,
    rng: &mut R,
) -> Result<CoverageReport, ExecError> {
    coverage_with(program, init, trials, rng, Execution::default())
}

/// Trial `i` runs on substream `i` of a base seed drawn from `rng`, so the
/// result is the same in sequential and parallel mode.
pub fn coverage_with<R: Rng + ?Sized>(
    program: &Program,
    init: &StateVector,
    trials: usize,
    rng: &mut R,
    mode: Execution,
) -> Result<CoverageReport, ExecError> {
    assert!(trials >= 1, "coverage needs at least one trial");
    check_program_width(program, init)?;
    let site_count = count_sites(program);
    let base: u64 = rng.random();

    let traces = par::map_range(mode, trials, |i| {
        let mut trial_rng = rng::substream(base, i as u64);
        execute_sampled(program, init, &mut trial_rng)
    });

    let universe = 2 * site_count + 1;
    let mut covered = BTreeSet::new();
    let mut hits = vec![0usize; site_count];
    let mut crashes = 0;
    for trace in traces {
        let trace = trace?;
        for (site, hit) in hits.iter_mut().enumerate() {
            *hit += usize::from(trace.branches_taken.contains(&then_branch_id(site)));
        }
        crashes += usize::from(trace.crash.is_some());
        covered.extend(trace.branches_taken);
    }
    Ok(CoverageReport {
        trials,
        universe,
        coverage_ratio: covered.len() as f64 / universe as f64,
        covered,
        sensitive_hit_frequency: hits.into_iter().map(|h| h as f64 / trials as f64).collect(),
        crashes,
    })
}
