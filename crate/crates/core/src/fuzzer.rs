// SPDX-License-Identifier: Apache-2.0

//! Weighted-queue search for input states that drive a sensitive branch.
//!
//! The queue starts with the campaign seed state. Each iteration mutates every
//! retained entry by picking two gates per qubit and enumerating all `2^n`
//! ways of applying one of them to each qubit. All candidates are weighed,
//! merged into the queue, and the queue is cut back to its capacity. The loop
//! ends when the head reaches the threshold `p` or the iteration budget runs
//! out.

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::SensitiveSite;
use crate::dsl::Program;
use crate::interpreter::{ExecError, WeightEvaluator};
use crate::math::{GateKind, StateError, StateVector};
use crate::par::{self, Execution};
use crate::rng;

/// Elementwise tolerance for treating two queue entries as the same state.
pub const DEDUP_TOLERANCE: f64 = 1e-9;

pub type Lineage = Vec<(GateKind, usize)>;

#[derive(Debug, Error)]
pub enum FuzzError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Exec(#[from] ExecError),
    #[error(transparent)]
    State(#[from] StateError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzConfig {
    /// Weight at which the search stops.
    pub p: f64,
    pub capacity: usize,
    pub max_iterations: usize,
    pub seed: u64,
    pub gate_set: Vec<GateKind>,
    /// Upper bound on candidates per queue entry per iteration. `None`
    /// enumerates all `2^n` combinations.
    pub max_candidates: Option<usize>,
    /// Starting state; `|0…0⟩` when absent.
    #[serde(skip)]
    pub initial: Option<StateVector>,
    #[serde(skip)]
    pub execution: Execution,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            p: 0.5,
            capacity: 6,
            max_iterations: 50,
            seed: 0,
            gate_set: GateKind::ALL.to_vec(),
            max_candidates: None,
            initial: None,
            execution: Execution::default(),
        }
    }
}

impl FuzzConfig {
    pub fn validate(&self) -> Result<(), FuzzError> {
        if !(self.p > 0.0 && self.p <= 1.0) {
            return Err(FuzzError::Config(format!(
                "threshold p must lie in (0, 1], got {}",
                self.p
            )));
        }
        if self.capacity == 0 {
            return Err(FuzzError::Config("capacity must be at least 1".into()));
        }
        if self.gate_set.is_empty() {
            return Err(FuzzError::Config("gate set is empty".into()));
        }
        if self.max_candidates == Some(0) {
            return Err(FuzzError::Config("max candidates must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedMatrix {
    pub state: StateVector,
    pub weight: f64,
    /// Gates applied to the campaign seed to reach `state`, in order.
    pub lineage: Lineage,
}

/// Bounded queue of the best candidates, sorted by descending weight.
#[derive(Debug, Clone, PartialEq)]
pub struct TopMatrices {
    entries: Vec<WeightedMatrix>,
    capacity: usize,
}

impl TopMatrices {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity >= 1);
        TopMatrices {
            entries: Vec::with_capacity(capacity),
            capacity,
        }
    }

    pub fn entries(&self) -> &[WeightedMatrix] {
        &self.entries
    }

    pub fn head(&self) -> Option<&WeightedMatrix> {
        self.entries.first()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Adds `incoming` after the current entries, then sorts (stable, so
    /// earlier insertions win ties), drops near-duplicates of already kept
    /// entries, and truncates to capacity.
    pub fn merge(&mut self, incoming: impl IntoIterator<Item = WeightedMatrix>) {
        let mut all = std::mem::take(&mut self.entries);
        all.extend(incoming);
        all.sort_by(|a, b| b.weight.total_cmp(&a.weight));
        for cand in all {
            if self.entries.len() == self.capacity {
                break;
            }
            if !self
                .entries
                .iter()
                .any(|kept| kept.state.approx_eq(&cand.state, DEDUP_TOLERANCE))
            {
                self.entries.push(cand);
            }
        }
    }
}

/// One mutated state from [`traversing`] with the gates that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub state: StateVector,
    pub gates: Lineage,
}

/// Draws two gates per qubit in `first..=last` (distinct when the gate set
/// allows it) and applies one of each pair to every qubit, in all
/// combinations. The first-drawn gate on qubit `first` is the leftmost
/// branch, so candidate `i` takes the second gate on qubit `first + j`
/// exactly when bit `last - first - j` of `i` is set.
pub fn traversing<R: Rng + ?Sized>(
    seed: &StateVector,
    first: usize,
    last: usize,
    gate_set: &[GateKind],
    rng: &mut R,
) -> Result<Vec<Candidate>, FuzzError> {
    traversing_capped(seed, first, last, gate_set, None, rng)
}

/// [`traversing`] that keeps at most `cap` combinations, chosen uniformly
/// without replacement and returned in enumeration order.
pub fn traversing_capped<R: Rng + ?Sized>(
    seed: &StateVector,
    first: usize,
    last: usize,
    gate_set: &[GateKind],
    cap: Option<usize>,
    rng: &mut R,
) -> Result<Vec<Candidate>, FuzzError> {
    if first > last || last >= seed.n_qubits() {
        return Err(FuzzError::Config(format!(
            "qubit range {first}..={last} is invalid for a {}-qubit state",
            seed.n_qubits()
        )));
    }
    if gate_set.is_empty() {
        return Err(FuzzError::Config("gate set is empty".into()));
    }
    let pairs: Vec<(usize, [GateKind; 2])> = (first..=last).map(|q| (q, draw_pair(gate_set, rng))).collect();
    let depth = pairs.len();

    let total = 1u128 << depth;
    match cap {
        Some(cap) if (cap as u128) < total => {
            let total =
                usize::try_from(total).map_err(|_| FuzzError::Config("qubit range too wide to sample".into()))?;
            let mut picks = index::sample(rng, total, cap).into_vec();
            picks.sort_unstable();
            Ok(picks
                .into_iter()
                .map(|combo| {
                    let mut state = seed.clone();
                    let mut gates = Vec::with_capacity(depth);
                    for (j, (q, pair)) in pairs.iter().enumerate() {
                        let g = pair[(combo >> (depth - 1 - j)) & 1];
                        state.apply_gate_in_place(g, *q).expect("range checked above");
                        gates.push((g, *q));
                    }
                    Candidate { state, gates }
                })
                .collect())
        }
        _ => {
            let mut level = vec![Candidate {
                state: seed.clone(),
                gates: Vec::new(),
            }];
            for (q, pair) in pairs {
                level = level
                    .into_iter()
                    .flat_map(|c| {
                        pair.map(|g| {
                            let mut state = c.state.clone();
                            state.apply_gate_in_place(g, q).expect("range checked above");
                            let mut gates = c.gates.clone();
                            gates.push((g, q));
                            Candidate { state, gates }
                        })
                    })
                    .collect();
            }
            Ok(level)
        }
    }
}

fn draw_pair<R: Rng + ?Sized>(gate_set: &[GateKind], rng: &mut R) -> [GateKind; 2] {
    if gate_set.len() == 1 {
        return [gate_set[0]; 2];
    }
    let picks = index::sample(rng, gate_set.len(), 2);
    [gate_set[picks.index(0)], gate_set[picks.index(1)]]
}

/// Re-applies a lineage to the campaign seed.
pub fn replay(seed: &StateVector, lineage: &[(GateKind, usize)]) -> Result<StateVector, StateError> {
    let mut state = seed.clone();
    for &(g, q) in lineage {
        state.apply_gate_in_place(g, q)?;
    }
    Ok(state)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzResult {
    pub best: WeightedMatrix,
    pub iterations_used: usize,
    pub converged: bool,
    /// Queue head weight after iteration `i`; entry 0 is the seed's weight.
    pub per_iteration_best: Vec<f64>,
    /// Cumulative weight evaluations after iteration `i`; entry 0 is 1.
    pub per_iteration_evaluations: Vec<usize>,
    pub evaluations: usize,
}

pub fn fuzz_main(program: &Program, site: &SensitiveSite, cfg: &FuzzConfig) -> Result<FuzzResult, FuzzError> {
    cfg.validate()?;
    let evaluator = WeightEvaluator::new(program, site)?;
    let n = evaluator.width();
    let seed_state = match &cfg.initial {
        Some(s) => s.clone(),
        None => StateVector::basis(n, 0)?,
    };
    let seed_weight = evaluator.weight(&seed_state)?;

    let mut queue = TopMatrices::new(cfg.capacity);
    queue.merge([WeightedMatrix {
        state: seed_state,
        weight: seed_weight,
        lineage: Vec::new(),
    }]);

    let mut rng = rng::seeded(cfg.seed);
    let mut evaluations = 1;
    let mut per_iteration_best = vec![seed_weight];
    let mut per_iteration_evaluations = vec![evaluations];
    let mut iterations = 0;

    while queue.entries()[0].weight < cfg.p && iterations < cfg.max_iterations {
        let mut pending: Vec<(Lineage, StateVector)> = Vec::new();
        for entry in queue.entries() {
            for cand in traversing_capped(&entry.state, 0, n - 1, &cfg.gate_set, cfg.max_candidates, &mut rng)? {
                let mut lineage = entry.lineage.clone();
                lineage.extend(cand.gates);
                pending.push((lineage, cand.state));
            }
        }

        let weights = par::map(cfg.execution, &pending, |(_, state)| evaluator.weight(state));
        evaluations += pending.len();
        let mut weighed = Vec::with_capacity(pending.len());
        for ((lineage, state), weight) in pending.into_iter().zip(weights) {
            weighed.push(WeightedMatrix {
                state,
                weight: weight?,
                lineage,
            });
        }
        queue.merge(weighed);

        iterations += 1;
        per_iteration_best.push(queue.entries()[0].weight);
        per_iteration_evaluations.push(evaluations);
    }

    let best = queue.entries()[0].clone();
    Ok(FuzzResult {
        converged: best.weight >= cfg.p,
        best,
        iterations_used: iterations,
        per_iteration_best,
        per_iteration_evaluations,
        evaluations,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineResult {
    pub best_weight: f64,
    pub evaluations: usize,
    /// Best weight among the first `i + 1` draws.
    pub best_so_far: Vec<f64>,
}

impl BaselineResult {
    /// Best weight after `evaluations` draws (clamped to the budget).
    pub fn best_after(&self, evaluations: usize) -> f64 {
        let i = evaluations.clamp(1, self.best_so_far.len()) - 1;
        self.best_so_far[i]
    }
}

/// Control generator: `evaluations` independent random input states, keeping
/// the best weight.
pub fn random_baseline<R: Rng + ?Sized>(
    program: &Program,
    site: &SensitiveSite,
    evaluations: usize,
    rng: &mut R,
) -> Result<BaselineResult, FuzzError> {
    random_baseline_with(program, site, evaluations, rng, Execution::default())
}

pub fn random_baseline_with<R: Rng + ?Sized>(
    program: &Program,
    site: &SensitiveSite,
    evaluations: usize,
    rng: &mut R,
    mode: Execution,
) -> Result<BaselineResult, FuzzError> {
    if evaluations == 0 {
        return Err(FuzzError::Config("baseline needs at least one evaluation".into()));
    }
    let evaluator = WeightEvaluator::new(program, site)?;
    let base: u64 = rng.random();
    let weights = par::map_range(mode, evaluations, |i| -> Result<f64, FuzzError> {
        let state = StateVector::random(evaluator.width(), &mut rng::substream(base, i as u64))?;
        Ok(evaluator.weight(&state)?)
    });
    let mut best_so_far = Vec::with_capacity(evaluations);
    let mut best = f64::NEG_INFINITY;
    for w in weights {
        best = best.max(w?);
        best_so_far.push(best);
    }
    Ok(BaselineResult {
        best_weight: best,
        evaluations,
        best_so_far,
    })
}
