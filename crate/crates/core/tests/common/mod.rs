// SPDX-License-Identifier: Apache-2.0

//! Brute-force reference implementations shared by the integration tests.
//!
//! Nothing here calls into the simulator's gate code: gates are rebuilt from
//! their textbook matrices, lifted to `2^n × 2^n` by Kronecker products and
//! applied by dense matrix-vector multiplication.

#![allow(dead_code)]

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::Write as _;

use num_complex::Complex64;
use quanfuzz_core::GateKind;
use rand::Rng;

pub type Dense = Vec<Vec<Complex64>>;

const MAX_ORACLE_QUBITS: usize = 10;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn oracle_matrix(g: GateKind) -> [[Complex64; 2]; 2] {
    let o = c(0.0, 0.0);
    let l = c(1.0, 0.0);
    let h = c(FRAC_1_SQRT_2, 0.0);
    match g {
        GateKind::X => [[o, l], [l, o]],
        GateKind::Y => [[o, c(0.0, -1.0)], [c(0.0, 1.0), o]],
        GateKind::Z => [[l, o], [o, -l]],
        GateKind::H => [[h, h], [h, -h]],
        GateKind::S => [[l, o], [o, c(0.0, 1.0)]],
        GateKind::T => [[l, o], [o, c(FRAC_1_SQRT_2, FRAC_1_SQRT_2)]],
    }
}

pub fn identity(dim: usize) -> Dense {
    (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) })
                .collect()
        })
        .collect()
}

pub fn kron(a: &Dense, b: &Dense) -> Dense {
    let (ra, rb) = (a.len(), b.len());
    let mut out = vec![vec![c(0.0, 0.0); ra * rb]; ra * rb];
    for i in 0..ra {
        for j in 0..ra {
            for k in 0..rb {
                for l in 0..rb {
                    out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut out = vec![vec![c(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn matvec(a: &Dense, v: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

/// `I ⊗ … ⊗ G ⊗ … ⊗ I` with `G` in position `qubit`, qubit 0 leftmost.
pub fn lift(g: GateKind, qubit: usize, n: usize) -> Dense {
    assert!(n <= MAX_ORACLE_QUBITS && qubit < n);
    let m = oracle_matrix(g);
    let gate: Dense = m.iter().map(|r| r.to_vec()).collect();
    let id2 = identity(2);
    let mut u = identity(1);
    for k in 0..n {
        u = kron(&u, if k == qubit { &gate } else { &id2 });
    }
    u
}

pub fn kron_apply(amps: &[Complex64], g: GateKind, qubit: usize, n: usize) -> Vec<Complex64> {
    assert_eq!(amps.len(), 1 << n);
    matvec(&lift(g, qubit, n), amps)
}

pub fn is_unitary(u: &Dense, tol: f64) -> bool {
    let n = u.len();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let dot: Complex64 = (0..n).map(|k| u[k][i].conj() * u[k][j]).sum();
            let expect = if i == j { 1.0 } else { 0.0 };
            (dot - c(expect, 0.0)).norm() <= tol
        })
    })
}

/// A quantum operation of a generated test program.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Op {
    Gate(GateKind, usize),
    GateAll(GateKind),
    Mix,
}

/// Straight-line program over one register: `prefix`, then a guard on
/// `target`, then `suffix` (which must not influence the guard).
#[derive(Debug, Clone)]
pub struct GenProgram {
    pub n: usize,
    pub prefix: Vec<Op>,
    pub target: u64,
    pub suffix: Vec<Op>,
    pub classical_noise: bool,
}

fn op_source(op: &Op) -> String {
    match op {
        Op::Gate(g, q) => format!("{g}(q[{q}]);"),
        Op::GateAll(g) => format!("{g}(q);"),
        Op::Mix => "Mix(q);".to_string(),
    }
}

impl GenProgram {
    pub fn random<R: Rng>(rng: &mut R, max_qubits: usize, max_ops: usize) -> Self {
        let n = rng.random_range(1..=max_qubits);
        fn ops<R: Rng>(rng: &mut R, n: usize, count: usize) -> Vec<Op> {
            (0..count)
                .map(|_| {
                    let g = GateKind::ALL[rng.random_range(0..GateKind::ALL.len())];
                    match rng.random_range(0..10) {
                        0 => Op::Mix,
                        1 => Op::GateAll(g),
                        _ => Op::Gate(g, rng.random_range(0..n)),
                    }
                })
                .collect()
        }
        let prefix_len = rng.random_range(0..=max_ops);
        let prefix = ops(rng, n, prefix_len);
        let suffix = ops(rng, n, 3);
        let target = rng.random_range(0..1u64 << n);
        let classical_noise = rng.random_bool(0.5);
        GenProgram {
            n,
            prefix,
            target,
            suffix,
            classical_noise,
        }
    }

    pub fn source(&self) -> String {
        let mut s = format!("procedure gen(){{\n    qureg q[{}];\n", self.n);
        if self.classical_noise {
            s.push_str("    int a = 3;\n    print \"start\";\n");
        }
        for (i, op) in self.prefix.iter().enumerate() {
            writeln!(s, "    {}", op_source(op)).unwrap();
            if self.classical_noise && i % 3 == 0 {
                writeln!(s, "    a = a * 2 + {i};").unwrap();
            }
        }
        writeln!(s, "    if (measure(q) == {}) {{", self.target).unwrap();
        for op in &self.suffix {
            writeln!(s, "        {}", op_source(op)).unwrap();
        }
        s.push_str("        print \"hit\";\n    } else {\n        print \"miss\";\n    }\n");
        for op in &self.suffix {
            writeln!(s, "    {}", op_source(op)).unwrap();
        }
        s.push_str("}\n");
        s
    }

    /// Product of every prefix operation as one dense unitary.
    pub fn prefix_unitary(&self) -> Dense {
        let mut u = identity(1 << self.n);
        for op in &self.prefix {
            let layers: Vec<Dense> = match *op {
                Op::Gate(g, q) => vec![lift(g, q, self.n)],
                Op::GateAll(g) => (0..self.n).map(|q| lift(g, q, self.n)).collect(),
                Op::Mix => (0..self.n).map(|q| lift(GateKind::H, q, self.n)).collect(),
            };
            for layer in layers {
                u = matmul(&layer, &u);
            }
        }
        u
    }
}

/// Probability that the guard of `prog` sees its target value when the
/// register starts in `init`.
pub fn exhaustive_weight(prog: &GenProgram, init: &[Complex64]) -> f64 {
    let out = matvec(&prog.prefix_unitary(), init);
    out[prog.target as usize].norm_sqr()
}

/// Monte Carlo estimate of `P(outcome = target)` for a distribution given by
/// its probability vector, drawing outcomes by inverse CDF.
pub fn monte_carlo_hit_rate<R: Rng>(probs: &[f64], target: usize, draws: usize, rng: &mut R) -> f64 {
    let mut hits = 0usize;
    for _ in 0..draws {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut outcome = probs.len() - 1;
        for (k, p) in probs.iter().enumerate() {
            acc += p;
            if u < acc {
                outcome = k;
                break;
            }
        }
        hits += usize::from(outcome == target);
    }
    hits as f64 / draws as f64
}

pub fn random_amplitudes<R: Rng>(n: usize, rng: &mut R) -> Vec<Complex64> {
    let raw: Vec<Complex64> = (0..1 << n)
        .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    raw.into_iter().map(|a| a / norm).collect()
}

pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub const MOTIVATING: &str = "procedure example(){
    qureg q[5];
    Mix(q);
    if (measure(q)==5)
    {
        print \"crash\";
        int i=1/0;
    }
    print \"safe\";
}";
