// SPDX-License-Identifier: Apache-2.0

//! State vectors, the six single-qubit gates and measurement probabilities.
//!
//! Basis indices are read MSB-first: qubit 0 is the most significant bit, so
//! the ket `|00101⟩` on five qubits is amplitude index 5.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance on `Σ|cᵢ|² = 1` for states produced inside the tool.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Tolerance on `Σ|cᵢ|² = 1` for user-supplied matrix files.
pub const INPUT_NORM_TOLERANCE: f64 = 1e-6;

/// Largest register the simulator will allocate.
pub const MAX_QUBITS: usize = 24;

pub type Amplitude = Complex64;

/// Row-major 2×2 complex matrix.
pub type Matrix2 = [[Amplitude; 2]; 2];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("qubit {qubit} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },
    #[error("value {value} out of range for a {n_qubits}-qubit register")]
    ValueOutOfRange { value: u64, n_qubits: usize },
    #[error("cannot collapse onto value {value}: outcome has zero probability")]
    InvalidCollapse { value: u64 },
    #[error("register width must be between 1 and {MAX_QUBITS}, got {0}")]
    BadWidth(usize),
    #[error("amplitude count {0} is not a power of two")]
    BadLength(usize),
    #[error("amplitude {index} is not finite")]
    NonFinite { index: usize },
    #[error("state is not normalized: squared norm {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },
}

/// One of the single-qubit unitaries available to programs and to the fuzzer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GateKind {
    X,
    Y,
    Z,
    H,
    S,
    T,
}

impl GateKind {
    pub const ALL: [GateKind; 6] = [
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::H,
        GateKind::S,
        GateKind::T,
    ];

    pub fn matrix(self) -> Matrix2 {
        gate_matrix(self)
    }

    pub fn symbol(self) -> char {
        match self {
            GateKind::X => 'X',
            GateKind::Y => 'Y',
            GateKind::Z => 'Z',
            GateKind::H => 'H',
            GateKind::S => 'S',
            GateKind::T => 'T',
        }
    }

    pub fn from_symbol(s: &str) -> Option<GateKind> {
        Some(match s {
            "X" => GateKind::X,
            "Y" => GateKind::Y,
            "Z" => GateKind::Z,
            "H" => GateKind::H,
            "S" => GateKind::S,
            "T" => GateKind::T,
            _ => return None,
        })
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl FromStr for GateKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GateKind::from_symbol(s).ok_or_else(|| format!("unknown gate `{s}` (expected X, Y, Z, H, S or T)"))
    }
}

const fn c(re: f64, im: f64) -> Amplitude {
    Complex64::new(re, im)
}

/// The 2×2 matrix of a gate.
pub fn gate_matrix(g: GateKind) -> Matrix2 {
    let zero = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    match g {
        GateKind::X => [[zero, one], [one, zero]],
        GateKind::Y => [[zero, c(0.0, -1.0)], [c(0.0, 1.0), zero]],
        GateKind::Z => [[one, zero], [zero, c(-1.0, 0.0)]],
        GateKind::H => {
            let h = c(FRAC_1_SQRT_2, 0.0);
            [[h, h], [h, -h]]
        }
        GateKind::S => [[one, zero], [zero, c(0.0, 1.0)]],
        GateKind::T => [[one, zero], [zero, Complex64::from_polar(1.0, FRAC_PI_4)]],
    }
}

/// Ket of an `n`-qubit register as `2^n` complex amplitudes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Amplitude>,
}

impl StateVector {
    /// Computational basis state `|v⟩`.
    pub fn basis(n_qubits: usize, value: u64) -> Result<Self, StateError> {
        check_width(n_qubits)?;
        let dim = 1usize << n_qubits;
        if value >= dim as u64 {
            return Err(StateError::ValueOutOfRange { value, n_qubits });
        }
        let mut amps = vec![c(0.0, 0.0); dim];
        amps[value as usize] = c(1.0, 0.0);
        Ok(StateVector { n_qubits, amps })
    }

    /// Wraps raw amplitudes, rejecting anything that is not a finite state of
    /// squared norm `1 ± tolerance`. The input is never renormalized.
    pub fn from_amplitudes(amps: Vec<Amplitude>, tolerance: f64) -> Result<Self, StateError> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(StateError::BadLength(len));
        }
        let n_qubits = len.trailing_zeros() as usize;
        check_width(n_qubits)?;
        if let Some(index) = amps.iter().position(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(StateError::NonFinite { index });
        }
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > tolerance {
            return Err(StateError::NotNormalized { norm_sqr });
        }
        Ok(StateVector { n_qubits, amps })
    }

    /// Haar-style random state: independent standard-normal real and
    /// imaginary parts, then normalized.
    pub fn random<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Result<Self, StateError> {
        check_width(n_qubits)?;
        let dim = 1usize << n_qubits;
        let mut amps: Vec<Amplitude> = (0..dim)
            .map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut amps {
            *a /= norm;
        }
        Ok(StateVector { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Returns a copy with `g` applied to `qubit`.
    pub fn apply_gate(&self, g: GateKind, qubit: usize) -> Result<Self, StateError> {
        let mut out = self.clone();
        out.apply_gate_in_place(g, qubit)?;
        Ok(out)
    }

    /// Applies `I ⊗ … ⊗ U ⊗ … ⊗ I` by pairing amplitudes whose indices differ
    /// only in the bit of `qubit`.
    pub fn apply_gate_in_place(&mut self, g: GateKind, qubit: usize) -> Result<(), StateError> {
        if qubit >= self.n_qubits {
            return Err(StateError::QubitOutOfRange {
                qubit,
                n_qubits: self.n_qubits,
            });
        }
        let [[m00, m01], [m10, m11]] = gate_matrix(g);
        let stride = 1usize << (self.n_qubits - 1 - qubit);
        for block in self.amps.chunks_exact_mut(stride * 2) {
            let (lo, hi) = block.split_at_mut(stride);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = m00 * x + m01 * y;
                *b = m10 * x + m11 * y;
            }
        }
        Ok(())
    }

    /// Hadamard on every qubit, in index order.
    pub fn mix(&self) -> Self {
        let mut out = self.clone();
        out.mix_in_place();
        out
    }

    pub fn mix_in_place(&mut self) {
        for q in 0..self.n_qubits {
            self.apply_gate_in_place(GateKind::H, q)
                .expect("qubit index is within the register");
        }
    }

    /// Probability that measuring the whole register yields `value`.
    pub fn prob_of_value(&self, value: u64) -> Result<f64, StateError> {
        self.amps
            .get(usize::try_from(value).unwrap_or(usize::MAX))
            .map(|a| a.norm_sqr())
            .ok_or(StateError::ValueOutOfRange {
                value,
                n_qubits: self.n_qubits,
            })
    }

    pub fn measure_probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Post-measurement state for outcome `value`.
    pub fn collapse(&self, value: u64) -> Result<Self, StateError> {
        if self.prob_of_value(value)? <= 0.0 {
            return Err(StateError::InvalidCollapse { value });
        }
        StateVector::basis(self.n_qubits, value)
    }

    /// Inverse-CDF sample of a full-register measurement from one uniform
    /// draw `u ∈ [0, 1)`.
    pub fn sample_value(&self, u: f64) -> u64 {
        let mut acc = 0.0;
        let mut last_nonzero = 0;
        for (i, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p > 0.0 {
                last_nonzero = i;
                acc += p;
                if u < acc {
                    return i as u64;
                }
            }
        }
        // rounding left acc slightly below 1
        last_nonzero as u64
    }

    /// Elementwise comparison within `tol` on both components.
    pub fn approx_eq(&self, other: &StateVector, tol: f64) -> bool {
        self.n_qubits == other.n_qubits
            && self
                .amps
                .iter()
                .zip(&other.amps)
                .all(|(a, b)| (a.re - b.re).abs() <= tol && (a.im - b.im).abs() <= tol)
    }
}

fn check_width(n_qubits: usize) -> Result<(), StateError> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(StateError::BadWidth(n_qubits));
    }
    Ok(())
}

pub fn basis_state(n_qubits: usize, value: u64) -> Result<StateVector, StateError> {
    StateVector::basis(n_qubits, value)
}

pub fn apply_gate(s: &StateVector, g: GateKind, qubit: usize) -> Result<StateVector, StateError> {
    s.apply_gate(g, qubit)
}

pub fn mix(s: &StateVector) -> StateVector {
    s.mix()
}

pub fn prob_of_value(s: &StateVector, value: u64) -> Result<f64, StateError> {
    s.prob_of_value(value)
}

pub fn measure_probabilities(s: &StateVector) -> Vec<f64> {
    s.measure_probabilities()
}

pub fn collapse(s: &StateVector, value: u64) -> Result<StateVector, StateError> {
    s.collapse(value)
}

pub fn random_state<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Result<StateVector, StateError> {
    StateVector::random(n_qubits, rng)
}
