// SPDX-License-Identifier: Apache-2.0

//! Plain-text input matrix files.
//!
//! ```text
//! 2
//! 0.5 0
//! 0.5 0
//! 0 0.5
//! 0.5 0
//! ```
//!
//! Line 1 is the qubit count `n`; each of the next `2^n` lines holds the real
//! and imaginary part of one amplitude, in basis-index order.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use thiserror::Error;

use crate::math::{StateError, StateVector, INPUT_NORM_TOLERANCE, MAX_QUBITS};

#[derive(Debug, Error)]
pub enum MatrixFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("expected {expected} amplitude lines, found {found}")]
    LineCount { expected: usize, found: usize },
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub fn parse_matrix(text: &str) -> Result<StateVector, MatrixFileError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or(MatrixFileError::Syntax {
        line: 1,
        message: "missing qubit count".into(),
    })?;
    let n: usize = header.parse().map_err(|_| MatrixFileError::Syntax {
        line: header_line,
        message: format!("invalid qubit count `{header}`"),
    })?;
    if n == 0 || n > MAX_QUBITS {
        return Err(StateError::BadWidth(n).into());
    }
    let expected = 1usize << n;

    let mut amps = Vec::with_capacity(expected);
    for (line, content) in lines {
        let mut parts = content.split_whitespace();
        let (Some(re), Some(im), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(MatrixFileError::Syntax {
                line,
                message: "expected two reals `re im`".into(),
            });
        };
        let parse = |s: &str| {
            s.parse::<f64>().map_err(|_| MatrixFileError::Syntax {
                line,
                message: format!("invalid real `{s}`"),
            })
        };
        amps.push(Complex64::new(parse(re)?, parse(im)?));
    }
    if amps.len() != expected {
        return Err(MatrixFileError::LineCount {
            expected,
            found: amps.len(),
        });
    }
    Ok(StateVector::from_amplitudes(amps, INPUT_NORM_TOLERANCE)?)
}

/// Shortest round-trip decimal form, so `parse_matrix(format_matrix(s)) == s`.
pub fn format_matrix(state: &StateVector) -> String {
    let mut out = format!("{}\n", state.n_qubits());
    for a in state.amplitudes() {
        writeln!(out, "{:?} {:?}", a.re, a.im).unwrap();
    }
    out
}

pub fn read_matrix(path: &Path) -> Result<StateVector, MatrixFileError> {
    parse_matrix(&fs::read_to_string(path)?)
}

pub fn write_matrix(path: &Path, state: &StateVector) -> Result<(), MatrixFileError> {
    fs::write(path, format_matrix(state))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{basis_state, GateKind};

    #[test]
    fn round_trips_exactly() {
        let s = basis_state(3, 2)
            .unwrap()
            .mix()
            .apply_gate(GateKind::T, 1)
            .unwrap()
            .apply_gate(GateKind::Y, 0)
            .unwrap();
        let text = format_matrix(&s);
        assert_eq!(parse_matrix(&text).unwrap(), s);
    }

    #[test]
    fn reads_documented_layout() {
        let s = parse_matrix("1\n0.6 0\n0 0.8\n").unwrap();
        assert_eq!(s.n_qubits(), 1);
        assert!((s.prob_of_value(1).unwrap() - 0.64).abs() < 1e-12);
    }

    #[test]
    fn rejects_wrong_line_count() {
        let err = parse_matrix("2\n1 0\n0 0\n0 0\n").unwrap_err();
        assert!(matches!(err, MatrixFileError::LineCount { expected: 4, found: 3 }));
    }

    #[test]
    fn rejects_unnormalized_input() {
        let err = parse_matrix("1\n0.6 0\n0.7 0\n").unwrap_err();
        assert!(matches!(err, MatrixFileError::State(StateError::NotNormalized { .. })));
        // within 1e-6 is accepted as-is
        let ok = parse_matrix("1\n0.6 0\n0.8000001 0\n").unwrap();
        assert_eq!(ok.amplitudes()[1].re, 0.8000001);
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(parse_matrix(""), Err(MatrixFileError::Syntax { line: 1, .. })));
        assert!(matches!(
            parse_matrix("x\n"),
            Err(MatrixFileError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse_matrix("1\n1 0 0\n0 0\n"),
            Err(MatrixFileError::Syntax { line: 2, .. })
        ));
    }
}
