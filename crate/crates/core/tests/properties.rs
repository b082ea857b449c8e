// SPDX-License-Identifier: Apache-2.0

mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use quanfuzz_core::math::{gate_matrix, NORM_TOLERANCE};
use quanfuzz_core::{GateKind, StateVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn gate() -> impl Strategy<Value = GateKind> {
    prop::sample::select(GateKind::ALL.to_vec())
}

fn state(n: usize) -> impl Strategy<Value = StateVector> {
    any::<u64>().prop_map(move |seed| StateVector::random(n, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap())
}

fn sized_state() -> impl Strategy<Value = StateVector> {
    (1usize..=6).prop_flat_map(state)
}

#[test]
fn gate_matrices_are_unitary() {
    for g in GateKind::ALL {
        let m = gate_matrix(g);
        for i in 0..2 {
            for j in 0..2 {
                let dot: Complex64 = (0..2).map(|k| m[k][i].conj() * m[k][j]).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot - expect).norm() <= 1e-12, "{g}: <col {i}, col {j}> = {dot}");
            }
        }
    }
}

#[test]
fn gate_matrices_match_reference() {
    for g in GateKind::ALL {
        let (m, r) = (gate_matrix(g), common::oracle_matrix(g));
        for i in 0..2 {
            for j in 0..2 {
                assert!((m[i][j] - r[i][j]).norm() <= 1e-15, "{g}[{i}][{j}]");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn norm_is_preserved(s in sized_state(), g in gate(), q in 0usize..6) {
        let q = q % s.n_qubits();
        let out = s.apply_gate(g, q).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn involutions_and_s_cycle(s in sized_state(), q in 0usize..6) {
        let q = q % s.n_qubits();
        for g in [GateKind::H, GateKind::X, GateKind::Z, GateKind::Y] {
            let back = s.apply_gate(g, q).unwrap().apply_gate(g, q).unwrap();
            prop_assert!(back.approx_eq(&s, 1e-9), "{g}{g} != I");
        }
        let mut t = s.clone();
        for _ in 0..4 {
            t.apply_gate_in_place(GateKind::S, q).unwrap();
        }
        prop_assert!(t.approx_eq(&s, 1e-9));
        let mut t8 = s.clone();
        for _ in 0..8 {
            t8.apply_gate_in_place(GateKind::T, q).unwrap();
        }
        prop_assert!(t8.approx_eq(&s, 1e-9));
    }

    #[test]
    fn gates_on_distinct_qubits_commute(s in (2usize..=6).prop_flat_map(state), a in gate(), b in gate(), qa in 0usize..6, qb in 0usize..6) {
        let n = s.n_qubits();
        let (qa, qb) = (qa % n, qb % n);
        prop_assume!(qa != qb);
        let ab = s.apply_gate(a, qa).unwrap().apply_gate(b, qb).unwrap();
        let ba = s.apply_gate(b, qb).unwrap().apply_gate(a, qa).unwrap();
        prop_assert!(ab.approx_eq(&ba, 1e-12));
    }

    #[test]
    fn probabilities_sum_to_one(s in sized_state()) {
        let total: f64 = s.measure_probabilities().iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn collapse_is_a_normalized_basis_state(s in sized_state(), v in any::<u64>()) {
        let v = v % s.dim() as u64;
        prop_assume!(s.prob_of_value(v).unwrap() > 1e-6);
        let c = s.collapse(v).unwrap();
        prop_assert!((c.norm_sqr() - 1.0).abs() <= NORM_TOLERANCE);
        prop_assert!((c.prob_of_value(v).unwrap() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn mix_is_self_inverse(s in sized_state()) {
        prop_assert!(s.mix().mix().approx_eq(&s, 1e-9));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn long_gate_sequences_keep_norm(seed in any::<u64>(), ops in prop::collection::vec((gate(), 0usize..8), 1000)) {
        let mut s = StateVector::random(8, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        for (g, q) in ops {
            s.apply_gate_in_place(g, q).unwrap();
        }
        prop_assert!((s.norm_sqr() - 1.0).abs() <= 1e-6);
    }
}
