// SPDX-License-Identifier: Apache-2.0

//! Greybox fuzzing for quantum while-programs.
//!
//! A program is parsed ([`dsl`]), its measurement-guarded branches are
//! extracted ([`analysis`]), and the [`fuzzer`] searches for an input state
//! that makes a chosen branch likely, scoring candidates with the
//! [`interpreter`]'s weight mode. [`campaign`] drives benchmark sweeps and
//! writes reports.

pub mod analysis;
pub mod campaign;
pub mod dsl;
pub mod fuzzer;
pub mod interpreter;
pub mod math;
pub mod matrix_io;
pub mod par;
pub mod rng;

pub use analysis::{extract_sensitive, instrumentation_points, SensitiveSite, SensitivityReport};
pub use dsl::{parse, pretty_print, Program};
pub use fuzzer::{fuzz_main, random_baseline, FuzzConfig, FuzzResult};
pub use interpreter::{coverage, execute_sampled, run_to_measurement, weight_analysis, CoverageReport};
pub use math::{GateKind, StateVector};
pub use par::Execution;
