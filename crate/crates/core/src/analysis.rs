// SPDX-License-Identifier: Apache-2.0

//! Static extraction of measurement-guarded ("sensitive") branches.
//!
//! Branch ids are dense: site `k` owns then-branch `2k` and else-branch
//! `2k + 1`, and the normal program exit is `2 * site_count`. The else arm is
//! part of the inventory even when the source has no `else` block, since the
//! fall-through path is still a distinct outcome of the measurement.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dsl::{CmpOp, Program, Span, StmtKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BranchKind {
    SensitiveThen,
    SensitiveElse,
    ProgramExit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BranchId {
    pub id: usize,
    pub kind: BranchKind,
    pub span: Span,
}

pub fn then_branch_id(site: usize) -> usize {
    2 * site
}

pub fn else_branch_id(site: usize) -> usize {
    2 * site + 1
}

pub fn exit_branch_id(site_count: usize) -> usize {
    2 * site_count
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SensitiveSite {
    pub site_id: usize,
    pub register: String,
    pub width: usize,
    pub op: CmpOp,
    pub target: u64,
    pub then_branch: BranchId,
    pub else_branch: BranchId,
    /// Position of the guarding `if`.
    pub span: Span,
    /// Position of the `measure` call inside the guard.
    pub measure_span: Span,
}

/// The register a program's input matrix is loaded into.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KetInfo {
    pub register: String,
    pub width: usize,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SensitivityReport {
    pub program: String,
    pub ket: Option<KetInfo>,
    pub sites: Vec<SensitiveSite>,
    pub branches: Vec<BranchId>,
}

impl SensitivityReport {
    pub fn site(&self, site_id: usize) -> Option<&SensitiveSite> {
        self.sites.get(site_id)
    }

    pub fn exit_branch(&self) -> BranchId {
        *self.branches.last().expect("the exit branch is always present")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("site {0} does not belong to this program")]
    UnknownSite(usize),
}

pub fn extract_sensitive(program: &Program) -> SensitivityReport {
    let ket = program.body.iter().find_map(|s| match &s.kind {
        StmtKind::QuregDecl { name, n_qubits } => Some(KetInfo {
            register: name.clone(),
            width: *n_qubits,
            span: s.span,
        }),
        _ => None,
    });
    let width = ket.as_ref().map_or(0, |k| k.width);

    let mut sites = Vec::new();
    program.walk(&mut |stmt| {
        if let StmtKind::IfMeasure {
            site,
            register,
            cmp,
            target,
            measure_span,
            then_body,
            else_body,
        } = &stmt.kind
        {
            let then_span = then_body.first().map_or(stmt.span, |s| s.span);
            let else_span = else_body.as_ref().and_then(|b| b.first()).map_or(stmt.span, |s| s.span);
            sites.push(SensitiveSite {
                site_id: *site,
                register: register.clone(),
                width,
                op: *cmp,
                target: *target,
                then_branch: BranchId {
                    id: then_branch_id(*site),
                    kind: BranchKind::SensitiveThen,
                    span: then_span,
                },
                else_branch: BranchId {
                    id: else_branch_id(*site),
                    kind: BranchKind::SensitiveElse,
                    span: else_span,
                },
                span: stmt.span,
                measure_span: *measure_span,
            });
        }
    });
    sites.sort_by_key(|s| s.site_id);

    let mut branches: Vec<BranchId> = sites.iter().flat_map(|s| [s.then_branch, s.else_branch]).collect();
    let end_span = program.body.last().map_or(program.span, |s| s.span);
    branches.push(BranchId {
        id: exit_branch_id(sites.len()),
        kind: BranchKind::ProgramExit,
        span: end_span,
    });

    SensitivityReport {
        program: program.name.clone(),
        ket,
        sites,
        branches,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HookKind {
    InputMatrixRead,
    KetTransform,
    KetBeforeMeasurement,
    MeasurementResult,
}

/// Where the interpreter reports data for one sensitive site. `order` is the
/// 1-based firing order along an execution that reaches the site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hook {
    pub order: u8,
    pub kind: HookKind,
    pub span: Span,
}

/// The four observation points for `site`: input read before the first
/// statement, loading the input into the register, the ket right before the
/// guard, and the measured value.
pub fn instrumentation_points(program: &Program, site: &SensitiveSite) -> Result<[Hook; 4], AnalysisError> {
    let report = extract_sensitive(program);
    if report.site(site.site_id) != Some(site) {
        return Err(AnalysisError::UnknownSite(site.site_id));
    }
    let first = program.body.first().map_or(program.span, |s| s.span);
    let ket_span = report.ket.as_ref().map_or(first, |k| k.span);
    Ok([
        Hook {
            order: 1,
            kind: HookKind::InputMatrixRead,
            span: first,
        },
        Hook {
            order: 2,
            kind: HookKind::KetTransform,
            span: ket_span,
        },
        Hook {
            order: 3,
            kind: HookKind::KetBeforeMeasurement,
            span: site.span,
        },
        Hook {
            order: 4,
            kind: HookKind::MeasurementResult,
            span: site.measure_span,
        },
    ])
}
