// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::math::GateKind;

/// 1-based line and column of a token in the source text.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn new(line: u32, col: u32) -> Self {
        Span { line, col }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Program {
    pub name: String,
    pub body: Vec<Stmt>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stmt {
    pub kind: StmtKind,
    pub span: Span,
}

/// Comparison used by a measurement guard. Only equality exists today.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CmpOp {
    #[serde(rename = "==")]
    Eq,
}

impl CmpOp {
    pub fn holds(self, measured: u64, target: u64) -> bool {
        match self {
            CmpOp::Eq => measured == target,
        }
    }
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CmpOp::Eq => f.write_str("=="),
        }
    }
}

/// `q` or `q[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegRef {
    pub register: String,
    pub qubit: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StmtKind {
    QuregDecl {
        name: String,
        n_qubits: usize,
    },
    GateApply {
        gate: GateKind,
        target: RegRef,
    },
    Mix {
        register: String,
    },
    IfMeasure {
        /// Ordinal of this measurement in source order.
        site: usize,
        register: String,
        cmp: CmpOp,
        target: u64,
        measure_span: Span,
        then_body: Vec<Stmt>,
        else_body: Option<Vec<Stmt>>,
    },
    Print(String),
    IntDecl {
        name: String,
        value: Expr,
    },
    Assign {
        name: String,
        value: Expr,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    pub fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Int(i64),
    Var(String),
    Binary { op: BinOp, lhs: Box<Expr>, rhs: Box<Expr> },
}

impl Program {
    /// Declared register name and width, if any.
    pub fn register(&self) -> Option<(&str, usize)> {
        self.body.iter().find_map(|s| match &s.kind {
            StmtKind::QuregDecl { name, n_qubits } => Some((name.as_str(), *n_qubits)),
            _ => None,
        })
    }

    /// Copy with every span zeroed, for comparing programs by structure only.
    pub fn without_spans(&self) -> Program {
        Program {
            name: self.name.clone(),
            body: strip_block(&self.body),
            span: Span::default(),
        }
    }

    /// Pre-order walk over every statement, including nested branches.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Stmt)) {
        walk_block(&self.body, f);
    }
}

fn walk_block<'a>(block: &'a [Stmt], f: &mut impl FnMut(&'a Stmt)) {
    for stmt in block {
        f(stmt);
        if let StmtKind::IfMeasure {
            then_body, else_body, ..
        } = &stmt.kind
        {
            walk_block(then_body, f);
            if let Some(e) = else_body {
                walk_block(e, f);
            }
        }
    }
}

fn strip_block(block: &[Stmt]) -> Vec<Stmt> {
    block.iter().map(strip_stmt).collect()
}

fn strip_stmt(stmt: &Stmt) -> Stmt {
    let kind = match &stmt.kind {
        StmtKind::IfMeasure {
            site,
            register,
            cmp,
            target,
            then_body,
            else_body,
            ..
        } => StmtKind::IfMeasure {
            site: *site,
            register: register.clone(),
            cmp: *cmp,
            target: *target,
            measure_span: Span::default(),
            then_body: strip_block(then_body),
            else_body: else_body.as_deref().map(strip_block),
        },
        StmtKind::IntDecl { name, value } => StmtKind::IntDecl {
            name: name.clone(),
            value: strip_expr(value),
        },
        StmtKind::Assign { name, value } => StmtKind::Assign {
            name: name.clone(),
            value: strip_expr(value),
        },
        other => other.clone(),
    };
    Stmt {
        kind,
        span: Span::default(),
    }
}

fn strip_expr(e: &Expr) -> Expr {
    let kind = match &e.kind {
        ExprKind::Binary { op, lhs, rhs } => ExprKind::Binary {
            op: *op,
            lhs: Box::new(strip_expr(lhs)),
            rhs: Box::new(strip_expr(rhs)),
        },
        other => other.clone(),
    };
    Expr {
        kind,
        span: Span::default(),
    }
}
