// SPDX-License-Identifier: Apache-2.0

//! Front end for the quantum while-language: a single-register subset of
//! QCL with gates, `Mix`, measurement-guarded `if`, `print` and integer
//! arithmetic. Source files conventionally use the `.qpl` extension.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod printer;

use std::fmt;

use thiserror::Error;

pub use ast::{BinOp, CmpOp, Expr, ExprKind, Program, RegRef, Span, Stmt, StmtKind};
pub use lexer::{tokenize, Tok, Token};
pub use parser::parse;
pub use printer::pretty_print;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Lex,
    Syntax,
    Binding,
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorKind::Lex => "lex error",
            ErrorKind::Syntax => "syntax error",
            ErrorKind::Binding => "binding error",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at {span}: {message}")]
pub struct DslError {
    pub kind: ErrorKind,
    pub span: Span,
    pub message: String,
}

impl DslError {
    pub fn new(kind: ErrorKind, span: Span, message: impl Into<String>) -> Self {
        DslError {
            kind,
            span,
            message: message.into(),
        }
    }
}
