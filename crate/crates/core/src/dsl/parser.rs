// SPDX-License-Identifier: Apache-2.0

//! Recursive-descent parser followed by a binding pass.
//!
//! ```text
//! program := "procedure" ident "(" ")" block ;
//! block   := "{" stmt* "}" ;
//! stmt    := "qureg" ident "[" int "]" ";"
//!          | GATE "(" regref ")" ";"
//!          | "Mix" "(" ident ")" ";"
//!          | "if" "(" "measure" "(" ident ")" "==" int ")" block ("else" block)?
//!          | "print" string ";"
//!          | "int" ident "=" expr ";"
//!          | ident "=" expr ";" ;
//! regref  := ident | ident "[" int "]" ;
//! expr    := term (("+" | "-") term)* ;
//! term    := atom (("*" | "/") atom)* ;
//! atom    := int | ident | "(" expr ")" ;
//! ```

use std::collections::HashSet;

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use super::{DslError, ErrorKind};
use crate::math::{GateKind, MAX_QUBITS};

/// Parses and binds a program.
pub fn parse(text: &str) -> Result<Program, DslError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        next_site: 0,
    };
    let program = parser.program()?;
    bind(&program)?;
    Ok(program)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    next_site: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> DslError {
        let t = self.peek();
        DslError::new(
            ErrorKind::Syntax,
            t.span,
            format!("expected {expected}, found {}", t.tok),
        )
    }

    fn expect(&mut self, tok: Tok) -> Result<Span, DslError> {
        if self.peek().tok == tok {
            Ok(self.advance().span)
        } else {
            Err(self.unexpected(&tok.to_string()))
        }
    }

    fn ident(&mut self) -> Result<(String, Span), DslError> {
        match &self.peek().tok {
            Tok::Ident(name) => {
                let name = name.clone();
                Ok((name, self.advance().span))
            }
            _ => Err(self.unexpected("identifier")),
        }
    }

    fn number(&mut self) -> Result<(u64, Span), DslError> {
        match self.peek().tok {
            Tok::Number(n) => Ok((n, self.advance().span)),
            _ => Err(self.unexpected("integer")),
        }
    }

    fn program(&mut self) -> Result<Program, DslError> {
        let span = self.expect(Tok::Procedure)?;
        let (name, _) = self.ident()?;
        self.expect(Tok::LParen)?;
        self.expect(Tok::RParen)?;
        let body = self.block()?;
        self.expect(Tok::Eof)?;
        Ok(Program { name, body, span })
    }

    fn block(&mut self) -> Result<Vec<Stmt>, DslError> {
        self.expect(Tok::LBrace)?;
        let mut stmts = Vec::new();
        while !matches!(self.peek().tok, Tok::RBrace | Tok::Eof) {
            stmts.push(self.stmt()?);
        }
        self.expect(Tok::RBrace)?;
        Ok(stmts)
    }

    fn stmt(&mut self) -> Result<Stmt, DslError> {
        let span = self.peek().span;
        let kind = match self.peek().tok.clone() {
            Tok::Qureg => {
                self.advance();
                let (name, _) = self.ident()?;
                self.expect(Tok::LBrack)?;
                let (n, n_span) = self.number()?;
                self.expect(Tok::RBrack)?;
                self.expect(Tok::Semi)?;
                let n_qubits = usize::try_from(n)
                    .ok()
                    .filter(|n| (1..=MAX_QUBITS).contains(n))
                    .ok_or_else(|| {
                        DslError::new(
                            ErrorKind::Binding,
                            n_span,
                            format!("register width must be between 1 and {MAX_QUBITS}, got {n}"),
                        )
                    })?;
                StmtKind::QuregDecl { name, n_qubits }
            }
            Tok::Mix => {
                self.advance();
                self.expect(Tok::LParen)?;
                let (register, _) = self.ident()?;
                self.expect(Tok::RParen)?;
                self.expect(Tok::Semi)?;
                StmtKind::Mix { register }
            }
            Tok::If => {
                self.advance();
                self.expect(Tok::LParen)?;
                let measure_span = self.expect(Tok::Measure)?;
                self.expect(Tok::LParen)?;
                let (register, _) = self.ident()?;
                self.expect(Tok::RParen)?;
                self.expect(Tok::EqEq)?;
                let (target, _) = self.number()?;
                self.expect(Tok::RParen)?;
                let site = self.next_site;
                self.next_site += 1;
                let then_body = self.block()?;
                let else_body = if self.peek().tok == Tok::Else {
                    self.advance();
                    Some(self.block()?)
                } else {
                    None
                };
                StmtKind::IfMeasure {
                    site,
                    register,
                    cmp: CmpOp::Eq,
                    target,
                    measure_span,
                    then_body,
                    else_body,
                }
            }
            Tok::Print => {
                self.advance();
                let text = match &self.peek().tok {
                    Tok::Str(s) => s.clone(),
                    _ => return Err(self.unexpected("string literal")),
                };
                self.advance();
                self.expect(Tok::Semi)?;
                StmtKind::Print(text)
            }
            Tok::Int => {
                self.advance();
                let (name, _) = self.ident()?;
                self.expect(Tok::Assign)?;
                let value = self.expr()?;
                self.expect(Tok::Semi)?;
                StmtKind::IntDecl { name, value }
            }
            Tok::Ident(name) => match (GateKind::from_symbol(&name), self.peek_at(1)) {
                (Some(gate), Tok::LParen) => {
                    self.advance();
                    self.advance();
                    let (register, _) = self.ident()?;
                    let qubit = if self.peek().tok == Tok::LBrack {
                        self.advance();
                        let (i, i_span) = self.number()?;
                        self.expect(Tok::RBrack)?;
                        Some(usize::try_from(i).map_err(|_| {
                            DslError::new(ErrorKind::Binding, i_span, format!("qubit index {i} is too large"))
                        })?)
                    } else {
                        None
                    };
                    self.expect(Tok::RParen)?;
                    self.expect(Tok::Semi)?;
                    StmtKind::GateApply {
                        gate,
                        target: RegRef { register, qubit },
                    }
                }
                _ => {
                    self.advance();
                    self.expect(Tok::Assign)?;
                    let value = self.expr()?;
                    self.expect(Tok::Semi)?;
                    StmtKind::Assign { name, value }
                }
            },
            _ => return Err(self.unexpected("statement")),
        };
        Ok(Stmt { kind, span })
    }

    fn expr(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.advance();
            let rhs = self.term()?;
            lhs = binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.atom()?;
        loop {
            let op = match self.peek().tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.advance();
            let rhs = self.atom()?;
            lhs = binary(op, lhs, rhs);
        }
    }

    fn atom(&mut self) -> Result<Expr, DslError> {
        let span = self.peek().span;
        let kind = match self.peek().tok.clone() {
            Tok::Number(n) => {
                self.advance();
                ExprKind::Int(i64::try_from(n).map_err(|_| {
                    DslError::new(
                        ErrorKind::Syntax,
                        span,
                        format!("integer `{n}` does not fit in 64 bits"),
                    )
                })?)
            }
            Tok::Ident(name) => {
                self.advance();
                ExprKind::Var(name)
            }
            Tok::LParen => {
                self.advance();
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                return Ok(inner);
            }
            _ => return Err(self.unexpected("expression")),
        };
        Ok(Expr { kind, span })
    }
}

fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
    Expr {
        span: lhs.span,
        kind: ExprKind::Binary {
            op,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
        },
    }
}

/// Semantic checks: one top-level register declared before use, qubit
/// indices and measurement targets within the register width, variables
/// declared before use in an enclosing block.
fn bind(program: &Program) -> Result<(), DslError> {
    let mut binder = Binder {
        register: None,
        scopes: vec![HashSet::new()],
    };
    binder.block(&program.body, true)
}

struct Binder<'a> {
    register: Option<(&'a str, usize)>,
    scopes: Vec<HashSet<&'a str>>,
}

impl<'a> Binder<'a> {
    fn block(&mut self, stmts: &'a [Stmt], top_level: bool) -> Result<(), DslError> {
        for stmt in stmts {
            self.stmt(stmt, top_level)?;
        }
        Ok(())
    }

    fn nested(&mut self, stmts: &'a [Stmt]) -> Result<(), DslError> {
        self.scopes.push(HashSet::new());
        let r = self.block(stmts, false);
        self.scopes.pop();
        r
    }

    fn use_register(&self, name: &str, span: Span) -> Result<usize, DslError> {
        match self.register {
            Some((declared, width)) if declared == name => Ok(width),
            _ => Err(DslError::new(
                ErrorKind::Binding,
                span,
                format!("undeclared register `{name}`"),
            )),
        }
    }

    fn stmt(&mut self, stmt: &'a Stmt, top_level: bool) -> Result<(), DslError> {
        let err = |msg: String| Err(DslError::new(ErrorKind::Binding, stmt.span, msg));
        match &stmt.kind {
            StmtKind::QuregDecl { name, n_qubits } => {
                if self.register.is_some() {
                    return err("only one register may be declared per program".into());
                }
                if !top_level {
                    return err("register declarations must appear at procedure top level".into());
                }
                self.register = Some((name, *n_qubits));
            }
            StmtKind::GateApply { target, .. } => {
                let width = self.use_register(&target.register, stmt.span)?;
                if let Some(q) = target.qubit {
                    if q >= width {
                        return err(format!(
                            "qubit index {q} out of range for register `{}` of width {width}",
                            target.register
                        ));
                    }
                }
            }
            StmtKind::Mix { register } => {
                self.use_register(register, stmt.span)?;
            }
            StmtKind::IfMeasure {
                register,
                target,
                then_body,
                else_body,
                ..
            } => {
                let width = self.use_register(register, stmt.span)?;
                if *target >= 1u64 << width {
                    return err(format!(
                        "measurement target {target} does not fit in a {width}-qubit register"
                    ));
                }
                self.nested(then_body)?;
                if let Some(e) = else_body {
                    self.nested(e)?;
                }
            }
            StmtKind::Print(_) => {}
            StmtKind::IntDecl { name, value } => {
                self.expr(value)?;
                if !self.scopes.last_mut().unwrap().insert(name) {
                    return err(format!("variable `{name}` is already declared in this block"));
                }
            }
            StmtKind::Assign { name, value } => {
                self.expr(value)?;
                if !self.is_declared(name) {
                    return err(format!("assignment to undeclared variable `{name}`"));
                }
            }
        }
        Ok(())
    }

    fn is_declared(&self, name: &str) -> bool {
        self.scopes.iter().any(|s| s.contains(name))
    }

    fn expr(&self, e: &Expr) -> Result<(), DslError> {
        match &e.kind {
            ExprKind::Int(_) => Ok(()),
            ExprKind::Var(name) if self.is_declared(name) => Ok(()),
            ExprKind::Var(name) => Err(DslError::new(
                ErrorKind::Binding,
                e.span,
                format!("undeclared variable `{name}`"),
            )),
            ExprKind::Binary { lhs, rhs, .. } => {
                self.expr(lhs)?;
                self.expr(rhs)
            }
        }
    }
}
