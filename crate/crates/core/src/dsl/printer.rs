// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write as _;

use super::ast::*;

const INDENT: &str = "    ";

/// Canonical source form of a program. Re-parsing the output yields the same
/// program up to spans.
pub fn pretty_print(program: &Program) -> String {
    let mut out = format!("procedure {}(){{\n", program.name);
    print_block(&mut out, &program.body, 1);
    out.push_str("}\n");
    out
}

fn print_block(out: &mut String, stmts: &[Stmt], depth: usize) {
    for stmt in stmts {
        print_stmt(out, stmt, depth);
    }
}

fn print_stmt(out: &mut String, stmt: &Stmt, depth: usize) {
    let pad = INDENT.repeat(depth);
    match &stmt.kind {
        StmtKind::QuregDecl { name, n_qubits } => {
            writeln!(out, "{pad}qureg {name}[{n_qubits}];").unwrap();
        }
        StmtKind::GateApply { gate, target } => match target.qubit {
            Some(q) => writeln!(out, "{pad}{gate}({}[{q}]);", target.register).unwrap(),
            None => writeln!(out, "{pad}{gate}({});", target.register).unwrap(),
        },
        StmtKind::Mix { register } => {
            writeln!(out, "{pad}Mix({register});").unwrap();
        }
        StmtKind::IfMeasure {
            register,
            cmp,
            target,
            then_body,
            else_body,
            ..
        } => {
            writeln!(out, "{pad}if (measure({register}) {cmp} {target}) {{").unwrap();
            print_block(out, then_body, depth + 1);
            match else_body {
                Some(e) => {
                    writeln!(out, "{pad}}} else {{").unwrap();
                    print_block(out, e, depth + 1);
                    writeln!(out, "{pad}}}").unwrap();
                }
                None => writeln!(out, "{pad}}}").unwrap(),
            }
        }
        StmtKind::Print(text) => {
            writeln!(out, "{pad}print \"{}\";", escape(text)).unwrap();
        }
        StmtKind::IntDecl { name, value } => {
            writeln!(out, "{pad}int {name} = {};", expr_to_string(value)).unwrap();
        }
        StmtKind::Assign { name, value } => {
            writeln!(out, "{pad}{name} = {};", expr_to_string(value)).unwrap();
        }
    }
}

fn escape(text: &str) -> String {
    let mut s = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '"' => s.push_str("\\\""),
            '\\' => s.push_str("\\\\"),
            '\n' => s.push_str("\\n"),
            '\t' => s.push_str("\\t"),
            c => s.push(c),
        }
    }
    s
}

/// Infix form with the minimum parentheses for left-associative operators.
pub fn expr_to_string(e: &Expr) -> String {
    let mut s = String::new();
    write_expr(&mut s, e);
    s
}

fn write_expr(out: &mut String, e: &Expr) {
    match &e.kind {
        ExprKind::Int(v) => write!(out, "{v}").unwrap(),
        ExprKind::Var(name) => out.push_str(name),
        ExprKind::Binary { op, lhs, rhs } => {
            let prec = op.precedence();
            write_operand(out, lhs, |p| p < prec);
            write!(out, " {} ", op.symbol()).unwrap();
            write_operand(out, rhs, |p| p <= prec);
        }
    }
}

fn write_operand(out: &mut String, e: &Expr, needs_parens: impl Fn(u8) -> bool) {
    let wrap = matches!(&e.kind, ExprKind::Binary { op, .. } if needs_parens(op.precedence()));
    if wrap {
        out.push('(');
    }
    write_expr(out, e);
    if wrap {
        out.push(')');
    }
}
