// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use super::ast::Span;
use super::{DslError, ErrorKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Procedure,
    Qureg,
    Mix,
    If,
    Else,
    Measure,
    Print,
    Int,
    Ident(String),
    Number(u64),
    Str(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBrack,
    RBrack,
    Semi,
    EqEq,
    Assign,
    Plus,
    Minus,
    Star,
    Slash,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Procedure => f.write_str("`procedure`"),
            Tok::Qureg => f.write_str("`qureg`"),
            Tok::Mix => f.write_str("`Mix`"),
            Tok::If => f.write_str("`if`"),
            Tok::Else => f.write_str("`else`"),
            Tok::Measure => f.write_str("`measure`"),
            Tok::Print => f.write_str("`print`"),
            Tok::Int => f.write_str("`int`"),
            Tok::Ident(name) => write!(f, "identifier `{name}`"),
            Tok::Number(n) => write!(f, "integer `{n}`"),
            Tok::Str(_) => f.write_str("string literal"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::LBrack => f.write_str("`[`"),
            Tok::RBrack => f.write_str("`]`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::EqEq => f.write_str("`==`"),
            Tok::Assign => f.write_str("`=`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    col: u32,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn span(&self) -> Span {
        Span::new(self.line, self.col)
    }
}

/// Splits source text into tokens. Whitespace and `//` line comments are
/// dropped; the stream always ends with [`Tok::Eof`].
pub fn tokenize(text: &str) -> Result<Vec<Token>, DslError> {
    let mut cur = Cursor {
        chars: text.chars().peekable(),
        line: 1,
        col: 1,
    };
    let mut out = Vec::new();

    while let Some(c) = cur.peek() {
        let span = cur.span();
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        let tok = match c {
            '/' => {
                cur.bump();
                if cur.peek() == Some('/') {
                    while cur.peek().is_some_and(|c| c != '\n') {
                        cur.bump();
                    }
                    continue;
                }
                Tok::Slash
            }
            '=' => {
                cur.bump();
                if cur.peek() == Some('=') {
                    cur.bump();
                    Tok::EqEq
                } else {
                    Tok::Assign
                }
            }
            '(' | ')' | '{' | '}' | '[' | ']' | ';' | '+' | '-' | '*' => {
                cur.bump();
                match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '[' => Tok::LBrack,
                    ']' => Tok::RBrack,
                    ';' => Tok::Semi,
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    _ => Tok::Star,
                }
            }
            '"' => {
                cur.bump();
                Tok::Str(lex_string(&mut cur, span)?)
            }
            c if c.is_ascii_digit() => {
                let mut digits = String::new();
                while let Some(d) = cur.peek().filter(char::is_ascii_digit) {
                    digits.push(d);
                    cur.bump();
                }
                let n = digits.parse().map_err(|_| {
                    DslError::new(ErrorKind::Lex, span, format!("integer literal `{digits}` is too large"))
                })?;
                Tok::Number(n)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut word = String::new();
                while let Some(d) = cur.peek().filter(|d| d.is_ascii_alphanumeric() || *d == '_') {
                    word.push(d);
                    cur.bump();
                }
                keyword(&word).unwrap_or(Tok::Ident(word))
            }
            other => {
                return Err(DslError::new(
                    ErrorKind::Lex,
                    span,
                    format!("unexpected character `{}`", other.escape_debug()),
                ))
            }
        };
        out.push(Token { tok, span });
    }
    // anchored on the last real token so errors at end of input stay inside it
    let eof_span = out.last().map_or(Span::new(1, 1), |t: &Token| t.span);
    out.push(Token {
        tok: Tok::Eof,
        span: eof_span,
    });
    Ok(out)
}

fn keyword(word: &str) -> Option<Tok> {
    Some(match word {
        "procedure" => Tok::Procedure,
        "qureg" => Tok::Qureg,
        "Mix" => Tok::Mix,
        "if" => Tok::If,
        "else" => Tok::Else,
        "measure" => Tok::Measure,
        "print" => Tok::Print,
        "int" => Tok::Int,
        _ => return None,
    })
}

fn lex_string(cur: &mut Cursor<'_>, start: Span) -> Result<String, DslError> {
    let mut s = String::new();
    loop {
        match cur.bump() {
            None | Some('\n') => {
                return Err(DslError::new(ErrorKind::Lex, start, "unterminated string literal"));
            }
            Some('"') => return Ok(s),
            Some('\\') => {
                let esc_span = cur.span();
                match cur.bump() {
                    Some('"') => s.push('"'),
                    Some('\\') => s.push('\\'),
                    Some('n') => s.push('\n'),
                    Some('t') => s.push('\t'),
                    other => {
                        return Err(DslError::new(
                            ErrorKind::Lex,
                            esc_span,
                            format!("unknown escape `\\{}`", other.map(String::from).unwrap_or_default()),
                        ))
                    }
                }
            }
            Some(c) => s.push(c),
        }
    }
}
