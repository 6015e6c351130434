//! Text input: polynomial expressions and system files.
//!
//! A polynomial expression uses `+ - * / ^ ( )`, integer or `a/b` rational
//! literals, declared variable names, and declared parameter names.  Division
//! is only allowed by variable-free (scalar) subexpressions.  A system file
//! has a `vars:` header line, an optional `params:` line, then one generator
//! per line; `#` starts a comment.

use crate::poly::{Context, Monomial, MonomialOrder, PolySystem, Polynomial};
use crate::scalar::{ParamPoly, Rat, RatFun, Scalar};
use num_bigint::BigInt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, col: usize, msg: impl Into<String>) -> Self {
        ParseError {
            line,
            col,
            msg: msg.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>, // token, column (1-based)
    pos: usize,
    line: usize,
}

impl Lexer {
    fn new(input: &str, line: usize) -> Result<Self, ParseError> {
        let mut toks = Vec::new();
        let chars: Vec<char> = input.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            match c {
                ' ' | '\t' => {
                    i += 1;
                }
                '+' => {
                    toks.push((Tok::Plus, col));
                    i += 1;
                }
                '-' | '\u{2212}' => {
                    toks.push((Tok::Minus, col));
                    i += 1;
                }
                '*' => {
                    toks.push((Tok::Star, col));
                    i += 1;
                }
                '/' => {
                    toks.push((Tok::Slash, col));
                    i += 1;
                }
                '^' => {
                    toks.push((Tok::Caret, col));
                    i += 1;
                }
                '(' => {
                    toks.push((Tok::LParen, col));
                    i += 1;
                }
                ')' => {
                    toks.push((Tok::RParen, col));
                    i += 1;
                }
                '0'..='9' => {
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let s: String = chars[start..i].iter().collect();
                    let n = BigInt::from_str(&s)
                        .map_err(|e| ParseError::new(line, col, format!("bad integer: {}", e)))?;
                    toks.push((Tok::Int(n), col));
                }
                c if c.is_ascii_alphabetic() => {
                    let start = i;
                    while i < chars.len()
                        && (chars[i].is_ascii_alphanumeric() || chars[i] == '_')
                    {
                        i += 1;
                    }
                    let s: String = chars[start..i].iter().collect();
                    toks.push((Tok::Ident(s), col));
                }
                other => {
                    return Err(ParseError::new(
                        line,
                        col,
                        format!("unexpected character {:?}", other),
                    ))
                }
            }
        }
        toks.push((Tok::End, chars.len() + 1));
        Ok(Lexer { toks, pos: 0, line })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.col(), msg)
    }
}

struct Parser<'a> {
    lex: Lexer,
    ctx: &'a Context,
}

impl<'a> Parser<'a> {
    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = match self.lex.peek() {
            Tok::Minus => {
                self.lex.bump();
                self.term()?.neg()
            }
            Tok::Plus => {
                self.lex.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.lex.peek() {
                Tok::Plus => {
                    self.lex.bump();
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.lex.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.lex.peek() {
                Tok::Star => {
                    self.lex.bump();
                    acc = acc.mul(&self.factor()?);
                }
                Tok::Slash => {
                    self.lex.bump();
                    let col = self.lex.col();
                    let rhs = self.factor()?;
                    let c = scalar_of(&rhs).ok_or_else(|| {
                        ParseError::new(
                            self.lex.line,
                            col,
                            "division is only allowed by a variable-free expression",
                        )
                    })?;
                    let inv = c.inv().map_err(|_| {
                        ParseError::new(self.lex.line, col, "division by zero")
                    })?;
                    acc = acc.scale(&inv);
                }
                // Implicit multiplication: `2x` or `(a+b)x` styles.
                Tok::Ident(_) | Tok::LParen => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if matches!(self.lex.peek(), Tok::Caret) {
            self.lex.bump();
            let e = match self.lex.bump() {
                Tok::Int(n) => n,
                _ => return Err(self.lex.err("expected integer exponent after '^'")),
            };
            let e: u32 = e
                .try_into()
                .map_err(|_| self.lex.err("exponent out of range"))?;
            let mut acc = Polynomial::constant(Scalar::one(), self.ctx.nvars());
            for _ in 0..e {
                acc = acc.mul(&base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        match self.lex.peek().clone() {
            Tok::Int(_) => {
                let n = match self.lex.bump() {
                    Tok::Int(n) => n,
                    _ => unreachable!(),
                };
                Ok(Polynomial::constant(
                    Scalar::Rat(Rat::from_integer(n)),
                    self.ctx.nvars(),
                ))
            }
            Tok::Ident(name) => {
                self.lex.bump();
                if let Some(i) = self.ctx.var_index(&name) {
                    Ok(Polynomial::monomial(
                        Monomial::var(i, self.ctx.nvars()),
                        Scalar::one(),
                    ))
                } else if let Some(i) = self.ctx.param_index(&name) {
                    Ok(Polynomial::constant(
                        Scalar::param(i, self.ctx.nparams()),
                        self.ctx.nvars(),
                    ))
                } else {
                    Err(self.lex.err(format!(
                        "unknown identifier {:?} (not a declared variable or parameter)",
                        name
                    )))
                }
            }
            Tok::Minus => {
                self.lex.bump();
                Ok(self.factor()?.neg())
            }
            Tok::LParen => {
                self.lex.bump();
                let e = self.expr()?;
                match self.lex.bump() {
                    Tok::RParen => Ok(e),
                    _ => Err(self.lex.err("expected ')'")),
                }
            }
            _ => Err(self.lex.err("expected a number, identifier or '('")),
        }
    }
}

/// The scalar value of a variable-free polynomial.
fn scalar_of(p: &Polynomial) -> Option<Scalar> {
    if p.is_zero() {
        return Some(Scalar::zero());
    }
    if p.num_terms() == 1 {
        let (m, c) = p.terms().next().unwrap();
        if m.is_one() {
            return Some(c.clone());
        }
    }
    None
}

pub fn parse_polynomial(input: &str, ctx: &Context) -> Result<Polynomial, ParseError> {
    parse_polynomial_at(input, ctx, 1)
}

pub fn parse_polynomial_at(
    input: &str,
    ctx: &Context,
    line: usize,
) -> Result<Polynomial, ParseError> {
    let lex = Lexer::new(input, line)?;
    let mut p = Parser { lex, ctx };
    let poly = p.expr()?;
    if !matches!(p.lex.peek(), Tok::End) {
        return Err(p.lex.err("trailing input after expression"));
    }
    Ok(poly)
}

/// Parse a scalar expression (no variables allowed).
pub fn parse_scalar(input: &str, params: &[String]) -> Result<Scalar, ParseError> {
    let ctx = Context::new(Vec::new(), params.to_vec(), MonomialOrder::Grevlex);
    let p = parse_polynomial(input, &ctx)?;
    scalar_of(&p).ok_or_else(|| ParseError::new(1, 1, "expected a scalar expression"))
}

/// Parse a system file: `vars:` line, optional `params:` line, optional
/// `order:` line, then one generator per line.
pub fn parse_system(input: &str) -> Result<PolySystem, ParseError> {
    let mut vars: Option<Vec<String>> = None;
    let mut params: Vec<String> = Vec::new();
    let mut order = MonomialOrder::Grevlex;
    let mut gens = Vec::new();
    let mut gen_lines = Vec::new();
    for (lineno, raw) in input.lines().enumerate() {
        let lineno = lineno + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(rest) = body.strip_prefix("vars:") {
            let names: Vec<String> = rest.split_whitespace().map(|s| s.to_string()).collect();
            if names.is_empty() {
                return Err(ParseError::new(lineno, 1, "empty vars: declaration"));
            }
            check_names(&names, lineno)?;
            vars = Some(names);
        } else if let Some(rest) = body.strip_prefix("params:") {
            let names: Vec<String> = rest.split_whitespace().map(|s| s.to_string()).collect();
            check_names(&names, lineno)?;
            params = names;
        } else if let Some(rest) = body.strip_prefix("order:") {
            let name = rest.trim();
            order = MonomialOrder::parse(name).ok_or_else(|| {
                ParseError::new(lineno, 1, format!("unknown monomial order {:?}", name))
            })?;
        } else {
            gen_lines.push((lineno, body.to_string()));
        }
    }
    let vars = vars.ok_or_else(|| ParseError::new(1, 1, "missing vars: declaration"))?;
    for v in &vars {
        if params.contains(v) {
            return Err(ParseError::new(
                1,
                1,
                format!("{:?} declared as both variable and parameter", v),
            ));
        }
    }
    let ctx = Context::new(vars, params, order);
    for (lineno, body) in gen_lines {
        gens.push(parse_polynomial_at(&body, &ctx, lineno)?);
    }
    Ok(PolySystem::new(ctx, gens))
}

fn check_names(names: &[String], lineno: usize) -> Result<(), ParseError> {
    for n in names {
        let mut chars = n.chars();
        let ok = chars
            .next()
            .map(|c| c.is_ascii_alphabetic())
            .unwrap_or(false)
            && n.chars().skip(1).all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok {
            return Err(ParseError::new(
                lineno,
                1,
                format!("invalid identifier {:?}", n),
            ));
        }
        if names.iter().filter(|m| *m == n).count() > 1 {
            return Err(ParseError::new(
                lineno,
                1,
                format!("duplicate identifier {:?}", n),
            ));
        }
    }
    Ok(())
}

/// Round-trip helper used in tests and for JSON serialization.
pub fn reparse(p: &Polynomial, ctx: &Context) -> Polynomial {
    parse_polynomial(&p.to_text(ctx), ctx).expect("printed polynomial reparses")
}

#[allow(dead_code)]
fn unused(_: &ParamPoly, _: &RatFun) {}
