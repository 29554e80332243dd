//! Text grammar for polynomials:
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | atom ['^' integer]
//! atom   := integer ['/' integer] | '[' c0 ',' c1 ... ']' | 'X' index | '(' expr ')'
//! ```
//!
//! Variables are `X1..Xn`; bracketed vectors are extension-field elements in
//! little-endian coordinates.

use num_bigint::BigInt;

use super::{Monomial, MultiPoly};
use crate::error::{Error, Result};
use crate::scalars::{Field, FieldElement};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(String),
    Bracket(Vec<u64>),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(text[start..i].parse().expect("digits"))));
                continue;
            }
            b'A'..=b'Z' | b'a'..=b'z' => {
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                out.push((start, Tok::Var(text[start..i].to_string())));
                continue;
            }
            b'[' => {
                let close = text[i..].find(']').ok_or(Error::Parse {
                    pos: i,
                    msg: "unterminated `[`".into(),
                })?;
                let inner = &text[i + 1..i + close];
                let coords = inner
                    .split(',')
                    .map(|s| s.trim().parse::<u64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| Error::Parse {
                        pos: i,
                        msg: format!("bad coordinate vector `[{inner}]`"),
                    })?;
                out.push((start, Tok::Bracket(coords)));
                i += close + 1;
                continue;
            }
            b'+' => out.push((start, Tok::Plus)),
            b'-' => out.push((start, Tok::Minus)),
            b'*' => out.push((start, Tok::Star)),
            b'/' => out.push((start, Tok::Slash)),
            b'^' => out.push((start, Tok::Caret)),
            b'(' => out.push((start, Tok::LParen)),
            b')' => out.push((start, Tok::RParen)),
            _ => {
                return Err(Error::Parse {
                    pos: i,
                    msg: format!("unexpected character `{}`", c as char),
                })
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    nvars: usize,
    ctx: &'a Field,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = match self.peek() {
            Some(Tok::Plus) => {
                self.at += 1;
                self.term()?
            }
            Some(Tok::Minus) => {
                self.at += 1;
                -&self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.at += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.at += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.at += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly> {
        if self.peek() == Some(&Tok::Minus) {
            self.at += 1;
            return Ok(-&self.factor()?);
        }
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.at += 1;
            match self.peek().cloned() {
                Some(Tok::Int(e)) => {
                    self.at += 1;
                    let e: u32 = e
                        .try_into()
                        .or_else(|_| self.err("exponent out of range"))?;
                    return Ok(base.pow(e));
                }
                _ => return self.err("expected a nonnegative integer exponent"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(num)) => {
                self.at += 1;
                let c = if self.peek() == Some(&Tok::Slash) {
                    self.at += 1;
                    match self.peek().cloned() {
                        Some(Tok::Int(den)) => {
                            self.at += 1;
                            FieldElement::from_ratio(self.ctx, &num, &den)?
                        }
                        _ => return self.err("expected a denominator after `/`"),
                    }
                } else {
                    FieldElement::from_bigint(self.ctx, &num)
                };
                Ok(MultiPoly::constant(self.ctx, self.nvars, c))
            }
            Some(Tok::Bracket(coords)) => {
                self.at += 1;
                let c = FieldElement::from_coeffs(self.ctx, &coords)?;
                Ok(MultiPoly::constant(self.ctx, self.nvars, c))
            }
            Some(Tok::Var(name)) => {
                self.at += 1;
                let index = name
                    .strip_prefix('X')
                    .and_then(|s| s.parse::<usize>().ok())
                    .filter(|&i| i >= 1 && i <= self.nvars);
                match index {
                    Some(i) => Ok(MultiPoly::monomial(
                        self.ctx,
                        Monomial::var(self.nvars, i - 1),
                        FieldElement::one(self.ctx),
                    )),
                    None => Err(Error::UnknownVariable { name, pos }),
                }
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                self.at += 1;
                Ok(inner)
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses a polynomial in `n` variables over `ctx`.
pub fn parse_poly(text: &str, n: usize, ctx: &Field) -> Result<MultiPoly> {
    let toks = lex(text)?;
    let mut parser = Parser {
        toks,
        at: 0,
        end: text.len(),
        nvars: n,
        ctx,
    };
    let out = parser.expr()?;
    if parser.at != parser.toks.len() {
        return parser.err("trailing input");
    }
    Ok(out)
}

/// Parses a single field element (any constant expression).
pub fn parse_element(text: &str, ctx: &Field) -> Result<FieldElement> {
    let f = parse_poly(text, 0, ctx)?;
    Ok(f.coeff(&Monomial::one(0)))
}
