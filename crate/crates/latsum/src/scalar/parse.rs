//! Parser for exact scalar strings.
//!
//! Grammar (whitespace ignored):
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' '-'? integer)?
//! atom  := integer | "pi" | "z" | "i" | '(' expr ')'
//! ```
//! `z` is ζ_N and `i` is √−1 = ζ_N^{N/4}.

use num_bigint::BigInt;
use num_traits::Zero;

use super::ExactScalar;
use crate::error::{Error, Result};
use crate::rat::Q;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Pi,
    Z,
    I,
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = vec![];
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = cs[st..i].iter().collect();
            out.push(Tok::Int(digits.parse().unwrap()));
        } else if c == 'p' && cs.get(i + 1) == Some(&'i') {
            out.push(Tok::Pi);
            i += 2;
        } else if c == 'z' {
            out.push(Tok::Z);
            i += 1;
        } else if c == 'i' {
            out.push(Tok::I);
            i += 1;
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in scalar {s:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    n: u32,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at token {}", self.pos))
    }

    fn expr(&mut self) -> Result<ExactScalar> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<ExactScalar> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                let d = self.unary()?;
                acc = acc.mul(&d.inv().ok_or_else(|| self.err("division by zero"))?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<ExactScalar> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<ExactScalar> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let e = match self.peek() {
            Some(Tok::Int(k)) => u32::try_from(k.clone()).map_err(|_| self.err("exponent too large"))?,
            _ => return Err(self.err("expected integer exponent")),
        };
        self.pos += 1;
        let p = base.pow(e);
        if neg {
            p.inv().ok_or_else(|| self.err("zero to a negative power"))
        } else {
            Ok(p)
        }
    }

    fn atom(&mut self) -> Result<ExactScalar> {
        let t = self.peek().cloned().ok_or_else(|| self.err("unexpected end"))?;
        self.pos += 1;
        match t {
            Tok::Int(k) => Ok(ExactScalar::from_rational(self.n, Q::from_integer(k))),
            Tok::Pi => Ok(ExactScalar::pi(self.n)),
            Tok::Z => Ok(ExactScalar::root_of_unity(self.n, 1)),
            Tok::I => Ok(ExactScalar::imag_unit(self.n)),
            Tok::Op('(') => {
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(v)
            }
            Tok::Op(c) => Err(self.err(&format!("unexpected {c:?}"))),
        }
    }
}

/// Parses a scalar string in Q(ζ_n)(π).
pub fn parse_exact(s: &str, n: u32) -> Result<ExactScalar> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty scalar".into()));
    }
    let mut p = Parser { toks: &toks, pos: 0, n };
    let v = p.expr()?;
    if p.pos != toks.len() {
        return Err(p.err("trailing input"));
    }
    debug_assert!(!n.is_zero());
    Ok(v)
}
