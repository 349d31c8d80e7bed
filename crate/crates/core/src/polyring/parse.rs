//! Text grammar: sums of terms built from rational constants, identifiers,
//! `*`, `^` (integer exponents, negative only on Laurent variables) and
//! parentheses.

use super::{Polynomial, RingRef};
use crate::error::{Error, Result};
use crate::exactalg::Rational;
use num_bigint::BigInt;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1
            }
            '*' => {
                out.push(Tok::Star);
                i += 1
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1
            }
            d if d.is_ascii_digit() => {
                let st = i;
                while i < cs.len() && cs[i].is_ascii_digit() {
                    i += 1;
                }
                let txt: String = cs[st..i].iter().collect();
                out.push(Tok::Num(txt.parse().expect("digits")));
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                let st = i;
                while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Ident(cs[st..i].iter().collect()));
            }
            other => return Err(Error::Parse(format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

pub(super) fn identifiers(s: &str) -> Result<Vec<String>> {
    Ok(lex(s)?
        .into_iter()
        .filter_map(|t| if let Tok::Ident(n) = t { Some(n) } else { None })
        .collect())
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    ring: &'a RingRef,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = Polynomial::zero(self.ring);
        let mut sign = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                -1
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign < 0 { acc.sub(&t) } else { acc.add(&t) };
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    sign = 1
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    sign = -1
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let (base, var) = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            let neg = if let Some(Tok::Minus) = self.peek() {
                self.pos += 1;
                true
            } else {
                false
            };
            let e = match self.next() {
                Some(Tok::Num(n)) => i32::try_from(n).map_err(|_| Error::Parse("exponent too large".into()))?,
                t => return Err(Error::Parse(format!("expected exponent, found {t:?}"))),
            };
            if neg {
                let Some(v) = var else {
                    return Err(Error::Parse("negative exponent on a non-variable".into()));
                };
                if !self.ring.is_laurent(v) {
                    return Err(Error::Parse(format!(
                        "negative exponent on non-Laurent variable {}",
                        self.ring.name(v)
                    )));
                }
                let mut m = super::Monomial::one(self.ring.nvars());
                m.0[v] = -e;
                return Ok(Polynomial::term(self.ring, m, Rational::from_integer(1.into())));
            }
            return Ok(base.pow(e as u32));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<(Polynomial, Option<usize>)> {
        match self.next() {
            Some(Tok::Num(n)) => {
                let mut r = Rational::from_integer(n);
                if let Some(Tok::Slash) = self.peek() {
                    self.pos += 1;
                    match self.next() {
                        Some(Tok::Num(d)) if d != BigInt::from(0) => r /= Rational::from_integer(d),
                        t => return Err(Error::Parse(format!("bad denominator {t:?}"))),
                    }
                }
                Ok((Polynomial::constant(self.ring, r), None))
            }
            Some(Tok::Ident(name)) => {
                let i = self
                    .ring
                    .index_of(&name)
                    .ok_or_else(|| Error::Parse(format!("unknown variable {name}")))?;
                Ok((Polynomial::var(self.ring, i), Some(i)))
            }
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok((e, None)),
                    t => Err(Error::Parse(format!("expected ')', found {t:?}"))),
                }
            }
            t => Err(Error::Parse(format!("unexpected token {t:?}"))),
        }
    }
}

pub(super) fn parse_polynomial(text: &str, ring: &RingRef) -> Result<Polynomial> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut p = Parser { toks, pos: 0, ring };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(out)
}
