//! Parser for sparse Laurent polynomials.
//!
//! Grammar (whitespace insensitive):
//! ```text
//! poly     := ['+'|'-'] term (('+'|'-') term)*
//! term     := factor ('*'? factor)*
//! factor   := coeff | monomial
//! monomial := 'x' INDEX ('^' ['-'] INT)?
//! coeff    := INT ('/' INT)? | '(' RAT ('+'|'-') RAT 'i' ')' | 'exp(' RAT (',' RAT)? ')'
//! ```
//! Inputs must be expanded sums; no symbolic expansion is performed.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{Coefficient, LaurentPoly, Term};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(usize),
    Exp,
    ImagUnit,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    Comma,
}

fn lex(text: &str) -> Result<Vec<Tok>> {
    let mut toks = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                toks.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                toks.push(Tok::Star);
                i += 1;
            }
            '^' => {
                toks.push(Tok::Caret);
                i += 1;
            }
            '/' => {
                toks.push(Tok::Slash);
                i += 1;
            }
            '(' => {
                toks.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                toks.push(Tok::RParen);
                i += 1;
            }
            ',' => {
                toks.push(Tok::Comma);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                toks.push(Tok::Int(s.parse::<BigInt>().unwrap()));
            }
            'x' => {
                i += 1;
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if start == i {
                    return Err(Error::Syntax("variable needs an index, e.g. x1".into()));
                }
                let s: String = chars[start..i].iter().collect();
                let idx: usize = s
                    .parse()
                    .map_err(|_| Error::Syntax(format!("bad variable index {s}")))?;
                toks.push(Tok::Var(idx));
            }
            'e' => {
                if chars[i..].starts_with(&['e', 'x', 'p']) {
                    toks.push(Tok::Exp);
                    i += 3;
                } else {
                    return Err(Error::Syntax(format!("unexpected character '{c}'")));
                }
            }
            'i' => {
                toks.push(Tok::ImagUnit);
                i += 1;
            }
            _ => return Err(Error::Syntax(format!("unexpected character '{c}'"))),
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    n: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        match self.next() {
            Some(got) if got == t => Ok(()),
            got => Err(Error::Syntax(format!("expected {:?}, got {:?}", t, got))),
        }
    }

    fn parse_poly(&mut self) -> Result<Vec<Term>> {
        let mut terms = Vec::new();
        let mut negate = false;
        match self.peek() {
            Some(Tok::Plus) => {
                self.next();
            }
            Some(Tok::Minus) => {
                self.next();
                negate = true;
            }
            _ => {}
        }
        loop {
            terms.push(self.parse_term(negate)?);
            match self.next() {
                None => break,
                Some(Tok::Plus) => negate = false,
                Some(Tok::Minus) => negate = true,
                Some(t) => return Err(Error::Syntax(format!("unexpected token {:?}", t))),
            }
        }
        Ok(terms)
    }

    fn parse_term(&mut self, negate: bool) -> Result<Term> {
        let mut coeff: Option<Coefficient> = None;
        let mut exponent = vec![0i64; self.n];
        let mut saw_factor = false;
        loop {
            match self.peek() {
                Some(Tok::Int(_)) | Some(Tok::LParen) | Some(Tok::Exp) => {
                    let c = self.parse_coeff()?;
                    coeff = Some(match coeff {
                        None => c,
                        Some(prev) => prev.mul(&c)?,
                    });
                    saw_factor = true;
                }
                Some(Tok::Var(_)) => {
                    let (idx, e) = self.parse_monomial()?;
                    exponent[idx] = exponent[idx]
                        .checked_add(e)
                        .ok_or_else(|| Error::Syntax("exponent overflow".into()))?;
                    saw_factor = true;
                }
                Some(Tok::Star) => {
                    self.next();
                    continue;
                }
                _ => break,
            }
        }
        if !saw_factor {
            return Err(Error::Syntax("empty term".into()));
        }
        let mut c = coeff.unwrap_or_else(Coefficient::one);
        if negate {
            c = c.neg();
        }
        Ok(Term {
            exponent,
            coeff: c,
        })
    }

    fn parse_monomial(&mut self) -> Result<(usize, i64)> {
        let idx = match self.next() {
            Some(Tok::Var(i)) => i,
            t => return Err(Error::Syntax(format!("expected variable, got {:?}", t))),
        };
        if idx == 0 || idx > self.n {
            return Err(Error::DimensionMismatch {
                index: idx,
                n: self.n,
            });
        }
        let mut e = 1i64;
        if self.peek() == Some(&Tok::Caret) {
            self.next();
            let neg = if self.peek() == Some(&Tok::Minus) {
                self.next();
                true
            } else {
                false
            };
            match self.next() {
                Some(Tok::Int(v)) => {
                    let v: i64 = v
                        .try_into()
                        .map_err(|_| Error::Syntax("exponent too large".into()))?;
                    e = if neg { -v } else { v };
                }
                t => return Err(Error::Syntax(format!("expected exponent, got {:?}", t))),
            }
        }
        Ok((idx - 1, e))
    }

    fn parse_uint(&mut self) -> Result<BigInt> {
        match self.next() {
            Some(Tok::Int(v)) => Ok(v),
            t => Err(Error::Syntax(format!("expected integer, got {:?}", t))),
        }
    }

    /// `['-'] INT ('/' INT)?`
    fn parse_rat(&mut self) -> Result<BigRational> {
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.next();
            true
        } else {
            if self.peek() == Some(&Tok::Plus) {
                self.next();
            }
            false
        };
        let num = self.parse_uint()?;
        let den = if self.peek() == Some(&Tok::Slash) {
            self.next();
            let d = self.parse_uint()?;
            if d.is_zero() {
                return Err(Error::Syntax("zero denominator".into()));
            }
            d
        } else {
            BigInt::one()
        };
        let q = BigRational::new(num, den);
        Ok(if neg { -q } else { q })
    }

    fn parse_coeff(&mut self) -> Result<Coefficient> {
        match self.peek() {
            Some(Tok::Int(_)) => {
                let q = self.parse_rat()?;
                if q.is_zero() {
                    return Err(Error::Syntax("zero coefficient".into()));
                }
                Coefficient::real(q).map_err(|_| Error::Syntax("zero coefficient".into()))
            }
            Some(Tok::Exp) => {
                self.next();
                self.expect(Tok::LParen)?;
                let log_mag = self.parse_rat()?;
                let phase = if self.peek() == Some(&Tok::Comma) {
                    self.next();
                    self.parse_rat()?
                } else {
                    BigRational::zero()
                };
                self.expect(Tok::RParen)?;
                Ok(Coefficient::log_polar(log_mag, phase))
            }
            Some(Tok::LParen) => {
                self.next();
                let re = self.parse_rat()?;
                let im = match self.next() {
                    Some(Tok::Plus) => self.parse_rat()?,
                    Some(Tok::Minus) => -self.parse_rat()?,
                    t => {
                        return Err(Error::Syntax(format!(
                            "expected +/- in complex coefficient, got {:?}",
                            t
                        )))
                    }
                };
                self.expect(Tok::ImagUnit)?;
                self.expect(Tok::RParen)?;
                Coefficient::rational(re, im)
                    .map_err(|_| Error::Syntax("zero complex coefficient".into()))
            }
            t => Err(Error::Syntax(format!("expected coefficient, got {:?}", t))),
        }
    }
}

/// Parse `text` as a Laurent polynomial in variables `x1..xn`.
///
/// Terms with equal exponent vectors are merged; if everything cancels the
/// result is [`Error::EmptyPolynomial`].
pub fn parse_laurent(text: &str, n: usize) -> Result<LaurentPoly> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(Error::Syntax("empty input".into()));
    }
    let mut p = Parser { toks, pos: 0, n };
    let terms = p.parse_poly()?;
    LaurentPoly::new(n, terms)
}
