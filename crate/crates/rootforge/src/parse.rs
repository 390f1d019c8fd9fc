//! Polynomial expression parsing for the command-line frontend.
//!
//! Grammar: `+ - * ^` with parentheses and implicit multiplication, over
//! the variables `x` and `y`, arbitrary-precision integer literals, and
//! decimal or `m*2^e` dyadic literals.  Decimals that are not exactly
//! representable in binary are rejected so every parsed value is exact.

use crate::dyadic::Dyadic;
use crate::intpoly::IntPoly;
use crate::intpoly2::IntPoly2;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        pos,
        msg: msg.into(),
    })
}

/// A parsed polynomial, classified by variables and coefficient domain.
#[derive(Debug, Clone)]
pub enum Parsed {
    /// Univariate with integer coefficients.
    Int(IntPoly),
    /// Bivariate with integer coefficients.
    Int2(IntPoly2),
    /// Univariate with dyadic coefficients (constant term first).
    DyadicCoeffs(Vec<Dyadic>),
}

/// Sparse bivariate polynomial with dyadic coefficients, the working
/// representation during parsing.
#[derive(Debug, Clone, Default)]
struct Expr {
    terms: BTreeMap<(usize, usize), Dyadic>,
}

impl Expr {
    fn constant(c: Dyadic) -> Self {
        let mut e = Expr::default();
        if !c.is_zero() {
            e.terms.insert((0, 0), c);
        }
        e
    }

    fn var(is_y: bool) -> Self {
        let mut e = Expr::default();
        e.terms
            .insert(if is_y { (0, 1) } else { (1, 0) }, Dyadic::one());
        e
    }

    fn insert(&mut self, key: (usize, usize), d: Dyadic) {
        let v = match self.terms.remove(&key) {
            Some(old) => &old + &d,
            None => d,
        };
        if !v.is_zero() {
            self.terms.insert(key, v);
        }
    }

    fn add(&self, rhs: &Expr) -> Expr {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.insert(*k, v.clone());
        }
        out
    }

    fn neg(&self) -> Expr {
        Expr {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (*k, -v.clone()))
                .collect(),
        }
    }

    fn mul(&self, rhs: &Expr) -> Expr {
        let mut out = Expr::default();
        for ((i1, j1), a) in &self.terms {
            for ((i2, j2), b) in &rhs.terms {
                out.insert((i1 + i2, j1 + j2), a * b);
            }
        }
        out
    }

    fn pow(&self, k: u32) -> Expr {
        let mut out = Expr::constant(Dyadic::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    fn as_constant(&self) -> Option<Dyadic> {
        match self.terms.len() {
            0 => Some(Dyadic::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                // implicit multiplication: "3x", "x y", "2(x+1)"
                Some(c) if c == b'x' || c == b'y' || c == b'(' || c.is_ascii_digit() => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let at = self.pos;
        let e = self.signed_integer()?;
        if e.sign() == num_bigint::Sign::Minus {
            // a negative power is exact only for a power-of-two constant
            let c = match base.as_constant() {
                Some(c) if !c.is_zero() && c.mantissa().abs().is_one() => c,
                _ => return err(at, "negative exponent requires a power-of-two base"),
            };
            let e: i64 = match (&e).try_into() {
                Ok(v) => v,
                Err(_) => return err(at, "exponent out of range"),
            };
            let shifted = c.exponent() * (-e);
            let m = if c.sign() < 0 && e % 2 != 0 {
                BigInt::from(-1)
            } else {
                BigInt::one()
            };
            return Ok(Expr::constant(Dyadic::new(m, -shifted)));
        }
        let e: u32 = match (&e).try_into() {
            Ok(v) => v,
            Err(_) => return err(at, "exponent too large"),
        };
        Ok(base.pow(e))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return err(self.pos, "expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'x') => {
                self.pos += 1;
                Ok(Expr::var(false))
            }
            Some(b'y') => {
                self.pos += 1;
                Ok(Expr::var(true))
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(self.factor()?.neg())
            }
            Some(c) if c.is_ascii_digit() => self.number(),
            _ => err(self.pos, "expected a number, variable, or '('"),
        }
    }

    fn signed_integer(&mut self) -> Result<BigInt, ParseError> {
        let neg = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return err(start, "expected an integer");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let v: BigInt = digits.parse().unwrap();
        Ok(if neg { -v } else { v })
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let int_part: BigInt = std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .unwrap();
        if self.src.get(self.pos) != Some(&b'.') {
            return Ok(Expr::constant(Dyadic::new(int_part, 0)));
        }
        self.pos += 1;
        let fstart = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == fstart {
            return err(self.pos, "expected digits after '.'");
        }
        let frac_digits = &self.src[fstart..self.pos];
        let frac: BigInt = std::str::from_utf8(frac_digits).unwrap().parse().unwrap();
        let k = frac_digits.len() as u32;
        // value = int + frac/10^k = int + frac/(2^k 5^k); exact iff 5^k | frac
        let five_k = BigInt::from(5u8).pow(k);
        if (&frac % &five_k) != BigInt::zero() {
            return err(
                start,
                "decimal is not exactly representable in binary; use m*2^e",
            );
        }
        let scaled = (int_part << k) + &frac / &five_k;
        Ok(Expr::constant(Dyadic::new(scaled, -(k as i64))))
    }
}

/// Parses `text` and classifies the result.
pub fn parse_polynomial(text: &str) -> Result<Parsed, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return err(p.pos, "unexpected trailing input");
    }
    let uses_y = e.terms.keys().any(|(_, j)| *j > 0);
    let integral = e.terms.values().all(|d| d.exponent() >= 0);
    if uses_y {
        if !integral {
            return err(0, "bivariate polynomials must have integer coefficients");
        }
        let mut f = IntPoly2::zero();
        for ((i, j), d) in &e.terms {
            f = f.add(&IntPoly2::monomial(d.mantissa() << d.exponent() as u32, *i, *j));
        }
        return Ok(Parsed::Int2(f));
    }
    let deg = e.terms.keys().map(|(i, _)| *i).max().unwrap_or(0);
    if integral {
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        for ((i, _), d) in &e.terms {
            coeffs[*i] = d.mantissa() << d.exponent() as u32;
        }
        Ok(Parsed::Int(IntPoly::new(coeffs)))
    } else {
        let mut coeffs = vec![Dyadic::zero(); deg + 1];
        for ((i, _), d) in &e.terms {
            coeffs[*i] = d.clone();
        }
        Ok(Parsed::DyadicCoeffs(coeffs))
    }
}

/// Parses an exact dyadic literal `m*2^e` (or a plain integer).
pub fn parse_dyadic(text: &str) -> Result<Dyadic, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return err(p.pos, "unexpected trailing input");
    }
    match e.as_constant() {
        Some(c) => Ok(c),
        None => err(0, "expected a constant"),
    }
}
