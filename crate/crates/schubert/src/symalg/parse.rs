//! Parsers for the canonical text forms produced by `Display`.

use num_bigint::BigInt;
use num_traits::One;

use super::{Char, Poly, Rational, VarSpace};
use crate::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    space: VarSpace,
}

impl<'a> Parser<'a> {
    fn new(space: VarSpace, text: &'a str) -> Self {
        Parser { src: text.as_bytes(), pos: 0, space }
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!(
            "{what} at byte {} in `{}`",
            self.pos,
            String::from_utf8_lossy(self.src)
        ))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", b as char)))
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(digits.parse().unwrap())
    }

    fn small_integer(&mut self) -> Result<i64> {
        let n = self.integer()?;
        i64::try_from(n).map_err(|_| self.err("exponent too large"))
    }

    /// A variable name of the current space; returns its 0-based index.
    fn variable(&mut self) -> Result<usize> {
        self.skip_ws();
        let prefix = self.space.kind.prefix().as_bytes();
        if !self.src[self.pos..].starts_with(prefix) {
            return Err(self.err("expected variable"));
        }
        self.pos += prefix.len();
        let idx = self.small_integer()?;
        if idx < 1 || idx as usize > self.space.len {
            return Err(self.err("variable index out of range"));
        }
        Ok(idx as usize - 1)
    }

    fn at_variable(&mut self) -> bool {
        self.skip_ws();
        self.src[self.pos..].starts_with(self.space.kind.prefix().as_bytes())
    }

    fn at_exp(&mut self) -> bool {
        self.skip_ws();
        self.src[self.pos..].starts_with(b"e^")
    }

    /// Inside `e^{...}`: a signed integer combination of variables, or `0`.
    fn exponent(&mut self) -> Result<Vec<i64>> {
        let mut mu = vec![0i64; self.space.len];
        if self.peek() == Some(b'0') {
            self.pos += 1;
            return Ok(mu);
        }
        let mut first = true;
        loop {
            let sign = if self.eat(b'-') {
                -1
            } else if self.eat(b'+') || first {
                1
            } else {
                break;
            };
            first = false;
            let coeff = if self.peek().is_some_and(|b| b.is_ascii_digit()) {
                self.small_integer()?
            } else {
                1
            };
            let k = self.variable()?;
            mu[k] += sign * coeff;
            if self.peek() == Some(b'}') {
                break;
            }
        }
        Ok(mu)
    }

    /// One product term; returns (coefficient, exponent vector, saw a character).
    fn term(&mut self, allow_char: bool) -> Result<(Rational, Vec<i64>)> {
        let mut coeff = Rational::one();
        let mut exps = vec![0i64; self.space.len];
        loop {
            if self.peek().is_some_and(|b| b.is_ascii_digit()) {
                let num = self.integer()?;
                let den = if self.eat(b'/') { self.integer()? } else { BigInt::one() };
                if den == BigInt::from(0) {
                    return Err(self.err("zero denominator"));
                }
                coeff *= Rational::new(num, den);
            } else if allow_char && self.at_exp() {
                self.pos += 2;
                self.expect(b'{')?;
                let mu = self.exponent()?;
                self.expect(b'}')?;
                for (e, m) in exps.iter_mut().zip(mu) {
                    *e += m;
                }
            } else if !allow_char && self.at_variable() {
                let k = self.variable()?;
                let power = if self.eat(b'^') { self.small_integer()? } else { 1 };
                exps[k] += power;
            } else {
                return Err(self.err("expected factor"));
            }
            if !self.eat(b'*') {
                break;
            }
        }
        Ok((coeff, exps))
    }

    fn sum(&mut self, allow_char: bool) -> Result<Vec<(Rational, Vec<i64>)>> {
        let mut terms = Vec::new();
        let mut negative = self.eat(b'-');
        loop {
            let (c, e) = self.term(allow_char)?;
            terms.push((if negative { -c } else { c }, e));
            if self.eat(b'+') {
                negative = false;
            } else if self.eat(b'-') {
                negative = true;
            } else {
                break;
            }
        }
        if self.peek().is_some() {
            return Err(self.err("trailing input"));
        }
        Ok(terms)
    }
}

pub(super) fn parse_poly(space: VarSpace, text: &str) -> Result<Poly> {
    if text.trim() == "0" {
        return Ok(Poly::zero(space));
    }
    let mut parser = Parser::new(space, text);
    let mut out = Poly::zero(space);
    for (c, e) in parser.sum(false)? {
        out.add_term(e.into_iter().map(|x| x as u32).collect(), c);
    }
    Ok(out)
}

pub(super) fn parse_char(space: VarSpace, text: &str) -> Result<Char> {
    if text.trim() == "0" {
        return Ok(Char::zero(space));
    }
    let mut parser = Parser::new(space, text);
    let mut out = Char::zero(space);
    for (c, e) in parser.sum(true)? {
        out.add_term(e, c);
    }
    Ok(out)
}
