//! Text grammar for potentials.
//!
//! ```text
//! spec      := product | piecewise | asym
//! piecewise := "piecewise" "[" piece (";" piece)* "]"
//! piece     := "(" bound "," bound ")" ":" product
//! asym      := "asym" "[" "0" ":" product ";" "inf" ":" product "]"
//! product   := factor (("*" | "/") factor)*
//! factor    := number | "r" ["^" signed] | "exp" "(" rate (("+" | "-") rate)* ")"
//! rate      := [signed] ["*"] ("r" ["^" ("1" | "-1")] | "/" "r")
//! number    := digits ["/" digits] | decimal
//! ```
//!
//! `asym[0: A; inf: B]` describes a potential known only up to asymptotic
//! equivalence: `A` near the origin, `B` near infinity. Numerically it is
//! evaluated as `A` on `(0, 1]` and `B` beyond.

use num_rational::Ratio;
use num_traits::One;

use super::spec::{Piece, PotentialSpec, SpecError, Term};
use crate::exponent::{parse_ratio, ExtendedRational};
use crate::scalar::ExactInt;

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, SpecError> {
        Err(SpecError::Parse { pos: self.pos, msg: msg.into() })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.rest().chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), SpecError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(kw) {
            let after = self.rest()[kw.len()..].chars().next();
            if after.is_some_and(|c| c.is_ascii_alphanumeric()) {
                return false;
            }
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn at_number(&mut self) -> bool {
        matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == '.')
    }

    /// Unsigned rational literal. A `/` is part of the literal only when a
    /// digit follows it.
    fn number<I: ExactInt>(&mut self) -> Result<Ratio<I>, SpecError> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut end = start;
        while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
            end += 1;
        }
        if end == start {
            return self.err("expected a number");
        }
        if end + 1 < bytes.len() && bytes[end] == b'/' && bytes[end + 1].is_ascii_digit() {
            end += 1;
            while end < bytes.len() && bytes[end].is_ascii_digit() {
                end += 1;
            }
        }
        let text = &self.src[start..end];
        match parse_ratio::<I>(text) {
            Ok(v) => {
                self.pos = end;
                Ok(v)
            }
            Err(e) => self.err(e.to_string()),
        }
    }

    fn signed<I: ExactInt>(&mut self) -> Result<Ratio<I>, SpecError> {
        let neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let v = self.number::<I>()?;
        Ok(if neg { -v } else { v })
    }

    fn bound<I: ExactInt>(&mut self) -> Result<ExtendedRational<I>, SpecError> {
        if self.keyword("inf") || self.keyword("+inf") {
            return Ok(ExtendedRational::PosInf);
        }
        Ok(ExtendedRational::Finite(self.number()?))
    }

    fn exp_args<I: ExactInt>(&mut self) -> Result<Term<I>, SpecError> {
        let mut t = Term::<I>::one();
        let mut first = true;
        loop {
            let neg = if self.eat('-') {
                true
            } else if self.eat('+') {
                false
            } else if first {
                false
            } else {
                break;
            };
            first = false;
            let mut c = if self.at_number() { self.number::<I>()? } else { Ratio::one() };
            if neg {
                c = -c;
            }
            self.eat('*');
            if self.eat('/') {
                if !self.eat('r') {
                    return self.err("expected 'r' after '/' in exp argument");
                }
                t.inv_rate = t.inv_rate.clone() + c.clone();
            } else if self.eat('r') {
                if self.eat('^') {
                    let k = self.signed::<I>()?;
                    if k == Ratio::one() {
                        t.rate = t.rate.clone() + c.clone();
                    } else if k == -Ratio::<I>::one() {
                        t.inv_rate = t.inv_rate.clone() + c.clone();
                    } else {
                        return self.err("exp argument powers of r must be 1 or -1");
                    }
                } else {
                    t.rate = t.rate.clone() + c.clone();
                }
            } else {
                return self.err("expected 'r' or '/r' in exp argument");
            }
            if self.peek() == Some(')') {
                break;
            }
        }
        Ok(t)
    }

    fn factor<I: ExactInt>(&mut self) -> Result<Term<I>, SpecError> {
        if self.keyword("exp") {
            self.expect('(')?;
            let t = self.exp_args()?;
            self.expect(')')?;
            return Ok(t);
        }
        if self.keyword("r") {
            if self.eat('^') {
                return Ok(Term::power(self.signed()?));
            }
            return Ok(Term::power(Ratio::one()));
        }
        if self.eat('-') {
            return self.err("coefficients must be nonnegative");
        }
        if self.at_number() {
            return Ok(Term::constant(self.number()?));
        }
        self.err("expected a number, 'r' or 'exp(...)'")
    }

    fn product<I: ExactInt>(&mut self) -> Result<Term<I>, SpecError> {
        let mut t = self.factor()?;
        loop {
            if self.eat('*') {
                t = t.mul(&self.factor()?);
            } else if self.peek() == Some('/') {
                let at = self.pos;
                self.pos += 1;
                let f = self.factor::<I>()?;
                match f.recip() {
                    Some(inv) => t = t.mul(&inv),
                    None => {
                        self.pos = at;
                        return self.err("division by zero");
                    }
                }
            } else {
                break;
            }
        }
        Ok(t)
    }

    fn spec<I: ExactInt>(&mut self) -> Result<PotentialSpec<I>, SpecError> {
        let out = if self.keyword("piecewise") {
            self.expect('[')?;
            let mut pieces = Vec::new();
            loop {
                self.skip_ws();
                let at = self.pos;
                self.expect('(')?;
                let lo = self.bound()?;
                self.expect(',')?;
                let hi = self.bound()?;
                self.expect(')')?;
                self.expect(':')?;
                let term = self.product()?;
                if let Some(prev) = pieces.last() {
                    let prev: &Piece<I> = prev;
                    if prev.hi != lo {
                        self.pos = at;
                        return self.err(format!("intervals must be contiguous: {} then {}", prev.hi, lo));
                    }
                }
                pieces.push(Piece { lo, hi, term });
                if !self.eat(';') {
                    break;
                }
            }
            self.expect(']')?;
            let at = self.pos;
            PotentialSpec::new(pieces, false).map_err(|e| SpecError::Parse { pos: at, msg: e.to_string() })?
        } else if self.keyword("asym") {
            self.expect('[')?;
            if !(self.eat('0') && self.eat(':')) {
                return self.err("expected '0:'");
            }
            let t0 = self.product()?;
            self.expect(';')?;
            if !(self.keyword("inf") && self.eat(':')) {
                return self.err("expected 'inf:'");
            }
            let t1 = self.product()?;
            self.expect(']')?;
            let one = ExtendedRational::one();
            PotentialSpec::new(
                vec![
                    Piece { lo: ExtendedRational::zero(), hi: one.clone(), term: t0 },
                    Piece { lo: one, hi: ExtendedRational::PosInf, term: t1 },
                ],
                true,
            )
            .expect("two contiguous pieces")
        } else {
            PotentialSpec::single(self.product()?)
        };
        self.skip_ws();
        if self.pos != self.src.len() {
            return self.err("unexpected trailing input");
        }
        Ok(out)
    }
}

pub fn parse_potential<I: ExactInt>(src: &str) -> Result<PotentialSpec<I>, SpecError> {
    Parser { src, pos: 0 }.spec()
}

impl<I: ExactInt> std::str::FromStr for PotentialSpec<I> {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_potential(s)
    }
}
