//! Recursive-descent parser for polynomial expressions in the chart
//! variables `x1..xn`, `y1..yn`.
//!
//! Grammar:
//!
//! ```text
//! expr     := term (("+" | "-") term)*
//! term     := factor ("*" factor)*
//! factor   := base ("^" uint)?
//! base     := rational | var | "(" expr ")" | "-" base
//! rational := uint ("/" uint)?
//! var      := ("x" | "y") uint        with 1 <= uint <= n
//! ```
//!
//! Whitespace is insignificant. Exponents are capped at 16. Errors carry
//! 1-based character positions.

use std::fmt;
use std::str::FromStr;

use lconn_core::ratpoly::{MultiPoly, Rational};
use num_bigint::BigInt;

pub const EXPONENT_CAP: u32 = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
    /// 1-based character position in the source string.
    pub position: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at position {}", self.message, self.position)
    }
}

impl std::error::Error for ParseError {}

/// Parses `src` into an exact polynomial in `2n` variables.
pub fn parse_expression(src: &str, n: usize) -> Result<MultiPoly, ParseError> {
    let mut p = Parser {
        chars: src.chars().collect(),
        pos: 0,
        n,
    };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error_here(format!("unexpected character '{}'", p.chars[p.pos])));
    }
    Ok(poly)
}

/// Parses a standalone rational constant such as `-3/4`.
pub fn parse_rational(src: &str) -> Result<Rational, ParseError> {
    let n_dummy = 0;
    let mut p = Parser {
        chars: src.chars().collect(),
        pos: 0,
        n: n_dummy,
    };
    p.skip_ws();
    let negate = if p.peek() == Some('-') {
        p.pos += 1;
        p.skip_ws();
        true
    } else {
        false
    };
    let value = p.rational()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error_here(format!("unexpected character '{}'", p.chars[p.pos])));
    }
    Ok(if negate { -value } else { value })
}

struct Parser {
    chars: Vec<char>,
    /// 0-based cursor.
    pos: usize,
    n: usize,
}

impl Parser {
    fn error_at(&self, message: impl Into<String>, pos_zero_based: usize) -> ParseError {
        ParseError {
            message: message.into(),
            position: pos_zero_based + 1,
        }
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        self.error_at(message, self.pos)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn num_vars(&self) -> usize {
        2 * self.n
    }

    fn expr(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some('-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('*') {
                self.pos += 1;
                acc = acc.mul(&self.factor()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<MultiPoly, ParseError> {
        let base = self.base()?;
        self.skip_ws();
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let digits_start = self.pos;
        let exp = self.uint()?;
        if exp > EXPONENT_CAP as u64 {
            return Err(self.error_at(
                format!("exponent exceeds the cap of {EXPONENT_CAP}"),
                digits_start,
            ));
        }
        let mut acc = MultiPoly::one(self.num_vars());
        for _ in 0..exp {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    fn base(&mut self) -> Result<MultiPoly, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_ws();
                if self.peek() == Some(')') {
                    self.pos += 1;
                    Ok(inner)
                } else {
                    Err(self.error_here("expected ')'"))
                }
            }
            Some('-') => {
                self.pos += 1;
                Ok(self.base()?.neg())
            }
            Some(c) if c.is_ascii_digit() => {
                let value = self.rational()?;
                Ok(MultiPoly::constant(self.num_vars(), value))
            }
            Some(c @ ('x' | 'y')) => {
                let var_start = self.pos;
                self.pos += 1;
                if !matches!(self.peek(), Some(d) if d.is_ascii_digit()) {
                    return Err(self.error_at("expected a variable index", var_start));
                }
                let idx = self.uint()?;
                if idx < 1 || idx > self.n as u64 {
                    return Err(self.error_at("variable index out of range", var_start));
                }
                let offset = if c == 'x' { 0 } else { self.n };
                Ok(MultiPoly::var(self.num_vars(), offset + idx as usize - 1))
            }
            Some(c) if c.is_alphabetic() => Err(self.error_here(format!("unknown variable '{c}'"))),
            Some(c) => Err(self.error_here(format!("unexpected character '{c}'"))),
            None => Err(self.error_here("unexpected end of input")),
        }
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        let num = self.bigint_digits()?;
        self.skip_ws();
        if self.peek() != Some('/') {
            return Ok(Rational::from(num));
        }
        self.pos += 1;
        self.skip_ws();
        let den_start = self.pos;
        let den = self.bigint_digits()?;
        if den == BigInt::from(0) {
            return Err(self.error_at("zero denominator", den_start));
        }
        Ok(Rational::new(num, den))
    }

    fn bigint_digits(&mut self) -> Result<BigInt, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error_here("expected a digit"));
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        BigInt::from_str(&text).map_err(|_| self.error_at("invalid integer", start))
    }

    fn uint(&mut self) -> Result<u64, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error_here("expected a digit"));
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        // Saturate on overflow: any value that large is over every bound we check.
        Ok(text.parse::<u64>().unwrap_or(u64::MAX))
    }
}
