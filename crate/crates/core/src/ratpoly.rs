//! Multivariate polynomials over arbitrary-precision rationals.
//!
//! A polynomial lives on a chart with `num_vars = 2n` coordinates: index
//! `a < n` is the base coordinate printed `x{a+1}`, index `n + i` is the fiber
//! coordinate printed `y{i+1}`. Terms are stored in a `BTreeMap` keyed by
//! graded-lexicographic monomials, so iteration order, printing and equality
//! are all canonical: two polynomials are equal iff they are the same map.

use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Exact scalar type used throughout the engine.
pub type Rational = num_rational::BigRational;

/// A point of the chart: `2n` rational coordinates.
pub type Point = Vec<Rational>;

/// Shorthand for an integer as a `Rational`.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Shorthand for `n/d` as a `Rational`. Panics on `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Printable name of coordinate `idx` on a chart with `num_vars` coordinates.
pub fn var_name(num_vars: usize, idx: usize) -> String {
    debug_assert!(num_vars % 2 == 0 && idx < num_vars);
    let n = num_vars / 2;
    if idx < n {
        format!("x{}", idx + 1)
    } else {
        format!("y{}", idx - n + 1)
    }
}

/// Exponent vector of a single monomial, ordered graded-lexicographically:
/// lower total degree first, ties broken by the exponent vector itself
/// (so among quadratics `x1*x2 < x1^2`, i.e. earlier variables dominate).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| u32::from(e)).sum()
    }

    /// Total degree in the fiber (`y`) block of a `2n`-variable chart.
    pub fn fiber_degree(&self) -> u32 {
        let n = self.0.len() / 2;
        self.0[n..].iter().map(|&e| u32::from(e)).sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial with rational coefficients in `num_vars` chart coordinates.
///
/// Invariants: every key has length `num_vars`; no stored coefficient is zero.
/// All binary operations panic if the operands disagree on `num_vars` — that
/// is a programming error, not an input error.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiPoly {
    num_vars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(num_vars: usize) -> Self {
        MultiPoly { num_vars, terms: BTreeMap::new() }
    }

    pub fn constant(num_vars: usize, c: Rational) -> Self {
        let mut p = Self::zero(num_vars);
        if !c.is_zero() {
            p.terms.insert(Monomial(vec![0; num_vars]), c);
        }
        p
    }

    pub fn one(num_vars: usize) -> Self {
        Self::constant(num_vars, Rational::one())
    }

    /// The coordinate function `z^idx`.
    pub fn var(num_vars: usize, idx: usize) -> Self {
        assert!(idx < num_vars, "variable index {idx} out of range for {num_vars} coordinates");
        let mut exps = vec![0u16; num_vars];
        exps[idx] = 1;
        let mut p = Self::zero(num_vars);
        p.terms.insert(Monomial(exps), Rational::one());
        p
    }

    /// Builds a polynomial from raw terms, summing duplicates and dropping zeros.
    pub fn from_terms<I>(num_vars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u16>, Rational)>,
    {
        let mut p = Self::zero(num_vars);
        for (exps, coeff) in terms {
            assert_eq!(exps.len(), num_vars, "exponent vector length mismatch");
            p.add_term(Monomial(exps), coeff);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// The coefficient of the constant monomial.
    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial(vec![0; self.num_vars]))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Some(c) if the polynomial is the constant c (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        if self.terms.is_empty() {
            return Some(Rational::zero());
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.is_constant() {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// True iff every monomial has fiber (`y`) degree exactly `r`.
    /// The zero polynomial is homogeneous of every degree.
    pub fn is_fiber_homogeneous(&self, r: u32) -> bool {
        self.terms.keys().all(|m| m.fiber_degree() == r)
    }

    fn assert_same_vars(&self, other: &Self) {
        assert_eq!(
            self.num_vars, other.num_vars,
            "polynomials on different charts ({} vs {} coordinates)",
            self.num_vars, other.num_vars
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_vars(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.assert_same_vars(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_vars(other);
        let mut out = Self::zero(self.num_vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let exps: Vec<u16> = ma
                    .0
                    .iter()
                    .zip(&mb.0)
                    .map(|(&a, &b)| a.checked_add(b).expect("monomial exponent overflow"))
                    .collect();
                out.add_term(Monomial(exps), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.num_vars);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out
    }

    /// Partial derivative with respect to coordinate `idx`.
    pub fn diff(&self, idx: usize) -> Self {
        assert!(idx < self.num_vars, "variable index {idx} out of range");
        let mut out = Self::zero(self.num_vars);
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[idx] = e - 1;
            out.add_term(Monomial(exps), c * rat(i64::from(e)));
        }
        out
    }

    /// Exact evaluation at a point with `num_vars` coordinates.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.num_vars, "point dimension mismatch");
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (idx, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    term *= &point[idx];
                }
            }
            total += term;
        }
        total
    }

    /// Substitutes `point` for the base (`x`) block only, keeping the fiber
    /// variables symbolic. Used for restricting geometry to a fixed base point.
    pub fn eval_base(&self, base: &[Rational]) -> Self {
        let n = self.num_vars / 2;
        assert_eq!(base.len(), n, "base point dimension mismatch");
        let mut out = Self::zero(self.num_vars);
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut exps = m.0.clone();
            for (idx, b) in base.iter().enumerate() {
                for _ in 0..exps[idx] {
                    coeff *= b;
                }
                exps[idx] = 0;
            }
            out.add_term(Monomial(exps), coeff);
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Descending graded-lex: leading term first.
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            // A leading "-x1^2" would re-parse as (-x1)^2, so spell out the
            // unit coefficient whenever the first factor carries an even power.
            let leading_even_power = i == 0
                && negative
                && m.0.iter().find(|e| **e != 0).is_some_and(|e| e % 2 == 0);
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || m.is_constant() || leading_even_power {
                factors.push(mag.to_string());
            }
            for (idx, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(var_name(self.num_vars, idx)),
                    _ => factors.push(format!("{}^{}", var_name(self.num_vars, idx), e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}
