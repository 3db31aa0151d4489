//! Scalar differential forms with polynomial coefficients.
//!
//! A `p`-form is stored as a map from strictly increasing index tuples
//! `(i1 < ... < ip)` to coefficient polynomials; the basis form
//! `dz^{i1}∧...∧dz^{ip}` evaluates on fields `X1..Xp` as the determinant
//! `det [ dz^{i_a}(X_b) ]`. With that convention evaluation, wedge and the
//! interior product below need no factorial normalizations and stay entirely
//! inside exact arithmetic.

use crate::calculus::vector::VectorField;
use crate::ratpoly::{var_name, MultiPoly, Rational};
use std::collections::BTreeMap;
use std::fmt;

/// Index tuple of a basis form, strictly increasing. Empty for degree 0.
pub type BasisTuple = Vec<u8>;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ScalarForm {
    num_vars: usize,
    degree: usize,
    terms: BTreeMap<BasisTuple, MultiPoly>,
}

/// Sorts the concatenation of two disjoint increasing tuples and reports the
/// sign of the permutation doing it. `None` if the tuples share an index.
fn merge_tuples(i: &[u8], j: &[u8]) -> Option<(BasisTuple, bool)> {
    let mut inversions = 0usize;
    for &a in i {
        for &b in j {
            if b == a {
                return None;
            }
            if b < a {
                inversions += 1;
            }
        }
    }
    let mut merged: BasisTuple = i.iter().chain(j).copied().collect();
    merged.sort_unstable();
    Some((merged, inversions % 2 == 1))
}

/// Determinant of a small polynomial matrix, by cofactor expansion.
fn poly_det(mat: &[Vec<MultiPoly>], num_vars: usize) -> MultiPoly {
    let m = mat.len();
    if m == 0 {
        return MultiPoly::one(num_vars);
    }
    if m == 1 {
        return mat[0][0].clone();
    }
    let mut total = MultiPoly::zero(num_vars);
    for (j, entry) in mat[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<MultiPoly>> = mat[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter_map(|(c, v)| (c != j).then(|| v.clone()))
                    .collect()
            })
            .collect();
        let cof = entry.mul(&poly_det(&minor, num_vars));
        total = if j % 2 == 0 { total.add(&cof) } else { total.sub(&cof) };
    }
    total
}

impl ScalarForm {
    pub fn zero(num_vars: usize, degree: usize) -> Self {
        ScalarForm { num_vars, degree, terms: BTreeMap::new() }
    }

    /// Degree-0 form wrapping a function.
    pub fn function(p: MultiPoly) -> Self {
        let num_vars = p.num_vars();
        let mut f = Self::zero(num_vars, 0);
        if !p.is_zero() {
            f.terms.insert(Vec::new(), p);
        }
        f
    }

    /// The coordinate differential `dz^idx`.
    pub fn coordinate_differential(num_vars: usize, idx: usize) -> Self {
        assert!(idx < num_vars);
        let mut f = Self::zero(num_vars, 1);
        f.terms.insert(vec![idx as u8], MultiPoly::one(num_vars));
        f
    }

    /// Builds a form from `(tuple, coefficient)` pairs. Tuples must be
    /// strictly increasing with length `degree`; duplicates are summed.
    pub fn from_coefficients<I>(num_vars: usize, degree: usize, coeffs: I) -> Self
    where
        I: IntoIterator<Item = (BasisTuple, MultiPoly)>,
    {
        let mut f = Self::zero(num_vars, degree);
        for (tuple, poly) in coeffs {
            assert_eq!(tuple.len(), degree, "basis tuple length mismatch");
            assert!(
                tuple.windows(2).all(|w| w[0] < w[1]),
                "basis tuple must be strictly increasing"
            );
            assert!(tuple.iter().all(|&i| (i as usize) < num_vars));
            assert_eq!(poly.num_vars(), num_vars);
            f.add_term(tuple, poly);
        }
        f
    }

    fn add_term(&mut self, tuple: BasisTuple, poly: MultiPoly) {
        if poly.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(tuple) {
            Entry::Vacant(e) => {
                e.insert(poly);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().add(&poly);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total number of monomial terms across all basis coefficients.
    pub fn term_count(&self) -> usize {
        self.terms.values().map(MultiPoly::num_terms).sum()
    }

    /// Basis terms in tuple order.
    pub fn terms(&self) -> impl Iterator<Item = (&BasisTuple, &MultiPoly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, tuple: &[u8]) -> MultiPoly {
        self.terms
            .get(tuple)
            .cloned()
            .unwrap_or_else(|| MultiPoly::zero(self.num_vars))
    }

    /// The wrapped function of a degree-0 form.
    pub fn as_function(&self) -> MultiPoly {
        assert_eq!(self.degree, 0, "as_function on a form of positive degree");
        self.coefficient(&[])
    }

    fn assert_compatible(&self, other: &Self) {
        assert_eq!(self.num_vars, other.num_vars, "forms on different charts");
        assert_eq!(self.degree, other.degree, "forms of different degree");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_compatible(other);
        let mut out = self.clone();
        for (t, p) in &other.terms {
            out.add_term(t.clone(), p.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.assert_compatible(other);
        let mut out = self.clone();
        for (t, p) in &other.terms {
            out.add_term(t.clone(), p.neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for p in out.terms.values_mut() {
            *p = p.neg();
        }
        out
    }

    pub fn scale_poly(&self, g: &MultiPoly) -> Self {
        let mut out = Self::zero(self.num_vars, self.degree);
        for (t, p) in &self.terms {
            out.add_term(t.clone(), p.mul(g));
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.num_vars, self.degree);
        for (t, p) in &self.terms {
            out.add_term(t.clone(), p.scale(c));
        }
        out
    }

    /// Exterior (wedge) product; degrees add. Returns the zero form of the
    /// right degree when that degree exceeds the chart dimension.
    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.num_vars, other.num_vars, "forms on different charts");
        let mut out = Self::zero(self.num_vars, self.degree + other.degree);
        for (ti, pi) in &self.terms {
            for (tj, pj) in &other.terms {
                if let Some((merged, odd)) = merge_tuples(ti, tj) {
                    let prod = pi.mul(pj);
                    out.add_term(merged, if odd { prod.neg() } else { prod });
                }
            }
        }
        out
    }

    /// Exterior derivative.
    pub fn exterior_d(&self) -> Self {
        let mut out = Self::zero(self.num_vars, self.degree + 1);
        for (tuple, poly) in &self.terms {
            for a in 0..self.num_vars {
                let dpoly = poly.diff(a);
                if dpoly.is_zero() {
                    continue;
                }
                if let Some((merged, odd)) = merge_tuples(&[a as u8], tuple) {
                    out.add_term(merged, if odd { dpoly.neg() } else { dpoly });
                }
            }
        }
        out
    }

    /// Contraction with the coordinate field `∂_e` in the first slot.
    pub fn insert_coord(&self, e: usize) -> Self {
        assert!(self.degree >= 1, "contraction of a degree-0 form");
        let mut out = Self::zero(self.num_vars, self.degree - 1);
        for (tuple, poly) in &self.terms {
            if let Some(pos) = tuple.iter().position(|&i| i as usize == e) {
                let mut rest = tuple.clone();
                rest.remove(pos);
                out.add_term(rest, if pos % 2 == 1 { poly.neg() } else { poly.clone() });
            }
        }
        out
    }

    /// Contraction with an arbitrary field in the first slot.
    pub fn insert_field(&self, x: &VectorField) -> Self {
        assert_eq!(x.num_vars(), self.num_vars, "field on a different chart");
        let mut out = Self::zero(self.num_vars, self.degree.saturating_sub(1));
        if self.degree == 0 {
            return out;
        }
        for e in 0..self.num_vars {
            let xe = x.component(e);
            if xe.is_zero() {
                continue;
            }
            out = out.add(&self.insert_coord(e).scale_poly(xe));
        }
        out
    }

    /// Full evaluation on `degree` fields, as the sum of basis determinants.
    pub fn eval_fields(&self, fields: &[&VectorField]) -> MultiPoly {
        assert_eq!(fields.len(), self.degree, "wrong number of arguments");
        let mut total = MultiPoly::zero(self.num_vars);
        for (tuple, poly) in &self.terms {
            let mat: Vec<Vec<MultiPoly>> = tuple
                .iter()
                .map(|&i| fields.iter().map(|x| x.component(i as usize).clone()).collect())
                .collect();
            total = total.add(&poly.mul(&poly_det(&mat, self.num_vars)));
        }
        total
    }
}

pub(crate) fn basis_label(num_vars: usize, tuple: &[u8]) -> String {
    tuple
        .iter()
        .map(|&i| format!("d{}", var_name(num_vars, i as usize)))
        .collect::<Vec<_>>()
        .join("∧")
}

impl fmt::Display for ScalarForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (tuple, poly) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if self.degree == 0 {
                write!(f, "{poly}")?;
            } else {
                write!(f, "({poly}) {}", basis_label(self.num_vars, tuple))?;
            }
        }
        Ok(())
    }
}
