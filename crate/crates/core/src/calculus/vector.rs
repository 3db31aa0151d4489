//! Vector fields and vector-valued differential forms.
//!
//! A vector `k`-form `K` is stored componentwise: `K = Σ_c K^c ⊗ ∂_c` where
//! each `K^c` is a scalar `k`-form. Degree 0 is the vector fields themselves;
//! degree 1 covers endomorphism-valued objects (tangent structures,
//! connections, projectors), written as `2n x 2n` polynomial matrices when
//! convenient.

use crate::calculus::scalar::{basis_label, ScalarForm};
use crate::ratpoly::{var_name, MultiPoly, Point, Rational};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VectorField {
    components: Vec<MultiPoly>,
}

impl VectorField {
    pub fn zero(num_vars: usize) -> Self {
        VectorField { components: vec![MultiPoly::zero(num_vars); num_vars] }
    }

    /// The coordinate field `∂_a`.
    pub fn coordinate(num_vars: usize, a: usize) -> Self {
        let mut f = Self::zero(num_vars);
        f.components[a] = MultiPoly::one(num_vars);
        f
    }

    pub fn from_components(components: Vec<MultiPoly>) -> Self {
        assert!(!components.is_empty());
        let nv = components[0].num_vars();
        assert_eq!(components.len(), nv, "a field needs one component per coordinate");
        assert!(components.iter().all(|p| p.num_vars() == nv));
        VectorField { components }
    }

    pub fn num_vars(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, c: usize) -> &MultiPoly {
        &self.components[c]
    }

    pub fn components(&self) -> &[MultiPoly] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(MultiPoly::is_zero)
    }

    pub fn term_count(&self) -> usize {
        self.components.iter().map(MultiPoly::num_terms).sum()
    }

    /// The field acting on a function as a derivation: `X(f) = Σ X^a ∂_a f`.
    pub fn apply(&self, f: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(self.num_vars());
        for (a, xa) in self.components.iter().enumerate() {
            if !xa.is_zero() {
                out = out.add(&xa.mul(&f.diff(a)));
            }
        }
        out
    }

    /// Lie bracket of vector fields: `[X,Y](f) = X(Y(f)) - Y(X(f))`.
    pub fn lie_bracket(&self, other: &Self) -> Self {
        assert_eq!(self.num_vars(), other.num_vars(), "fields on different charts");
        let components = (0..self.num_vars())
            .map(|c| self.apply(other.component(c)).sub(&other.apply(self.component(c))))
            .collect();
        VectorField { components }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.num_vars(), other.num_vars());
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.add(b))
            .collect();
        VectorField { components }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.num_vars(), other.num_vars());
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.sub(b))
            .collect();
        VectorField { components }
    }

    pub fn neg(&self) -> Self {
        VectorField { components: self.components.iter().map(MultiPoly::neg).collect() }
    }

    pub fn scale_poly(&self, g: &MultiPoly) -> Self {
        VectorField { components: self.components.iter().map(|p| p.mul(g)).collect() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        VectorField { components: self.components.iter().map(|p| p.scale(c)).collect() }
    }

    /// Coordinates of the tangent vector at a point.
    pub fn eval(&self, point: &Point) -> Vec<Rational> {
        self.components.iter().map(|p| p.eval(point)).collect()
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let nv = self.num_vars();
        let mut first = true;
        for (c, p) in self.components.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({p}) ∂{}", var_name(nv, c))?;
        }
        Ok(())
    }
}

/// Vector-valued `k`-form, componentwise over the coordinate frame.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VectorForm {
    num_vars: usize,
    degree: usize,
    components: Vec<ScalarForm>,
}

impl VectorForm {
    pub fn zero(num_vars: usize, degree: usize) -> Self {
        VectorForm {
            num_vars,
            degree,
            components: vec![ScalarForm::zero(num_vars, degree); num_vars],
        }
    }

    /// A vector field seen as a vector 0-form.
    pub fn from_field(x: &VectorField) -> Self {
        VectorForm {
            num_vars: x.num_vars(),
            degree: 0,
            components: x.components().iter().map(|p| ScalarForm::function(p.clone())).collect(),
        }
    }

    /// The wrapped vector field of a degree-0 form.
    pub fn to_field(&self) -> VectorField {
        assert_eq!(self.degree, 0, "to_field on a form of positive degree");
        VectorField::from_components(
            self.components.iter().map(ScalarForm::as_function).collect(),
        )
    }

    /// The identity endomorphism `I = Σ_c dz^c ⊗ ∂_c`.
    pub fn identity(num_vars: usize) -> Self {
        let components = (0..num_vars)
            .map(|c| ScalarForm::coordinate_differential(num_vars, c))
            .collect();
        VectorForm { num_vars, degree: 1, components }
    }

    pub fn from_components(components: Vec<ScalarForm>) -> Self {
        assert!(!components.is_empty());
        let nv = components[0].num_vars();
        let degree = components[0].degree();
        assert_eq!(components.len(), nv, "one component per coordinate required");
        assert!(components.iter().all(|f| f.num_vars() == nv && f.degree() == degree));
        VectorForm { num_vars: nv, degree, components }
    }

    /// Degree-1 form from its matrix: `M[c][a]` is the coefficient of `dz^a`
    /// in the `∂_c` component.
    pub fn from_matrix(mat: &[Vec<MultiPoly>]) -> Self {
        let nv = mat.len();
        let components = mat
            .iter()
            .map(|row| {
                assert_eq!(row.len(), nv, "matrix must be square");
                ScalarForm::from_coefficients(
                    nv,
                    1,
                    row.iter().enumerate().map(|(a, p)| (vec![a as u8], p.clone())),
                )
            })
            .collect();
        VectorForm { num_vars: nv, degree: 1, components }
    }

    /// Matrix of a degree-1 form: `M[c][a]` = coefficient of `dz^a` in `K^c`.
    pub fn matrix(&self) -> Vec<Vec<MultiPoly>> {
        assert_eq!(self.degree, 1, "matrix of a non-endomorphism form");
        self.components
            .iter()
            .map(|f| (0..self.num_vars).map(|a| f.coefficient(&[a as u8])).collect())
            .collect()
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn component(&self, c: usize) -> &ScalarForm {
        &self.components[c]
    }

    pub fn components(&self) -> &[ScalarForm] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(ScalarForm::is_zero)
    }

    pub fn term_count(&self) -> usize {
        self.components.iter().map(ScalarForm::term_count).sum()
    }

    fn assert_compatible(&self, other: &Self) {
        assert_eq!(self.num_vars, other.num_vars, "forms on different charts");
        assert_eq!(self.degree, other.degree, "forms of different degree");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_compatible(other);
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.add(b))
            .collect();
        VectorForm { num_vars: self.num_vars, degree: self.degree, components }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.assert_compatible(other);
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.sub(b))
            .collect();
        VectorForm { num_vars: self.num_vars, degree: self.degree, components }
    }

    pub fn neg(&self) -> Self {
        VectorForm {
            num_vars: self.num_vars,
            degree: self.degree,
            components: self.components.iter().map(ScalarForm::neg).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        VectorForm {
            num_vars: self.num_vars,
            degree: self.degree,
            components: self.components.iter().map(|f| f.scale(c)).collect(),
        }
    }

    /// Composition `self ∘ other` of an endomorphism (degree 1) with any
    /// vector form: `(self ∘ K)^c = Σ_e self^c_e · K^e`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.degree, 1, "left factor of a composition must have degree 1");
        assert_eq!(self.num_vars, other.num_vars);
        let mat = self.matrix();
        let components = (0..self.num_vars)
            .map(|c| {
                let mut acc = ScalarForm::zero(self.num_vars, other.degree);
                for (e, entry) in mat[c].iter().enumerate() {
                    if !entry.is_zero() {
                        acc = acc.add(&other.components[e].scale_poly(entry));
                    }
                }
                acc
            })
            .collect();
        VectorForm { num_vars: self.num_vars, degree: other.degree, components }
    }

    /// An endomorphism applied to a vector field.
    pub fn apply_field(&self, x: &VectorField) -> VectorField {
        assert_eq!(self.degree, 1, "apply_field needs a degree-1 form");
        self.eval_fields(&[x])
    }

    /// Full evaluation on `degree` fields.
    pub fn eval_fields(&self, fields: &[&VectorField]) -> VectorField {
        VectorField::from_components(
            self.components.iter().map(|f| f.eval_fields(fields)).collect(),
        )
    }

    /// Contraction with a field in the first slot, componentwise.
    pub fn insert_field(&self, x: &VectorField) -> Self {
        assert!(self.degree >= 1, "contraction of a degree-0 vector form");
        VectorForm {
            num_vars: self.num_vars,
            degree: self.degree - 1,
            components: self.components.iter().map(|f| f.insert_field(x)).collect(),
        }
    }

    /// Evaluates every component at a point, producing the matrix/array of
    /// rational coefficients indexed `[component][basis tuple]` flattened in
    /// tuple order. For degree 1 this is the endomorphism matrix at the point.
    pub fn eval_matrix(&self, point: &Point) -> Vec<Vec<Rational>> {
        assert_eq!(self.degree, 1);
        self.matrix()
            .iter()
            .map(|row| row.iter().map(|p| p.eval(point)).collect())
            .collect()
    }
}

impl fmt::Display for VectorForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (c, comp) in self.components.iter().enumerate() {
            for (tuple, poly) in comp.terms() {
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                if self.degree == 0 {
                    write!(f, "({poly}) ∂{}", var_name(self.num_vars, c))?;
                } else {
                    write!(
                        f,
                        "({poly}) {}⊗∂{}",
                        basis_label(self.num_vars, tuple),
                        var_name(self.num_vars, c)
                    )?;
                }
            }
        }
        Ok(())
    }
}
