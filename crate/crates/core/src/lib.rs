//! Exact symbolic engine for nonlinear connections on tangent structures.
//!
//! Everything here is computed over arbitrary-precision rationals: polynomial
//! coefficients, differential forms, brackets, curvature. No floats, no
//! simplification heuristics — two objects are equal iff their canonical
//! representations coincide, so every identity check in this crate is exact.
//!
//! Layering, bottom up:
//! - [`ratpoly`]: multivariate polynomials over `BigRational` in the variables
//!   `x1..xn, y1..yn` of a tangent-like coordinate chart.
//! - [`linalg`]: exact Gaussian elimination (ranks, kernels, minors) for the
//!   pointwise questions (nullity, involutivity, definiteness).
//! - [`calculus`]: scalar forms, vector fields, vector-valued forms, exterior
//!   derivative, interior products, Lie derivatives, and the
//!   Frölicher–Nijenhuis bracket with two independent cross-check oracles.
//! - [`tangent`]: tangent structures `L`, Liouville fields, semisprays.
//! - [`connection`]: nonlinear connections attached to `L`, their torsion,
//!   curvature, nullity and integrability.
//! - [`hermitian`]: the associated almost-complex structure, its obstruction
//!   forms, and metric extensions with their Kähler forms.
//! - [`sample`]: deterministic + seeded sample points and random geometry used
//!   by property checks.

pub mod calculus;
pub mod connection;
pub mod hermitian;
pub mod linalg;
pub mod ratpoly;
pub mod sample;
pub mod tangent;

pub use ratpoly::{MultiPoly, Point, Rational};

use std::fmt;

/// One failed validation check: a human-readable name plus the printed
/// residual witnessing the failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckFailure {
    pub name: String,
    pub residual: String,
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: residual {}", self.name, self.residual)
    }
}

/// A list of failures formatted one per line (used inside rejection errors).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FailureList(pub Vec<CheckFailure>);

impl fmt::Display for FailureList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, failure) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "  {failure}")?;
        }
        Ok(())
    }
}
