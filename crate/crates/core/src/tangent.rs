//! Tangent structures, the canonical vertical field, and semisprays.
//!
//! A tangent structure is a vector 1-form `L` of constant rank `n` on a
//! `2n`-coordinate chart with `L² = 0`, `[L,L] = 0` and image equal to kernel.
//! The canonical one maps `∂xⁱ ↦ ∂yⁱ`; a custom structure may be supplied
//! together with an explicit polynomial kernel frame and a dilation field
//! playing the role of `C = yⁱ∂yⁱ`. Everything downstream (semibasic forms,
//! homogeneity, potentials, connections) is phrased against this type.

use crate::calculus::{
    fn_bracket, fn_bracket_field, homogeneity_residual_scalar, homogeneity_residual_vector,
    ScalarForm, VectorField, VectorForm,
};
use crate::linalg::rank;
use crate::ratpoly::{MultiPoly, Point, Rational};
use crate::sample::grid_points;
use crate::{CheckFailure, FailureList};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TangentError {
    #[error("tangent structure rejected:\n{0}")]
    InvalidStructure(FailureList),
    #[error("not a semispray: L(S) - C = {0}")]
    NotSemispray(String),
    #[error("form is not semibasic ({0})")]
    NotSemibasic(String),
    #[error("form is not homogeneous of degree {degree}: residual {residual}")]
    NotHomogeneous { degree: i64, residual: String },
    #[error("reconstruction weight r + k = 0; the scaling factor is undefined")]
    ZeroWeight,
    #[error("operation requires the canonical tangent structure")]
    RequiresCanonical,
}

/// A vector field `S` with `L(S) = C`, flagged as a spray when additionally
/// `[C,S] = S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Semispray {
    field: VectorField,
    is_spray: bool,
}

impl Semispray {
    pub fn field(&self) -> &VectorField {
        &self.field
    }

    pub fn is_spray(&self) -> bool {
        self.is_spray
    }
}

#[derive(Clone, Debug)]
pub struct TangentStructure {
    n: usize,
    l: VectorForm,
    kernel_frame: Vec<VectorField>,
    liouville: VectorField,
    canonical: bool,
}

impl TangentStructure {
    /// The canonical structure on a `2n`-coordinate chart: `L∂xⁱ = ∂yⁱ`,
    /// `L∂yⁱ = 0`, kernel frame `{∂yⁱ}`, dilation field `C = yⁱ∂yⁱ`.
    pub fn canonical(n: usize) -> Self {
        assert!(n >= 1, "fiber dimension must be at least 1");
        let nv = 2 * n;
        let mut mat = vec![vec![MultiPoly::zero(nv); nv]; nv];
        for i in 0..n {
            mat[n + i][i] = MultiPoly::one(nv);
        }
        let l = VectorForm::from_matrix(&mat);
        let kernel_frame = (0..n).map(|i| VectorField::coordinate(nv, n + i)).collect();
        let mut c_components = vec![MultiPoly::zero(nv); nv];
        for i in 0..n {
            c_components[n + i] = MultiPoly::var(nv, n + i);
        }
        let liouville = VectorField::from_components(c_components);
        TangentStructure { n, l, kernel_frame, liouville, canonical: true }
    }

    /// Validates and wraps a user-supplied structure. `extra_points` are
    /// sampled in addition to the deterministic grid for the rank checks.
    pub fn custom(
        l: VectorForm,
        kernel_frame: Vec<VectorField>,
        liouville: VectorField,
        extra_points: &[Point],
    ) -> Result<Self, TangentError> {
        let failures = Self::validation_failures(&l, &kernel_frame, &liouville, extra_points);
        if !failures.is_empty() {
            return Err(TangentError::InvalidStructure(FailureList(failures)));
        }
        let n = l.num_vars() / 2;
        Ok(TangentStructure { n, l, kernel_frame, liouville, canonical: false })
    }

    /// All violated structure axioms, with printed residuals. Symbolic where
    /// possible; ranks and frame independence are decided exactly at the grid
    /// points plus `extra_points`.
    pub fn validation_failures(
        l: &VectorForm,
        kernel_frame: &[VectorField],
        liouville: &VectorField,
        extra_points: &[Point],
    ) -> Vec<CheckFailure> {
        let nv = l.num_vars();
        let n = nv / 2;
        let mut failures = Vec::new();
        let mut fail = |name: &str, residual: String| {
            failures.push(CheckFailure { name: name.to_string(), residual });
        };

        if l.degree() != 1 {
            fail("structure degree", format!("degree {} (want 1)", l.degree()));
            return failures;
        }
        let ll = l.compose(l);
        if !ll.is_zero() {
            fail("nilpotency L∘L = 0", ll.to_string());
        }
        let nijenhuis = fn_bracket(l, l);
        if !nijenhuis.is_zero() {
            fail("vanishing Nijenhuis tensor [L,L] = 0", nijenhuis.to_string());
        }
        if kernel_frame.len() != n {
            fail("kernel frame size", format!("{} fields (want {})", kernel_frame.len(), n));
        }
        for (i, field) in kernel_frame.iter().enumerate() {
            let image = l.apply_field(field);
            if !image.is_zero() {
                fail(&format!("kernel frame field {} annihilated", i + 1), image.to_string());
            }
        }
        let lc = l.apply_field(liouville);
        if !lc.is_zero() {
            fail("dilation field is vertical (L·C = 0)", lc.to_string());
        }
        let hom = fn_bracket_field(liouville, l).add(l);
        if !hom.is_zero() {
            fail("dilation compatibility [C,L] = -L", hom.to_string());
        }

        let mut points = grid_points(nv);
        points.extend_from_slice(extra_points);
        for point in &points {
            let matrix = l.eval_matrix(point);
            let r = rank(&matrix);
            if r != n {
                fail(
                    "rank of L at sample point",
                    format!("rank {} (want {}) at ({})", r, n, format_point(point)),
                );
                break;
            }
            if kernel_frame.len() == n {
                let cols: Vec<Vec<Rational>> =
                    kernel_frame.iter().map(|f| f.eval(point)).collect();
                if rank(&cols) != n {
                    fail(
                        "kernel frame independence at sample point",
                        format!("dependent at ({})", format_point(point)),
                    );
                    break;
                }
            }
        }
        failures
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_vars(&self) -> usize {
        2 * self.n
    }

    pub fn l(&self) -> &VectorForm {
        &self.l
    }

    pub fn kernel_frame(&self) -> &[VectorField] {
        &self.kernel_frame
    }

    /// The dilation (Liouville-type) field grading homogeneity.
    pub fn liouville(&self) -> &VectorField {
        &self.liouville
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    /// Semispray from vertical components `Gⁱ`: `S = yⁱ∂xⁱ + Gⁱ∂yⁱ`.
    /// Canonical structure only — the horizontal part is forced by `LS = C`.
    pub fn semispray_from_vertical(&self, g: &[MultiPoly]) -> Result<Semispray, TangentError> {
        if !self.canonical {
            return Err(TangentError::RequiresCanonical);
        }
        assert_eq!(g.len(), self.n, "one vertical component per fiber direction");
        let nv = self.num_vars();
        let mut components = Vec::with_capacity(nv);
        for i in 0..self.n {
            components.push(MultiPoly::var(nv, self.n + i));
        }
        for gi in g {
            assert_eq!(gi.num_vars(), nv);
            components.push(gi.clone());
        }
        self.semispray_from_field(VectorField::from_components(components))
    }

    /// Wraps an arbitrary field after verifying `L(S) = C` exactly.
    pub fn semispray_from_field(&self, s: VectorField) -> Result<Semispray, TangentError> {
        let residual = self.l.apply_field(&s).sub(&self.liouville);
        if !residual.is_zero() {
            return Err(TangentError::NotSemispray(residual.to_string()));
        }
        let is_spray = self.spray_residual_of(&s).is_zero();
        Ok(Semispray { field: s, is_spray })
    }

    /// The residual `[C,S] - S`, zero exactly for sprays.
    pub fn spray_residual(&self, s: &Semispray) -> VectorField {
        self.spray_residual_of(&s.field)
    }

    fn spray_residual_of(&self, s: &VectorField) -> VectorField {
        self.liouville.lie_bracket(s).sub(s)
    }

    /// The reference semispray `S' = yⁱ∂xⁱ` (zero vertical part), used to
    /// build canonical semisprays and potentials. Canonical structure only.
    pub fn reference_semispray(&self) -> Result<Semispray, TangentError> {
        if !self.canonical {
            return Err(TangentError::RequiresCanonical);
        }
        self.semispray_from_vertical(&vec![MultiPoly::zero(self.num_vars()); self.n])
    }

    /// Why `k` fails to be semibasic, or `None` if it is. A vector form is
    /// semibasic when its values are vertical (`L∘K = 0`) and every kernel
    /// insertion vanishes; insertion in the first slot suffices since the
    /// forms are alternating.
    pub fn semibasic_failure_vector(&self, k: &VectorForm) -> Option<String> {
        let lk = self.l.compose(k);
        if !lk.is_zero() {
            return Some(format!("values not vertical: L∘K = {lk}"));
        }
        if k.degree() >= 1 {
            for (i, field) in self.kernel_frame.iter().enumerate() {
                let ins = k.insert_field(field);
                if !ins.is_zero() {
                    return Some(format!("kernel insertion {} nonzero: {ins}", i + 1));
                }
            }
        }
        None
    }

    pub fn is_semibasic_vector(&self, k: &VectorForm) -> bool {
        self.semibasic_failure_vector(k).is_none()
    }

    /// Scalar forms: only the kernel-insertion condition applies; degree-0
    /// forms are vacuously semibasic.
    pub fn semibasic_failure_scalar(&self, omega: &ScalarForm) -> Option<String> {
        if omega.degree() >= 1 {
            for (i, field) in self.kernel_frame.iter().enumerate() {
                let ins = omega.insert_field(field);
                if !ins.is_zero() {
                    return Some(format!("kernel insertion {} nonzero: {ins}", i + 1));
                }
            }
        }
        None
    }

    pub fn is_semibasic_scalar(&self, omega: &ScalarForm) -> bool {
        self.semibasic_failure_scalar(omega).is_none()
    }

    pub fn vector_homogeneity_residual(&self, k: &VectorForm, r: i64) -> VectorForm {
        homogeneity_residual_vector(k, r, &self.liouville)
    }

    pub fn scalar_homogeneity_residual(&self, omega: &ScalarForm, r: i64) -> ScalarForm {
        homogeneity_residual_scalar(omega, r, &self.liouville)
    }

    pub fn is_homogeneous_vector(&self, k: &VectorForm, r: i64) -> bool {
        self.vector_homogeneity_residual(k, r).is_zero()
    }

    /// Potential `K° = i_S K` of a semibasic vector form. The semibasic check
    /// is what makes the result independent of the semispray choice.
    pub fn potential_vector(
        &self,
        k: &VectorForm,
        s: &Semispray,
    ) -> Result<VectorForm, TangentError> {
        if let Some(why) = self.semibasic_failure_vector(k) {
            return Err(TangentError::NotSemibasic(why));
        }
        Ok(k.insert_field(&s.field))
    }

    pub fn potential_scalar(
        &self,
        omega: &ScalarForm,
        s: &Semispray,
    ) -> Result<ScalarForm, TangentError> {
        if let Some(why) = self.semibasic_failure_scalar(omega) {
            return Err(TangentError::NotSemibasic(why));
        }
        Ok(omega.insert_field(&s.field))
    }

    /// Residual of the reconstruction of a semibasic form homogeneous of
    /// degree `r` from its bracket data:
    /// `K - (1/(r+k)) ([L,K]° + [L,K°])`, identically zero for valid inputs.
    pub fn reconstruction_residual(
        &self,
        k: &VectorForm,
        r: i64,
        s: &Semispray,
    ) -> Result<VectorForm, TangentError> {
        let degree = k.degree() as i64;
        if let Some(why) = self.semibasic_failure_vector(k) {
            return Err(TangentError::NotSemibasic(why));
        }
        let hom = self.vector_homogeneity_residual(k, r);
        if !hom.is_zero() {
            return Err(TangentError::NotHomogeneous { degree: r, residual: hom.to_string() });
        }
        if r + degree == 0 {
            return Err(TangentError::ZeroWeight);
        }
        let lk_pot = fn_bracket(&self.l, k).insert_field(&s.field);
        let pot_lk = fn_bracket(&self.l, &k.insert_field(&s.field));
        let weight = Rational::new(1.into(), (r + degree).into());
        let rebuilt = lk_pot.add(&pot_lk).scale(&weight);
        Ok(k.sub(&rebuilt))
    }
}

fn format_point(point: &Point) -> String {
    point.iter().map(Rational::to_string).collect::<Vec<_>>().join(", ")
}
