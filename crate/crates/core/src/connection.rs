//! Nonlinear connections attached to a tangent structure.
//!
//! A connection is a vector 1-form `Γ` with `L∘Γ = L` and `Γ∘L = -L`;
//! equivalently an almost-product structure (`Γ² = I`) whose −1 eigenspace is
//! the vertical bundle. The projectors are `h = ½(I+Γ)` and `v = ½(I−Γ)`.
//! From these come the torsion `T = ½[L,Γ]` with its strong (potential-level)
//! part, the curvature `R = -½[h,h]`, the Bianchi residuals, conservativity,
//! and the pointwise nullity of `R`.
//!
//! Torsion and curvature are cross-checked internally against their
//! alternative bracket expressions and against classical frame formulas; a
//! mismatch there is not an input problem but an engine bug, so those paths
//! panic instead of returning errors.

use crate::calculus::{fn_bracket, fn_bracket_field, increasing_tuples, VectorField, VectorForm};
use crate::linalg::{kernel_basis, rank};
use crate::ratpoly::{ratio, MultiPoly, Point, Rational};
use crate::tangent::{Semispray, TangentStructure, TangentError};
use crate::{CheckFailure, FailureList};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConnectionError {
    #[error("connection rejected:\n{0}")]
    Invalid(FailureList),
    #[error("strong torsion input is not semibasic ({0})")]
    TorsionNotSemibasic(String),
    #[error("decomposition incompatible with the semispray: residual {residual}")]
    Incompatible { residual: String },
    #[error("operation requires a homogeneous connection ([C,Γ] = 0)")]
    NotHomogeneous,
    #[error("frame is degenerate at sample point ({point})")]
    DegenerateFrame { point: String },
    #[error(transparent)]
    Tangent(#[from] TangentError),
}

/// Torsion data: the torsion 2-form `T = ½[L,Γ]` and the strong torsion
/// 1-form `t = T° - ½[C,Γ]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionData {
    pub torsion: VectorForm,
    pub strong: VectorForm,
}

/// Outcome of the conservativity test on a homogeneous connection.
#[derive(Clone, Debug)]
pub struct ConservativeReport {
    pub conservative: bool,
    /// `[L,Γ]`, zero exactly when conservative (equals `2T`).
    pub residual: VectorForm,
    /// For conservative connections, the residual `R - ⅓[L,R°]` (zero).
    pub potential_identity: Option<VectorForm>,
}

/// Nullity of the curvature at one point: the kernel of `X ↦ i_X R` inside
/// the horizontal space, with basis vectors in chart coordinates.
#[derive(Clone, Debug)]
pub struct NullityReport {
    pub point: Point,
    pub basis: Vec<Vec<Rational>>,
    pub mu: usize,
}

/// One involutivity failure: the bracket of the `pair` left the span of the
/// frame at `point`.
#[derive(Clone, Debug)]
pub struct InvolutivityFailure {
    pub point: Point,
    pub pair: (usize, usize),
}

#[derive(Clone, Debug)]
pub struct LConnection {
    gamma: VectorForm,
    h: VectorForm,
    v: VectorForm,
    homogeneous: bool,
}

impl LConnection {
    /// Validates the defining identities and wraps the connection. The
    /// projector algebra (idempotency, the annihilation/reproduction rules
    /// with `L`) follows from the defining identities and is asserted.
    pub fn validate(gamma: VectorForm, ts: &TangentStructure) -> Result<Self, ConnectionError> {
        let failures = Self::validation_failures(&gamma, ts);
        if !failures.is_empty() {
            return Err(ConnectionError::Invalid(FailureList(failures)));
        }
        let nv = ts.num_vars();
        let half = ratio(1, 2);
        let identity = VectorForm::identity(nv);
        let h = identity.add(&gamma).scale(&half);
        let v = identity.sub(&gamma).scale(&half);
        for (name, residual) in projector_identity_residuals(&gamma, &h, &v, ts) {
            assert!(
                residual.is_zero(),
                "projector identity {name} violated for a validated connection: {residual}"
            );
        }
        let homogeneous = fn_bracket_field(ts.liouville(), &gamma).is_zero();
        Ok(LConnection { gamma, h, v, homogeneous })
    }

    /// The violated defining identities, with residuals.
    pub fn validation_failures(gamma: &VectorForm, ts: &TangentStructure) -> Vec<CheckFailure> {
        let mut failures = Vec::new();
        let mut fail = |name: &str, residual: String| {
            failures.push(CheckFailure { name: name.to_string(), residual });
        };
        if gamma.degree() != 1 {
            fail("connection degree", format!("degree {} (want 1)", gamma.degree()));
            return failures;
        }
        let l = ts.l();
        let lg = l.compose(gamma).sub(l);
        if !lg.is_zero() {
            fail("vertical reproduction L∘Γ = L", lg.to_string());
        }
        let gl = gamma.compose(l).add(l);
        if !gl.is_zero() {
            fail("vertical reflection Γ∘L = -L", gl.to_string());
        }
        let gg = gamma.compose(gamma).sub(&VectorForm::identity(ts.num_vars()));
        if !gg.is_zero() {
            fail("involution Γ∘Γ = I", gg.to_string());
        }
        failures
    }

    /// The connection `Γ = [L,S]` induced by a semispray (always valid;
    /// homogeneous exactly when `S` is a spray).
    pub fn from_semispray(s: &Semispray, ts: &TangentStructure) -> Self {
        let gamma = fn_bracket(ts.l(), &VectorForm::from_field(s.field()));
        let conn = Self::validate(gamma, ts)
            .expect("the bracket of the structure with a semispray is always a connection");
        if s.is_spray() {
            assert!(conn.homogeneous, "a spray must induce a homogeneous connection");
        }
        conn
    }

    /// The unique connection with canonical semispray `S` and strong torsion
    /// `t`, namely `Γ = [L,S] + t`. Requires `t` semibasic and the
    /// compatibility `t° + [C,S] - S = 0`; rejected otherwise.
    pub fn from_decomposition(
        s: &Semispray,
        t: &VectorForm,
        ts: &TangentStructure,
    ) -> Result<Self, ConnectionError> {
        if let Some(why) = ts.semibasic_failure_vector(t) {
            return Err(ConnectionError::TorsionNotSemibasic(why));
        }
        let t_pot = t.insert_field(s.field()).to_field();
        let residual = t_pot
            .add(&ts.liouville().lie_bracket(s.field()))
            .sub(s.field());
        if !residual.is_zero() {
            return Err(ConnectionError::Incompatible { residual: residual.to_string() });
        }
        let gamma = fn_bracket(ts.l(), &VectorForm::from_field(s.field())).add(t);
        Self::validate(gamma, ts)
    }

    pub fn gamma(&self) -> &VectorForm {
        &self.gamma
    }

    pub fn h(&self) -> &VectorForm {
        &self.h
    }

    pub fn v(&self) -> &VectorForm {
        &self.v
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }

    /// `[C,Γ]` — zero exactly for homogeneous connections.
    pub fn homogeneity_residual(&self, ts: &TangentStructure) -> VectorForm {
        fn_bracket_field(ts.liouville(), &self.gamma)
    }

    /// The canonical semispray `S = h(S')` from the reference semispray; the
    /// result does not depend on the reference (`h` kills vertical
    /// differences), which the verifier re-checks explicitly.
    pub fn canonical_semispray(&self, ts: &TangentStructure) -> Result<Semispray, ConnectionError> {
        let reference = ts.reference_semispray()?;
        Ok(self.canonical_semispray_from(&reference, ts))
    }

    pub fn canonical_semispray_from(
        &self,
        reference: &Semispray,
        ts: &TangentStructure,
    ) -> Semispray {
        let field = self.h.apply_field(reference.field());
        ts.semispray_from_field(field)
            .expect("the horizontal projector preserves the semispray property")
    }

    /// Residual of the canonical-semispray characterization
    /// `½[C,Γ]° + S - [C,S]`, zero when `S` is the canonical semispray.
    pub fn canonical_semispray_residual(
        &self,
        s: &Semispray,
        ts: &TangentStructure,
    ) -> VectorField {
        let cg = fn_bracket_field(ts.liouville(), &self.gamma);
        let half_pot = cg.insert_field(s.field()).to_field().scale(&ratio(1, 2));
        half_pot
            .add(s.field())
            .sub(&ts.liouville().lie_bracket(s.field()))
    }

    /// Torsion `T = ½[L,Γ]` and strong torsion `t = T° - ½[C,Γ]`, with the
    /// alternative bracket forms and the classical frame formula asserted.
    /// `s` is only used to take the potential (any semispray gives the same).
    pub fn torsion(&self, s: &Semispray, ts: &TangentStructure) -> TorsionData {
        let l = ts.l();
        let half = ratio(1, 2);
        let torsion = fn_bracket(l, &self.gamma).scale(&half);
        assert_eq!(torsion, fn_bracket(l, &self.h), "torsion cross-check [L,h] failed");
        assert_eq!(torsion, fn_bracket(l, &self.v).neg(), "torsion cross-check -[L,v] failed");
        assert!(
            ts.is_semibasic_vector(&torsion),
            "torsion of a validated connection must be semibasic"
        );
        // Frame formula: T(X,Y) = v[LX,hY] + v[hX,LY] - L[hX,hY] on ∂_a, ∂_b.
        let nv = ts.num_vars();
        for tuple in increasing_tuples(nv, 2) {
            let da = VectorField::coordinate(nv, tuple[0] as usize);
            let db = VectorField::coordinate(nv, tuple[1] as usize);
            let (la, lb) = (l.apply_field(&da), l.apply_field(&db));
            let (ha, hb) = (self.h.apply_field(&da), self.h.apply_field(&db));
            let classical = self
                .v
                .apply_field(&la.lie_bracket(&hb))
                .add(&self.v.apply_field(&ha.lie_bracket(&lb)))
                .sub(&l.apply_field(&ha.lie_bracket(&hb)));
            assert_eq!(
                torsion.eval_fields(&[&da, &db]),
                classical,
                "torsion frame cross-check failed on a coordinate pair"
            );
        }
        let strong = torsion
            .insert_field(s.field())
            .sub(&fn_bracket_field(ts.liouville(), &self.gamma).scale(&half));
        assert!(
            ts.is_semibasic_vector(&strong),
            "strong torsion of a validated connection must be semibasic"
        );
        TorsionData { torsion, strong }
    }

    /// Curvature `R = -½[h,h]`, with the alternative bracket expressions and
    /// the classical frame formula asserted.
    pub fn curvature(&self, ts: &TangentStructure) -> VectorForm {
        let minus_half = ratio(-1, 2);
        let r = fn_bracket(&self.h, &self.h).scale(&minus_half);
        assert_eq!(
            r,
            fn_bracket(&self.v, &self.v).scale(&minus_half),
            "curvature cross-check -½[v,v] failed"
        );
        assert_eq!(
            r,
            fn_bracket(&self.h, &self.v).scale(&ratio(1, 2)),
            "curvature cross-check ½[h,v] failed"
        );
        assert_eq!(
            r,
            fn_bracket(&self.gamma, &self.gamma).scale(&ratio(-1, 8)),
            "curvature cross-check -⅛[Γ,Γ] failed"
        );
        assert!(
            ts.is_semibasic_vector(&r),
            "curvature of a validated connection must be semibasic"
        );
        // Frame formula: R(X,Y) = -v[hX,hY] on ∂_a, ∂_b.
        let nv = ts.num_vars();
        for tuple in increasing_tuples(nv, 2) {
            let da = VectorField::coordinate(nv, tuple[0] as usize);
            let db = VectorField::coordinate(nv, tuple[1] as usize);
            let (ha, hb) = (self.h.apply_field(&da), self.h.apply_field(&db));
            let classical = self.v.apply_field(&ha.lie_bracket(&hb)).neg();
            assert_eq!(
                r.eval_fields(&[&da, &db]),
                classical,
                "curvature frame cross-check failed on a coordinate pair"
            );
        }
        r
    }

    /// The two Bianchi residuals `[L,R] - [h,T]` and `[h,R]`, identically
    /// zero for every connection.
    pub fn bianchi_residuals(&self, ts: &TangentStructure) -> (VectorForm, VectorForm) {
        let torsion = fn_bracket(ts.l(), &self.gamma).scale(&ratio(1, 2));
        let r = fn_bracket(&self.h, &self.h).scale(&ratio(-1, 2));
        let first = fn_bracket(ts.l(), &r).sub(&fn_bracket(&self.h, &torsion));
        let second = fn_bracket(&self.h, &r);
        (first, second)
    }

    /// For Γ = [L,S], the curvature's closed spray forms
    /// `R = -¼[L,[S,h]]` and `R = -[L, h∘[S,h]]`, returned as residuals.
    pub fn spray_curvature_residuals(
        &self,
        s: &Semispray,
        ts: &TangentStructure,
    ) -> (VectorForm, VectorForm) {
        let r = self.curvature(ts);
        let sh = fn_bracket_field(s.field(), &self.h);
        let first = r.add(&fn_bracket(ts.l(), &sh).scale(&ratio(1, 4)));
        let second = r.add(&fn_bracket(ts.l(), &self.h.compose(&sh)));
        (first, second)
    }

    /// Conservativity of a homogeneous connection: true iff `[L,Γ] = 0`;
    /// when true, the potential identity `R = ⅓[L,R°]` is also verified.
    pub fn conservative_check(
        &self,
        s: &Semispray,
        ts: &TangentStructure,
    ) -> Result<ConservativeReport, ConnectionError> {
        if !self.homogeneous {
            return Err(ConnectionError::NotHomogeneous);
        }
        let residual = fn_bracket(ts.l(), &self.gamma);
        let conservative = residual.is_zero();
        let potential_identity = if conservative {
            let r = self.curvature(ts);
            let r_pot = r.insert_field(s.field());
            Some(r.sub(&fn_bracket(ts.l(), &r_pot).scale(&ratio(1, 3))))
        } else {
            None
        };
        Ok(ConservativeReport { conservative, residual, potential_identity })
    }

    /// The horizontal frame `h∂x¹..h∂xⁿ`.
    pub fn horizontal_frame(&self, ts: &TangentStructure) -> Vec<VectorField> {
        (0..ts.n())
            .map(|a| self.h.apply_field(&VectorField::coordinate(ts.num_vars(), a)))
            .collect()
    }

    /// Nullity of the curvature at a point: kernel of `X ↦ i_X R` on the
    /// horizontal space spanned by `h∂x^α(z)`.
    pub fn nullity(
        &self,
        z: &Point,
        ts: &TangentStructure,
    ) -> Result<NullityReport, ConnectionError> {
        let n = ts.n();
        let r = self.curvature(ts);
        let frame = self.horizontal_frame(ts);
        let frame_at_z: Vec<Vec<Rational>> = frame.iter().map(|f| f.eval(z)).collect();
        if rank(&frame_at_z) != n {
            return Err(ConnectionError::DegenerateFrame { point: format_point(z) });
        }
        // Rows of the system: for every partner frame field and every output
        // component, Σ_α c_α · R(u_α, u_β)^e(z) = 0.
        let mut pair_values = vec![vec![Vec::new(); n]; n];
        for (alpha, fa) in frame.iter().enumerate() {
            for (beta, fb) in frame.iter().enumerate() {
                pair_values[alpha][beta] = r.eval_fields(&[fa, fb]).eval(z);
            }
        }
        let mut rows = Vec::new();
        for beta in 0..n {
            for e in 0..ts.num_vars() {
                rows.push((0..n).map(|alpha| pair_values[alpha][beta][e].clone()).collect());
            }
        }
        let kernel = kernel_basis(&rows);
        let basis = kernel
            .iter()
            .map(|coeffs| {
                let mut vec = vec![Rational::from_integer(0.into()); ts.num_vars()];
                for (alpha, c) in coeffs.iter().enumerate() {
                    for (e, val) in frame_at_z[alpha].iter().enumerate() {
                        vec[e] += c * val;
                    }
                }
                vec
            })
            .collect::<Vec<_>>();
        let mu = basis.len();
        assert!(mu <= n, "nullity cannot exceed the horizontal dimension");
        Ok(NullityReport { point: z.clone(), basis, mu })
    }

    /// Connection coefficients `Γ^i_α` from `h∂x^α = ∂x^α - Γ^i_α ∂y^i`
    /// (so that `dy^i + Γ^i_α dx^α` annihilates the horizontal space).
    /// Canonical structure only.
    pub fn coefficients(
        &self,
        ts: &TangentStructure,
    ) -> Result<Vec<Vec<MultiPoly>>, ConnectionError> {
        if !ts.is_canonical() {
            return Err(ConnectionError::Tangent(TangentError::RequiresCanonical));
        }
        let n = ts.n();
        let hm = self.h.matrix();
        Ok((0..n).map(|i| (0..n).map(|alpha| hm[n + i][alpha].neg()).collect()).collect())
    }
}

/// The projector/structure algebra implied by the defining identities:
/// `h² = h`, `v² = v`, `h+v = I`, `L∘h = L`, `h∘L = 0`, `L∘v = 0`, `v∘L = L`,
/// `Γ∘h = h`, `h∘Γ = h`, `Γ∘v = -v`, `v∘Γ = -v`. Exposed so the verifier can
/// report each named residual.
pub fn projector_identity_residuals(
    gamma: &VectorForm,
    h: &VectorForm,
    v: &VectorForm,
    ts: &TangentStructure,
) -> Vec<(String, VectorForm)> {
    let l = ts.l();
    let id = VectorForm::identity(ts.num_vars());
    let pairs: Vec<(&str, VectorForm)> = vec![
        ("h∘h = h", h.compose(h).sub(h)),
        ("v∘v = v", v.compose(v).sub(v)),
        ("h + v = I", h.add(v).sub(&id)),
        ("L∘h = L", l.compose(h).sub(l)),
        ("h∘L = 0", h.compose(l)),
        ("L∘v = 0", l.compose(v)),
        ("v∘L = L", v.compose(l).sub(l)),
        ("Γ∘h = h", gamma.compose(h).sub(h)),
        ("h∘Γ = h", h.compose(gamma).sub(h)),
        ("Γ∘v = -v", gamma.compose(v).add(v)),
        ("v∘Γ = -v", v.compose(gamma).add(v)),
    ];
    pairs.into_iter().map(|(n, r)| (n.to_string(), r)).collect()
}

/// Involutivity of a frame at sample points: every pairwise bracket must stay
/// in the frame's span, decided by exact rank comparison. Errors if the frame
/// degenerates at a point.
pub fn involutivity_failures(
    frame: &[VectorField],
    points: &[Point],
) -> Result<Vec<InvolutivityFailure>, ConnectionError> {
    let mut failures = Vec::new();
    for z in points {
        let base: Vec<Vec<Rational>> = frame.iter().map(|f| f.eval(z)).collect();
        let base_rank = rank(&base);
        if base_rank != frame.len() {
            return Err(ConnectionError::DegenerateFrame { point: format_point(z) });
        }
        for i in 0..frame.len() {
            for j in (i + 1)..frame.len() {
                let bracket = frame[i].lie_bracket(&frame[j]).eval(z);
                let mut extended = base.clone();
                extended.push(bracket);
                if rank(&extended) != base_rank {
                    failures.push(InvolutivityFailure { point: z.clone(), pair: (i, j) });
                }
            }
        }
    }
    Ok(failures)
}

fn format_point(point: &Point) -> String {
    point.iter().map(Rational::to_string).collect::<Vec<_>>().join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::rat;
    use crate::sample::Sampler;

    fn xv(nv: usize, i: usize) -> MultiPoly {
        MultiPoly::var(nv, i)
    }

    /// n=1 instances used throughout: the flat spray connection and the
    /// shifted connection with strong torsion t = x1 dx1⊗∂y1.
    fn flat_n1() -> (TangentStructure, Semispray, LConnection) {
        let ts = TangentStructure::canonical(1);
        let s0 = ts.semispray_from_vertical(&[MultiPoly::zero(2)]).unwrap();
        let conn = LConnection::from_semispray(&s0, &ts);
        (ts, s0, conn)
    }

    fn torsion_n1() -> (TangentStructure, Semispray, VectorForm, LConnection) {
        let ts = TangentStructure::canonical(1);
        let g = xv(2, 0).mul(&xv(2, 1)); // G = x1*y1
        let s = ts.semispray_from_vertical(&[g]).unwrap();
        let t = VectorForm::from_matrix(&vec![
            vec![MultiPoly::zero(2), MultiPoly::zero(2)],
            vec![xv(2, 0), MultiPoly::zero(2)],
        ]);
        let conn = LConnection::from_decomposition(&s, &t, &ts).unwrap();
        (ts, s, t, conn)
    }

    /// Curved n=2 spray instance G¹ = x1*(y2)², G² = 0, with genuinely
    /// nonzero curvature R = -(y2) dx1∧dx2 ⊗ ∂y1.
    fn curved_n2() -> (TangentStructure, Semispray, LConnection) {
        let ts = TangentStructure::canonical(2);
        let g1 = xv(4, 0).mul(&xv(4, 3)).mul(&xv(4, 3));
        let s = ts.semispray_from_vertical(&[g1, MultiPoly::zero(4)]).unwrap();
        let conn = LConnection::from_semispray(&s, &ts);
        (ts, s, conn)
    }

    /// Homogeneous n=2 connection with nonzero torsion, built from the zero
    /// spray and the degree-1 strong torsion t = (y2 dx1 - y1 dx2)⊗∂y1.
    fn homogeneous_torsion_n2() -> (TangentStructure, Semispray, VectorForm, LConnection) {
        let ts = TangentStructure::canonical(2);
        let s0 = ts
            .semispray_from_vertical(&[MultiPoly::zero(4), MultiPoly::zero(4)])
            .unwrap();
        let t = VectorForm::from_matrix(&vec![
            vec![MultiPoly::zero(4); 4],
            vec![MultiPoly::zero(4); 4],
            vec![xv(4, 3), xv(4, 2).neg(), MultiPoly::zero(4), MultiPoly::zero(4)],
            vec![MultiPoly::zero(4); 4],
        ]);
        let conn = LConnection::from_decomposition(&s0, &t, &ts).unwrap();
        (ts, s0, t, conn)
    }

    #[test]
    fn flat_connection_matrix_and_flags() {
        let (ts, _, conn) = flat_n1();
        let m = conn.gamma().matrix();
        assert_eq!(m[0][0], MultiPoly::one(2));
        assert_eq!(m[1][1], MultiPoly::one(2).neg());
        assert!(m[0][1].is_zero() && m[1][0].is_zero());
        assert!(conn.is_homogeneous());
        assert!(conn.homogeneity_residual(&ts).is_zero());
    }

    #[test]
    fn identity_is_not_a_connection() {
        let ts = TangentStructure::canonical(1);
        let failures = LConnection::validation_failures(&VectorForm::identity(2), &ts);
        assert!(failures.iter().any(|f| f.name.contains("Γ∘L")));
    }

    #[test]
    fn shifted_connection_homogeneous_iff_shift_vanishes() {
        let (ts, _, _, conn) = torsion_n1();
        assert!(!conn.is_homogeneous());
        // [C,Γ] = -2t on this instance.
        let expected = VectorForm::from_matrix(&vec![
            vec![MultiPoly::zero(2), MultiPoly::zero(2)],
            vec![xv(2, 0).scale(&rat(-2)), MultiPoly::zero(2)],
        ]);
        assert_eq!(conn.homogeneity_residual(&ts), expected);
    }

    #[test]
    fn canonical_semispray_of_flat_is_geodesic_field() {
        let (ts, s0, conn) = flat_n1();
        let s = conn.canonical_semispray(&ts).unwrap();
        assert_eq!(s.field(), s0.field());
        assert!(conn.canonical_semispray_residual(&s, &ts).is_zero());
    }

    #[test]
    fn canonical_semispray_for_spray_recovers_spray() {
        let (ts, s, conn) = curved_n2();
        assert!(s.is_spray());
        let canonical = conn.canonical_semispray(&ts).unwrap();
        assert_eq!(canonical.field(), s.field());
    }

    #[test]
    fn canonical_semispray_for_non_spray_averages() {
        // Γ = [L,S] for non-spray S has canonical semispray ½(S + [C,S]).
        let ts = TangentStructure::canonical(1);
        let g = xv(2, 0).mul(&xv(2, 1));
        let s = ts.semispray_from_vertical(&[g]).unwrap();
        let conn = LConnection::from_semispray(&s, &ts);
        let canonical = conn.canonical_semispray(&ts).unwrap();
        let expected = s
            .field()
            .add(&ts.liouville().lie_bracket(s.field()))
            .scale(&ratio(1, 2));
        assert_eq!(canonical.field(), &expected);
        assert!(conn.canonical_semispray_residual(&canonical, &ts).is_zero());
        // Independence from the reference semispray.
        let other_ref = ts.semispray_from_vertical(&[xv(2, 1).mul(&xv(2, 1))]).unwrap();
        assert_eq!(conn.canonical_semispray_from(&other_ref, &ts).field(), &expected);
    }

    #[test]
    fn semispray_connections_are_torsion_free() {
        // The 2-form torsion of Γ = [L,S] always vanishes; the strong
        // torsion reduces to -½[C,Γ], so it vanishes exactly when the
        // connection is homogeneous.
        let ts = TangentStructure::canonical(2);
        let mut sampler = Sampler::new(23);
        for _ in 0..5 {
            let s = ts
                .semispray_from_vertical(&sampler.semispray_vertical(2, 3))
                .unwrap();
            let conn = LConnection::from_semispray(&s, &ts);
            let data = conn.torsion(&s, &ts);
            assert!(data.torsion.is_zero());
            let expected_strong = conn.homogeneity_residual(&ts).scale(&ratio(-1, 2));
            assert_eq!(data.strong, expected_strong);
            assert_eq!(data.strong.is_zero(), conn.is_homogeneous());
        }
    }

    #[test]
    fn strong_torsion_recovers_decomposition_input() {
        let (ts, s, t, conn) = torsion_n1();
        // The 2-form torsion vanishes in one base dimension, but the strong
        // torsion still recovers t exactly.
        let data = conn.torsion(&s, &ts);
        assert!(data.torsion.is_zero());
        assert_eq!(data.strong, t);
        // Γ maps ∂x1 to ∂x1 + 2·x1 ∂y1 on this instance.
        assert_eq!(conn.gamma().matrix()[1][0], xv(2, 0).scale(&rat(2)));
    }

    #[test]
    fn decomposition_roundtrip_and_rejection() {
        let (ts, s, _t, conn) = torsion_n1();
        // Roundtrip: extract (canonical semispray, strong torsion), rebuild.
        let canonical = conn.canonical_semispray(&ts).unwrap();
        assert_eq!(canonical.field(), s.field());
        let strong = conn.torsion(&canonical, &ts).strong;
        let rebuilt = LConnection::from_decomposition(&canonical, &strong, &ts).unwrap();
        assert_eq!(rebuilt.gamma(), conn.gamma());
        // Incompatible pair: (S0, t = dx⊗∂y) leaves the residual y1 ∂y1.
        let s0 = ts.semispray_from_vertical(&[MultiPoly::zero(2)]).unwrap();
        let bad_t = VectorForm::from_matrix(&vec![
            vec![MultiPoly::zero(2), MultiPoly::zero(2)],
            vec![MultiPoly::one(2), MultiPoly::zero(2)],
        ]);
        match LConnection::from_decomposition(&s0, &bad_t, &ts) {
            Err(ConnectionError::Incompatible { residual }) => {
                assert_eq!(residual, "(y1) ∂y1");
            }
            other => panic!("expected incompatibility, got {other:?}"),
        }
    }

    #[test]
    fn flat_and_one_dimensional_curvature_vanishes() {
        let (ts, _, conn) = flat_n1();
        assert!(conn.curvature(&ts).is_zero());
        let (ts_b, _, _, conn_b) = torsion_n1();
        assert!(conn_b.curvature(&ts_b).is_zero());
    }

    #[test]
    fn curved_instance_curvature_value() {
        let (ts, s, conn) = curved_n2();
        let r = conn.curvature(&ts);
        // R = -(y2) dx1∧dx2 ⊗ ∂y1.
        let mut expected_comp = crate::calculus::ScalarForm::zero(4, 2);
        expected_comp = expected_comp.add(&crate::calculus::ScalarForm::from_coefficients(
            4,
            2,
            vec![(vec![0, 1], xv(4, 3).neg())],
        ));
        let expected = VectorForm::from_components(vec![
            crate::calculus::ScalarForm::zero(4, 2),
            crate::calculus::ScalarForm::zero(4, 2),
            expected_comp,
            crate::calculus::ScalarForm::zero(4, 2),
        ]);
        assert_eq!(r, expected);
        // R° = (y2)² dx1⊗∂y1 - y1*y2 dx2⊗∂y1.
        let r_pot = ts.potential_vector(&r, &s).unwrap();
        let m = r_pot.matrix();
        assert_eq!(m[2][0], xv(4, 3).mul(&xv(4, 3)));
        assert_eq!(m[2][1], xv(4, 2).mul(&xv(4, 3)).neg());
        assert!(!r_pot.is_zero());
    }

    #[test]
    fn bianchi_residuals_vanish() {
        let (ts, _, conn) = flat_n1();
        let (a, b) = conn.bianchi_residuals(&ts);
        assert!(a.is_zero() && b.is_zero());
        let (ts2, _, _, conn2) = torsion_n1();
        let (a2, b2) = conn2.bianchi_residuals(&ts2);
        assert!(a2.is_zero() && b2.is_zero());
        let (ts3, _, conn3) = curved_n2();
        let (a3, b3) = conn3.bianchi_residuals(&ts3);
        assert!(a3.is_zero() && b3.is_zero());
        let (ts4, _, _, conn4) = homogeneous_torsion_n2();
        let (a4, b4) = conn4.bianchi_residuals(&ts4);
        assert!(a4.is_zero() && b4.is_zero());
    }

    #[test]
    fn bianchi_decomposed_form() {
        // [[L,S],R] + [t,R] = 0 with Γ = [L,S] + t.
        let (ts, s, t, conn) = homogeneous_torsion_n2();
        let r = conn.curvature(&ts);
        let ls = fn_bracket(ts.l(), &VectorForm::from_field(s.field()));
        let residual = fn_bracket(&ls, &r).add(&fn_bracket(&t, &r));
        assert!(residual.is_zero());
    }

    #[test]
    fn conservative_flags_and_residuals() {
        let (ts, s, conn) = flat_n1();
        let report = conn.conservative_check(&s, &ts).unwrap();
        assert!(report.conservative);
        assert!(report.potential_identity.unwrap().is_zero());
        // Curved spray connection: conservative, and R = ⅓[L,R°] holds.
        let (ts2, s2, conn2) = curved_n2();
        let report2 = conn2.conservative_check(&s2, &ts2).unwrap();
        assert!(report2.conservative);
        assert!(report2.potential_identity.unwrap().is_zero());
        // Homogeneous with torsion: not conservative; residual = 2T.
        let (ts3, s3, _, conn3) = homogeneous_torsion_n2();
        assert!(conn3.is_homogeneous());
        let report3 = conn3.conservative_check(&s3, &ts3).unwrap();
        assert!(!report3.conservative);
        let torsion = conn3.torsion(&s3, &ts3).torsion;
        assert_eq!(report3.residual, torsion.scale(&rat(2)));
        assert!(report3.potential_identity.is_none());
        // Non-homogeneous input is rejected.
        let (ts4, s4, _, conn4) = torsion_n1();
        assert!(matches!(
            conn4.conservative_check(&s4, &ts4),
            Err(ConnectionError::NotHomogeneous)
        ));
    }

    #[test]
    fn homogeneous_torsion_instance_values() {
        let (ts, s0, t, conn) = homogeneous_torsion_n2();
        let data = conn.torsion(&s0, &ts);
        // T = -dx1∧dx2 ⊗ ∂y1.
        assert_eq!(
            data.torsion.component(2).coefficient(&[0, 1]),
            MultiPoly::one(4).neg()
        );
        assert!(!data.torsion.is_zero());
        assert_eq!(data.strong, t);
        // R(∂x1,∂x2) = ¼·y2 ∂y1.
        let r = conn.curvature(&ts);
        assert_eq!(
            r.component(2).coefficient(&[0, 1]),
            xv(4, 3).scale(&ratio(1, 4))
        );
    }

    #[test]
    fn spray_curvature_closed_forms() {
        let (ts, s, conn) = curved_n2();
        let (first, second) = conn.spray_curvature_residuals(&s, &ts);
        assert!(first.is_zero(), "R = -¼[L,[S,h]] violated: {first}");
        assert!(second.is_zero(), "R = -[L,h[S,h]] violated: {second}");
        let (ts0, s0, conn0) = flat_n1();
        let (f0, s0r) = conn0.spray_curvature_residuals(&s0, &ts0);
        assert!(f0.is_zero() && s0r.is_zero());
    }

    #[test]
    fn torsion_and_curvature_dilation_identities() {
        // [C,T] + T - ½[L,[C,Γ]] = 0 and [C,R] + ½[h,[C,Γ]] - R... the
        // general forms hold for every connection; check the non-homogeneous
        // n=1 instance and the curved n=2 instance.
        for (ts, s, conn) in [
            {
                let (ts, s, _, c) = torsion_n1();
                (ts, s, c)
            },
            {
                let (ts, s, c) = curved_n2();
                (ts, s, c)
            },
        ] {
            let t = conn.torsion(&s, &ts).torsion;
            let cg = conn.homogeneity_residual(&ts);
            let lhs = fn_bracket_field(ts.liouville(), &t)
                .add(&t)
                .sub(&fn_bracket(ts.l(), &cg).scale(&ratio(1, 2)));
            assert!(lhs.is_zero());
            let r = conn.curvature(&ts);
            let rhs = fn_bracket_field(ts.liouville(), &r)
                .add(&fn_bracket(&conn.h, &cg).scale(&ratio(1, 2)));
            // [C,R] + ½[h,[C,Γ]] vanishes for every connection; for
            // homogeneous ones this is the dilation invariance of R.
            assert!(rhs.is_zero());
        }
    }

    #[test]
    fn torsion_is_structure_closed() {
        for (ts, s, conn) in [
            {
                let (ts, s, _, c) = torsion_n1();
                (ts, s, c)
            },
            {
                let (ts, s, _, c) = homogeneous_torsion_n2();
                (ts, s, c)
            },
        ] {
            let t = conn.torsion(&s, &ts).torsion;
            assert!(fn_bracket(ts.l(), &t).is_zero());
        }
    }

    #[test]
    fn homogeneous_torsion_reconstruction() {
        // For a homogeneous connection, T = ½[L,T°] and the full
        // two-potential reconstruction T = ½([L,T]° + [L,T°]).
        let (ts, s0, _, conn) = homogeneous_torsion_n2();
        let t = conn.torsion(&s0, &ts).torsion;
        let t_pot = ts.potential_vector(&t, &s0).unwrap();
        let reduced = fn_bracket(ts.l(), &t_pot).scale(&ratio(1, 2));
        assert_eq!(t, reduced);
        assert!(ts.reconstruction_residual(&t, 0, &s0).unwrap().is_zero());
    }

    #[test]
    fn homogeneous_spray_torsion_potential_identity() {
        // For homogeneous connections: i_S T = [S,L]∘h + h, and the closed
        // torsion form T = [L, [S,L]∘h].
        let (ts, _s0, _, conn) = homogeneous_torsion_n2();
        let s = conn.canonical_semispray(&ts).unwrap();
        let t = conn.torsion(&s, &ts).torsion;
        let t_pot = t.insert_field(s.field());
        let slh = fn_bracket_field(s.field(), ts.l()).compose(&conn.h);
        assert_eq!(t_pot, slh.add(&conn.h));
        assert_eq!(t, fn_bracket(ts.l(), &slh));
    }

    #[test]
    fn nullity_on_flat_and_curved_instances() {
        let (ts, _, conn) = flat_n1();
        let report = conn.nullity(&vec![rat(0), rat(0)], &ts).unwrap();
        assert_eq!(report.mu, 1);
        assert_eq!(report.basis.len(), 1);
        let (ts2, _, conn2) = curved_n2();
        // At y2 = 1 the curvature is nonzero and kills the whole kernel.
        let z = vec![rat(0), rat(0), rat(0), rat(1)];
        let report2 = conn2.nullity(&z, &ts2).unwrap();
        assert_eq!(report2.mu, 0);
        // On the slice y2 = 0 the curvature vanishes and the kernel is full.
        let z0 = vec![rat(1), rat(1), rat(2), rat(0)];
        let report3 = conn2.nullity(&z0, &ts2).unwrap();
        assert_eq!(report3.mu, 2);
        // Basis vectors returned in chart coordinates annihilate R at z.
        for b in &report3.basis {
            assert_eq!(b.len(), 4);
        }
    }

    #[test]
    fn involutivity_matches_curvature() {
        let (ts, _, conn) = flat_n1();
        let frame = conn.horizontal_frame(&ts);
        let points = crate::sample::grid_points(2);
        assert!(involutivity_failures(&frame, &points).unwrap().is_empty());
        let (ts2, _, conn2) = curved_n2();
        let frame2 = conn2.horizontal_frame(&ts2);
        // Pick points where the bracket escapes the horizontal span.
        let z = vec![rat(0), rat(0), rat(0), rat(1)];
        let failures = involutivity_failures(&frame2, &[z]).unwrap();
        assert_eq!(failures.len(), 1);
        assert_eq!(failures[0].pair, (0, 1));
        // Degenerate frames are reported as errors.
        let dependent = vec![frame2[0].clone(), frame2[0].clone()];
        assert!(matches!(
            involutivity_failures(&dependent, &[vec![rat(0); 4]]),
            Err(ConnectionError::DegenerateFrame { .. })
        ));
    }

    #[test]
    fn integrability_chain_flags_agree() {
        let (ts, _, conn) = curved_n2();
        let hh = fn_bracket(conn.h(), conn.h());
        let r = conn.curvature(&ts);
        let gg = fn_bracket(conn.gamma(), conn.gamma());
        assert_eq!(hh.is_zero(), r.is_zero());
        assert_eq!(r.is_zero(), gg.is_zero());
        assert!(!r.is_zero());
        let (ts0, _, conn0) = flat_n1();
        assert!(fn_bracket(conn0.h(), conn0.h()).is_zero());
        assert!(conn0.curvature(&ts0).is_zero());
        assert!(fn_bracket(conn0.gamma(), conn0.gamma()).is_zero());
    }

    #[test]
    fn coefficients_and_annihilating_forms() {
        let (ts, _, conn) = flat_n1();
        let coeffs = conn.coefficients(&ts).unwrap();
        assert!(coeffs[0][0].is_zero());
        let (ts2, _, _, conn2) = torsion_n1();
        let coeffs2 = conn2.coefficients(&ts2).unwrap();
        assert_eq!(coeffs2[0][0], xv(2, 0).neg());
        // dy^i + Γ^i_α dx^α annihilates the horizontal frame.
        let frame = conn2.horizontal_frame(&ts2);
        for i in 0..1 {
            let mut theta = crate::calculus::ScalarForm::coordinate_differential(2, 1 + i);
            for (alpha, c) in coeffs2[i].iter().enumerate() {
                theta = theta.add(
                    &crate::calculus::ScalarForm::coordinate_differential(2, alpha)
                        .scale_poly(c),
                );
            }
            for f in &frame {
                assert!(theta.insert_field(f).is_zero());
            }
        }
        // Homogeneous connection coefficients are fiber-degree 1.
        let (ts3, _, conn3) = curved_n2();
        for row in conn3.coefficients(&ts3).unwrap() {
            for c in row {
                assert!(c.is_fiber_homogeneous(1));
            }
        }
    }

    #[test]
    fn eigenspace_characterization() {
        // Eq-8-style list exposed for reporting is all-zero on a validated
        // connection.
        let (ts, _, _, conn) = torsion_n1();
        for (name, residual) in
            projector_identity_residuals(conn.gamma(), conn.h(), conn.v(), &ts)
        {
            assert!(residual.is_zero(), "{name} residual nonzero");
        }
    }
}
