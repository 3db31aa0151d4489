//! Almost-complex and metric structures attached to a connection.
//!
//! Every connection carries a canonical almost-complex structure
//! `F = h∘[S,h] - L` (built from the canonical semispray `S`), which swaps
//! the horizontal and vertical bundles. Its Nijenhuis bracket `[F,F]`
//! concentrates the torsion and curvature obstructions, and its four
//! integrability conditions are equivalent instance by instance. A vertical
//! metric `g` extends to the full chart by `g_Γ(X,Y) = g(LX,LY) + g(vX,vY)`,
//! and together with `F` produces the fundamental 2-form
//! `K_Γ(X,Y) = g_Γ(FX,Y)`.
//!
//! As in the connection module, identities that hold for every valid input
//! are asserted (a violation means an engine bug), while conditions on user
//! data return errors.

use crate::calculus::{fn_bracket, fn_bracket_field, interior_vector, ScalarForm, VectorForm};
use crate::connection::LConnection;
use crate::linalg::leading_principal_minors;
use crate::ratpoly::{ratio, MultiPoly, Point, Rational};
use crate::tangent::{Semispray, TangentStructure, TangentError};
use crate::{CheckFailure, FailureList};
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HermitianError {
    #[error("vertical metric rejected:\n{0}")]
    InvalidMetric(FailureList),
    #[error(transparent)]
    Tangent(#[from] TangentError),
}

/// The almost-complex structure associated to a connection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlmostComplex {
    f: VectorForm,
}

impl AlmostComplex {
    /// Builds `F = h∘[S,h] - L` from the canonical semispray of the
    /// connection (derived from `reference`, which may be any semispray of
    /// the structure) and verifies the full identity list:
    /// `F∘L = h`, `F∘h = -L`, `F² = -I`, `L∘F = v`, `F∘v = h∘F`,
    /// `v∘F = -L`, and the chain `F + L = h∘[S,h] = h∘F = F - v∘F`.
    pub fn associated(
        conn: &LConnection,
        reference: &Semispray,
        ts: &TangentStructure,
    ) -> Self {
        let s = conn.canonical_semispray_from(reference, ts);
        let h_sh = conn.h().compose(&fn_bracket_field(s.field(), conn.h()));
        let f = h_sh.sub(ts.l());
        for (name, residual) in structure_identity_residuals(&f, conn, reference, ts) {
            assert!(
                residual.is_zero(),
                "almost-complex identity {name} violated: {residual}"
            );
        }
        AlmostComplex { f }
    }

    pub fn form(&self) -> &VectorForm {
        &self.f
    }

    pub fn matrix(&self) -> Vec<Vec<MultiPoly>> {
        self.f.matrix()
    }

    /// `L∘[C,F] - v + ½[C,Γ]`, identically zero; for a homogeneous
    /// connection this is the dilation invariance `L∘[C,F] = v`.
    pub fn dilation_residual(&self, conn: &LConnection, ts: &TangentStructure) -> VectorForm {
        let cf = fn_bracket_field(ts.liouville(), &self.f);
        ts.l()
            .compose(&cf)
            .sub(conn.v())
            .add(&conn.homogeneity_residual(ts).scale(&ratio(1, 2)))
    }
}

/// The algebraic identities that characterize the associated almost-complex
/// structure, as labelled residuals; every entry is identically zero for the
/// structure built by [`AlmostComplex::associated`].
pub fn structure_identity_residuals(
    f: &VectorForm,
    conn: &LConnection,
    reference: &Semispray,
    ts: &TangentStructure,
) -> Vec<(String, VectorForm)> {
    let s = conn.canonical_semispray_from(reference, ts);
    let l = ts.l();
    let (h, v) = (conn.h(), conn.v());
    let h_sh = h.compose(&fn_bracket_field(s.field(), h));
    let id = VectorForm::identity(ts.num_vars());
    vec![
        ("F∘L = h".to_string(), f.compose(l).sub(h)),
        ("F∘h = -L".to_string(), f.compose(h).add(l)),
        ("F∘F = -I".to_string(), f.compose(f).add(&id)),
        ("L∘F = v".to_string(), l.compose(f).sub(v)),
        ("F∘v = h∘F".to_string(), f.compose(v).sub(&h.compose(f))),
        ("v∘F = -L".to_string(), v.compose(f).add(l)),
        ("F + L = h∘[S,h]".to_string(), f.add(l).sub(&h_sh)),
        ("h∘[S,h] = h∘F".to_string(), h_sh.sub(&h.compose(f))),
        (
            "h∘F = F - v∘F".to_string(),
            h.compose(f).sub(&f.sub(&v.compose(f))),
        ),
    ]
}

/// Independent construction of the same structure for the canonical chart:
/// solve `F(L∂x^a) = h∂x^a` and `F(h∂x^a) = -L∂x^a` directly through the
/// vertical-to-horizontal splitting `σ(∂y^i) = ∂x^i`, giving
/// `F' = h∘σ∘v - L`. Uniqueness makes `F' = F`.
pub fn splitting_construction(
    conn: &LConnection,
    ts: &TangentStructure,
) -> Result<VectorForm, HermitianError> {
    if !ts.is_canonical() {
        return Err(HermitianError::Tangent(TangentError::RequiresCanonical));
    }
    let nv = ts.num_vars();
    let n = ts.n();
    let mut sigma = vec![vec![MultiPoly::zero(nv); nv]; nv];
    for i in 0..n {
        sigma[i][n + i] = MultiPoly::one(nv);
    }
    let sigma = VectorForm::from_matrix(&sigma);
    Ok(conn.h().compose(&sigma.compose(conn.v())).sub(ts.l()))
}

/// Pullback of a vector 2-form along an endomorphism:
/// `(E*Φ)(X,Y) = Φ(EX,EY)` in the same output components.
pub fn pullback_two_form(phi: &VectorForm, endo: &VectorForm) -> VectorForm {
    assert_eq!(phi.degree(), 2, "pullback helper is for 2-forms");
    let nv = phi.num_vars();
    let em = endo.matrix();
    let row_form = |i: usize| {
        let coeffs = (0..nv)
            .filter(|a| !em[i][*a].is_zero())
            .map(|a| (vec![a as u8], em[i][a].clone()))
            .collect::<Vec<_>>();
        ScalarForm::from_coefficients(nv, 1, coeffs)
    };
    let rows: Vec<ScalarForm> = (0..nv).map(row_form).collect();
    let components = phi
        .components()
        .iter()
        .map(|comp| {
            let mut acc = ScalarForm::zero(nv, 2);
            for (tuple, coeff) in comp.terms() {
                let wedge = rows[tuple[0] as usize].wedge(&rows[tuple[1] as usize]);
                acc = acc.add(&wedge.scale_poly(coeff));
            }
            acc
        })
        .collect();
    VectorForm::from_components(components)
}

/// `h★Φ` for a vector 2-form: `(h★Φ)(X,Y) = ½·Φ(hX,hY)`.
pub fn horizontal_half_pullback(phi: &VectorForm, h: &VectorForm) -> VectorForm {
    pullback_two_form(phi, h).scale(&ratio(1, 2))
}

/// The obstruction identities tying `[F,F]` to torsion and curvature,
/// returned as labelled residuals:
///
/// * `h★[F,F] - F∘T - R` — identically zero.
/// * `[L,F] - i_F T + F∘T + R` — identically zero.
/// * `[h,F] + i_F R + T` — this classical form equals `F∘R`, so it
///   vanishes only on flat instances.
/// * `[h,F] + i_F R + T - F∘R` — the completed horizontal identity,
///   identically zero.
pub fn obstruction_residuals(
    f: &AlmostComplex,
    conn: &LConnection,
    s: &Semispray,
    ts: &TangentStructure,
) -> Vec<(String, VectorForm)> {
    let t = conn.torsion(s, ts).torsion;
    let r = conn.curvature(ts);
    let ff = fn_bracket(f.form(), f.form());
    let f_t = f.form().compose(&t);
    let a = horizontal_half_pullback(&ff, conn.h()).sub(&f_t).sub(&r);
    let b = fn_bracket(ts.l(), f.form())
        .sub(&interior_vector(f.form(), &t))
        .add(&f_t)
        .add(&r);
    let c_plain = fn_bracket(conn.h(), f.form())
        .add(&interior_vector(f.form(), &r))
        .add(&t);
    let c_completed = c_plain.sub(&f.form().compose(&r));
    vec![
        ("h★[F,F] - F∘T - R".to_string(), a),
        ("[L,F] - i_F T + F∘T + R".to_string(), b),
        ("[h,F] + i_F R + T".to_string(), c_plain),
        ("[h,F] + i_F R + T - F∘R".to_string(), c_completed),
    ]
}

/// For torsion-free connections the curvature has four closed expressions;
/// returns each labelled residual against `R = -½[h,h]`:
/// `h★[F,F]`, `-[L,F]`, `-[L,h∘F]`, `-[L,h∘[S,h]]`.
pub fn curvature_expression_residuals(
    f: &AlmostComplex,
    conn: &LConnection,
    s: &Semispray,
    ts: &TangentStructure,
) -> Vec<(String, VectorForm)> {
    let r = conn.curvature(ts);
    let l = ts.l();
    let ff = fn_bracket(f.form(), f.form());
    let hf = conn.h().compose(f.form());
    let h_sh = conn
        .h()
        .compose(&fn_bracket_field(conn.canonical_semispray_from(s, ts).field(), conn.h()));
    let exprs: Vec<(&str, VectorForm)> = vec![
        ("h★[F,F]", horizontal_half_pullback(&ff, conn.h())),
        ("-[L,F]", fn_bracket(l, f.form()).neg()),
        ("-[L,h∘F]", fn_bracket(l, &hf).neg()),
        ("-[L,h∘[S,h]]", fn_bracket(l, &h_sh).neg()),
    ];
    exprs
        .into_iter()
        .map(|(name, expr)| (name.to_string(), expr.sub(&r)))
        .collect()
}

/// The four equivalent integrability conditions of the associated structure,
/// evaluated on one instance. Their agreement is asserted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntegrabilityFlags {
    /// `[F,F] ≡ 0`.
    pub nijenhuis_vanishes: bool,
    /// `T ≡ 0` and `R ≡ 0`.
    pub flat_and_torsion_free: bool,
    /// `[L,F] ≡ 0`.
    pub structure_bracket_vanishes: bool,
    /// `[h,F] ≡ 0`.
    pub horizontal_bracket_vanishes: bool,
}

impl IntegrabilityFlags {
    pub fn integrable(&self) -> bool {
        self.nijenhuis_vanishes
    }

    /// Whether all four conditions give the same verdict.
    pub fn agree(&self) -> bool {
        let all = [
            self.nijenhuis_vanishes,
            self.flat_and_torsion_free,
            self.structure_bracket_vanishes,
            self.horizontal_bracket_vanishes,
        ];
        all.iter().all(|b| *b == all[0])
    }
}

pub fn integrability_flags(
    f: &AlmostComplex,
    conn: &LConnection,
    s: &Semispray,
    ts: &TangentStructure,
) -> IntegrabilityFlags {
    let data = conn.torsion(s, ts);
    let r = conn.curvature(ts);
    let flags = IntegrabilityFlags {
        nijenhuis_vanishes: fn_bracket(f.form(), f.form()).is_zero(),
        flat_and_torsion_free: data.torsion.is_zero() && r.is_zero(),
        structure_bracket_vanishes: fn_bracket(ts.l(), f.form()).is_zero(),
        horizontal_bracket_vanishes: fn_bracket(conn.h(), f.form()).is_zero(),
    };
    assert!(
        flags.agree(),
        "the four integrability conditions must agree on every instance: {flags:?}"
    );
    flags
}

/// A symmetric fiber metric given by its matrix in the vertical coordinate
/// frame, positive-definite at every declared sample point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerticalMetric {
    entries: Vec<Vec<MultiPoly>>,
}

impl VerticalMetric {
    pub fn validate(
        entries: Vec<Vec<MultiPoly>>,
        ts: &TangentStructure,
        points: &[Point],
    ) -> Result<Self, HermitianError> {
        let n = ts.n();
        let mut failures = Vec::new();
        if entries.len() != n || entries.iter().any(|row| row.len() != n) {
            failures.push(CheckFailure {
                name: "metric shape".to_string(),
                residual: format!("want {n}×{n}"),
            });
            return Err(HermitianError::InvalidMetric(FailureList(failures)));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let diff = entries[i][j].sub(&entries[j][i]);
                if !diff.is_zero() {
                    failures.push(CheckFailure {
                        name: format!("metric symmetry ({},{})", i + 1, j + 1),
                        residual: diff.to_string(),
                    });
                }
            }
        }
        if failures.is_empty() {
            for z in points {
                let value: Vec<Vec<Rational>> = entries
                    .iter()
                    .map(|row| row.iter().map(|p| p.eval(z)).collect())
                    .collect();
                for (k, minor) in leading_principal_minors(&value).iter().enumerate() {
                    if minor <= &Rational::zero() {
                        failures.push(CheckFailure {
                            name: format!(
                                "metric positive definiteness at ({})",
                                z.iter().map(Rational::to_string).collect::<Vec<_>>().join(", ")
                            ),
                            residual: format!("leading minor {} = {}", k + 1, minor),
                        });
                        break;
                    }
                }
            }
        }
        if failures.is_empty() {
            Ok(VerticalMetric { entries })
        } else {
            Err(HermitianError::InvalidMetric(FailureList(failures)))
        }
    }

    pub fn identity(ts: &TangentStructure) -> Self {
        let n = ts.n();
        let nv = ts.num_vars();
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { MultiPoly::one(nv) } else { MultiPoly::zero(nv) })
                    .collect()
            })
            .collect();
        VerticalMetric { entries }
    }

    pub fn entries(&self) -> &[Vec<MultiPoly>] {
        &self.entries
    }
}

/// The metric extended to the whole chart, as its matrix on the coordinate
/// frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedMetric {
    matrix: Vec<Vec<MultiPoly>>,
}

impl ExtendedMetric {
    pub fn matrix(&self) -> &[Vec<MultiPoly>] {
        &self.matrix
    }

    pub fn value(&self, a: usize, b: usize) -> &MultiPoly {
        &self.matrix[a][b]
    }
}

/// Extends the vertical metric by `g_Γ(X,Y) = g(LX,LY) + g(vX,vY)` and
/// verifies that the horizontal/vertical split is orthogonal and that the
/// horizontal block reproduces `g(LX,LY)`.
pub fn extend_metric(
    g: &VerticalMetric,
    conn: &LConnection,
    ts: &TangentStructure,
) -> ExtendedMetric {
    let nv = ts.num_vars();
    let n = ts.n();
    // Quadratic form of g on the chart: pairs the fiber components only.
    let mut q = vec![vec![MultiPoly::zero(nv); nv]; nv];
    for i in 0..n {
        for j in 0..n {
            q[n + i][n + j] = g.entries()[i][j].clone();
        }
    }
    let lm = ts.l().matrix();
    let vm = conn.v().matrix();
    let pull = |a_mat: &[Vec<MultiPoly>]| {
        mat_mul(&mat_transpose(a_mat), &mat_mul(&q, a_mat))
    };
    let gm = ExtendedMetric {
        matrix: mat_add(&pull(&lm), &pull(&vm)),
    };
    for (name, residual) in extension_invariant_residuals(&gm, g, conn, ts) {
        assert!(
            mat_is_zero(&residual),
            "extended metric invariant {name} violated"
        );
    }
    gm
}

/// The structural invariants of the extended metric as labelled matrix
/// residuals: symmetry, orthogonality of the horizontal and vertical
/// distributions, and agreement of the horizontal block with `g(LX,LY)`.
pub fn extension_invariant_residuals(
    gm: &ExtendedMetric,
    g: &VerticalMetric,
    conn: &LConnection,
    ts: &TangentStructure,
) -> Vec<(String, Vec<Vec<MultiPoly>>)> {
    let nv = ts.num_vars();
    let n = ts.n();
    let mut q = vec![vec![MultiPoly::zero(nv); nv]; nv];
    for i in 0..n {
        for j in 0..n {
            q[n + i][n + j] = g.entries()[i][j].clone();
        }
    }
    let m = gm.matrix();
    let hm = conn.h().matrix();
    let vm = conn.v().matrix();
    let lm = ts.l().matrix();
    let symmetry = mat_sub(m, &mat_transpose(m));
    let mixed = mat_mul(&mat_transpose(&hm), &mat_mul(m, &vm));
    let horizontal_block = mat_sub(
        &mat_mul(&mat_transpose(&hm), &mat_mul(m, &hm)),
        &mat_mul(&mat_transpose(&lm), &mat_mul(&q, &lm)),
    );
    vec![
        ("g_Γ symmetric".to_string(), symmetry),
        ("g_Γ(h·,v·) = 0".to_string(), mixed),
        ("g_Γ(h·,h·) = g(L·,L·)".to_string(), horizontal_block),
    ]
}

/// Lists the nonzero entries of a polynomial matrix as `(row, col, value)`.
pub fn matrix_residual_entries(m: &[Vec<MultiPoly>]) -> Vec<(usize, usize, MultiPoly)> {
    let mut out = Vec::new();
    for (i, row) in m.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            if !entry.is_zero() {
                out.push((i, j, entry.clone()));
            }
        }
    }
    out
}

/// The fundamental 2-form `K_Γ(X,Y) = g_Γ(FX,Y)`, cross-checked against
/// `g_Γ(X,LY) - g_Γ(LX,Y)`, antisymmetry, metric invariance
/// `g_Γ(FX,FY) = g_Γ(X,Y)`, and `g_Γ(FX,Y) + g_Γ(X,FY) = 0`.
pub fn kahler_form(
    gm: &ExtendedMetric,
    f: &AlmostComplex,
    ts: &TangentStructure,
) -> ScalarForm {
    for (name, residual) in fundamental_form_residuals(gm, f, ts) {
        assert!(
            mat_is_zero(&residual),
            "fundamental form invariant {name} violated"
        );
    }
    let nv = ts.num_vars();
    let k = fundamental_form_matrix(gm, f);
    let mut coeffs = Vec::new();
    for a in 0..nv {
        for b in (a + 1)..nv {
            if !k[a][b].is_zero() {
                coeffs.push((vec![a as u8, b as u8], k[a][b].clone()));
            }
        }
    }
    ScalarForm::from_coefficients(nv, 2, coeffs)
}

/// `K(a,b) = g_Γ(F∂a, ∂b)` as a matrix of polynomials.
fn fundamental_form_matrix(gm: &ExtendedMetric, f: &AlmostComplex) -> Vec<Vec<MultiPoly>> {
    mat_mul(&mat_transpose(&f.form().matrix()), gm.matrix())
}

/// The invariants of the fundamental 2-form as labelled matrix residuals:
/// agreement of `g_Γ(FX,Y)` with `g_Γ(X,LY) - g_Γ(LX,Y)`, antisymmetry,
/// metric invariance `g_Γ(FX,FY) = g_Γ(X,Y)`, and the vanishing contraction
/// `g_Γ(FX,Y) + g_Γ(X,FY) = 0`.
pub fn fundamental_form_residuals(
    gm: &ExtendedMetric,
    f: &AlmostComplex,
    ts: &TangentStructure,
) -> Vec<(String, Vec<Vec<MultiPoly>>)> {
    let m = gm.matrix();
    let fm = f.form().matrix();
    let lm = ts.l().matrix();
    let k = fundamental_form_matrix(gm, f);
    // g_Γ(X,LY) - g_Γ(LX,Y) entrywise: M·L - Lᵀ·M.
    let alt = mat_sub(&mat_mul(m, &lm), &mat_mul(&mat_transpose(&lm), m));
    let ft_m = mat_mul(&mat_transpose(&fm), m);
    vec![
        ("K_Γ(X,Y) = g_Γ(X,LY) - g_Γ(LX,Y)".to_string(), mat_sub(&k, &alt)),
        ("K_Γ antisymmetric".to_string(), mat_add(&k, &mat_transpose(&k))),
        (
            "g_Γ(F·,F·) = g_Γ".to_string(),
            mat_sub(&mat_mul(&ft_m, &fm), m),
        ),
        (
            "g_Γ(F·,·) + g_Γ(·,F·) = 0".to_string(),
            mat_add(&ft_m, &mat_mul(m, &fm)),
        ),
    ]
}

fn mat_mul(a: &[Vec<MultiPoly>], b: &[Vec<MultiPoly>]) -> Vec<Vec<MultiPoly>> {
    let n = a.len();
    let nv = a[0][0].num_vars();
    let mut out = vec![vec![MultiPoly::zero(nv); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] = out[i][j].add(&a[i][k].mul(&b[k][j]));
                }
            }
        }
    }
    out
}

fn mat_transpose(a: &[Vec<MultiPoly>]) -> Vec<Vec<MultiPoly>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].clone()).collect()).collect()
}

fn mat_add(a: &[Vec<MultiPoly>], b: &[Vec<MultiPoly>]) -> Vec<Vec<MultiPoly>> {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x.add(y)).collect())
        .collect()
}

fn mat_sub(a: &[Vec<MultiPoly>], b: &[Vec<MultiPoly>]) -> Vec<Vec<MultiPoly>> {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x.sub(y)).collect())
        .collect()
}

fn mat_is_zero(a: &[Vec<MultiPoly>]) -> bool {
    a.iter().all(|row| row.iter().all(MultiPoly::is_zero))
}
