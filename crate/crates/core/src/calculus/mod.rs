//! Differential calculus on vector-valued forms.
//!
//! The bracket of vector forms is computed two independent ways:
//!
//! 1. [`fn_bracket`] — the production algorithm. The Lie derivative along a
//!    vector `k`-form determines the bracket through its action on coordinate
//!    functions, which collapses to the componentwise formula
//!    `[K,L]^c = lie(K, L^c) - (-1)^{kl} lie(L, K^c)` because the Lie
//!    derivative of the coordinate `z^c` along any vector form `W` is exactly
//!    the component form `W^c`.
//! 2. [`fn_bracket_0l_frame`] / [`fn_bracket_11_frame`] — frame-based
//!    evaluations from the classical pointwise formulas, used as cross-check
//!    oracles for the degree combinations where those formulas are standard.
//!
//! Both routes are exercised against each other in tests and in the verifier.

pub mod scalar;
pub mod vector;

pub use scalar::ScalarForm;
pub use vector::{VectorField, VectorForm};

use crate::ratpoly::{rat, MultiPoly};

/// All strictly increasing index tuples of the given length.
pub fn increasing_tuples(num_vars: usize, len: usize) -> Vec<Vec<u8>> {
    fn rec(start: usize, num_vars: usize, len: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for a in start..num_vars {
            cur.push(a as u8);
            rec(a + 1, num_vars, len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, num_vars, len, &mut Vec::new(), &mut out);
    out
}

/// Interior product `i_K ω` of a vector `k`-form (`k >= 1`) with a scalar
/// `p`-form, of degree `p + k - 1`. For `p = 0` the result is zero. Computed
/// as `Σ_e K^e ∧ (i_{∂_e} ω)`, which in the determinant convention agrees with
/// the shuffle-sum definition while staying division-free.
pub fn interior_product(k: &VectorForm, omega: &ScalarForm) -> ScalarForm {
    assert!(k.degree() >= 1, "interior product needs a form of degree >= 1");
    assert_eq!(k.num_vars(), omega.num_vars());
    let out_degree = omega.degree() + k.degree() - 1;
    let mut out = ScalarForm::zero(omega.num_vars(), out_degree);
    if omega.degree() == 0 {
        return out;
    }
    for e in 0..omega.num_vars() {
        let ke = k.component(e);
        if ke.is_zero() {
            continue;
        }
        out = out.add(&ke.wedge(&omega.insert_coord(e)));
    }
    out
}

/// Interior product acting on a vector form, componentwise on its scalar part.
pub fn interior_vector(k: &VectorForm, w: &VectorForm) -> VectorForm {
    VectorForm::from_components(
        w.components().iter().map(|c| interior_product(k, c)).collect(),
    )
}

/// Lie derivative of a scalar form along a vector `k`-form:
/// `lie(K, ω) = i_K dω + (-1)^k d(i_K ω)`. For `k = 0` this is Cartan's magic
/// formula along the wrapped field; for `k = 0, p = 0` it is plain derivation.
pub fn lie_scalar(k: &VectorForm, omega: &ScalarForm) -> ScalarForm {
    assert_eq!(k.num_vars(), omega.num_vars());
    if k.degree() == 0 {
        let x = k.to_field();
        if omega.degree() == 0 {
            return ScalarForm::function(x.apply(&omega.as_function()));
        }
        return omega.exterior_d().insert_field(&x).add(&omega.insert_field(&x).exterior_d());
    }
    let first = interior_product(k, &omega.exterior_d());
    let second = interior_product(k, omega).exterior_d();
    if k.degree() % 2 == 0 {
        first.add(&second)
    } else {
        first.sub(&second)
    }
}

/// Lie derivative along a plain vector field.
pub fn lie_by_field(x: &VectorField, omega: &ScalarForm) -> ScalarForm {
    lie_scalar(&VectorForm::from_field(x), omega)
}

/// Maximum supported degree of a bracket output. High enough for every
/// object the verifier builds (curvature conjugates reach degree 3).
pub const BRACKET_DEGREE_CAP: usize = 4;

/// Frölicher–Nijenhuis bracket of a vector `k`-form and a vector `l`-form,
/// a vector `(k+l)`-form. Panics if `k + l` exceeds [`BRACKET_DEGREE_CAP`].
pub fn fn_bracket(k: &VectorForm, l: &VectorForm) -> VectorForm {
    assert_eq!(k.num_vars(), l.num_vars());
    let (dk, dl) = (k.degree(), l.degree());
    assert!(
        dk + dl <= BRACKET_DEGREE_CAP,
        "bracket degree {} + {} exceeds the supported cap {}",
        dk,
        dl,
        BRACKET_DEGREE_CAP
    );
    let flip = (dk * dl) % 2 == 1;
    let components = (0..k.num_vars())
        .map(|c| {
            let a = lie_scalar(k, l.component(c));
            let b = lie_scalar(l, k.component(c));
            if flip {
                a.add(&b)
            } else {
                a.sub(&b)
            }
        })
        .collect();
    VectorForm::from_components(components)
}

/// Bracket of a plain field with a vector form, via [`fn_bracket`].
pub fn fn_bracket_field(x: &VectorField, k: &VectorForm) -> VectorForm {
    fn_bracket(&VectorForm::from_field(x), k)
}

fn diff_field(x: &VectorField, a: usize) -> VectorField {
    VectorField::from_components(x.components().iter().map(|p| p.diff(a)).collect())
}

/// Frame oracle for the bracket of a field `X` with a vector `l`-form
/// (`l >= 1`): on coordinate frames,
/// `[X,K](∂_{a_1},..,∂_{a_l}) = [X, K(∂_A)] - Σ_i K(.., [X,∂_{a_i}], ..)`
/// with `[X, ∂_a] = -Σ_c (∂_a X^c) ∂_c`.
pub fn fn_bracket_0l_frame(x: &VectorField, k: &VectorForm) -> VectorForm {
    let nv = x.num_vars();
    let l = k.degree();
    assert!(l >= 1, "frame oracle needs a form of degree >= 1");
    assert_eq!(nv, k.num_vars());
    let coords: Vec<VectorField> = (0..nv).map(|a| VectorField::coordinate(nv, a)).collect();
    let mut per_component: Vec<Vec<(Vec<u8>, MultiPoly)>> = vec![Vec::new(); nv];
    for tuple in increasing_tuples(nv, l) {
        let frame: Vec<&VectorField> = tuple.iter().map(|&a| &coords[a as usize]).collect();
        let mut value = x.lie_bracket(&k.eval_fields(&frame));
        for (slot, &ai) in tuple.iter().enumerate() {
            for c in 0..nv {
                let coeff = x.component(c).diff(ai as usize).neg();
                if coeff.is_zero() {
                    continue;
                }
                let mut args = frame.clone();
                args[slot] = &coords[c];
                value = value.sub(&k.eval_fields(&args).scale_poly(&coeff));
            }
        }
        for (c, comp) in per_component.iter_mut().enumerate() {
            comp.push((tuple.clone(), value.component(c).clone()));
        }
    }
    VectorForm::from_components(
        per_component
            .into_iter()
            .map(|terms| ScalarForm::from_coefficients(nv, l, terms))
            .collect(),
    )
}

/// Frame oracle for the bracket of two vector 1-forms: on coordinate frames
/// (`[∂_a, ∂_b] = 0`),
/// `[K,L](∂_a,∂_b) = [K∂_a, L∂_b] + [L∂_a, K∂_b]
///                   - K([L∂_a, ∂_b] + [∂_a, L∂_b]) - L([K∂_a, ∂_b] + [∂_a, K∂_b])`.
pub fn fn_bracket_11_frame(k: &VectorForm, l: &VectorForm) -> VectorForm {
    assert_eq!(k.degree(), 1);
    assert_eq!(l.degree(), 1);
    let nv = k.num_vars();
    assert_eq!(nv, l.num_vars());
    let coords: Vec<VectorField> = (0..nv).map(|a| VectorField::coordinate(nv, a)).collect();
    let mut per_component: Vec<Vec<(Vec<u8>, MultiPoly)>> = vec![Vec::new(); nv];
    for tuple in increasing_tuples(nv, 2) {
        let (a, b) = (tuple[0] as usize, tuple[1] as usize);
        let ka = k.apply_field(&coords[a]);
        let kb = k.apply_field(&coords[b]);
        let la = l.apply_field(&coords[a]);
        let lb = l.apply_field(&coords[b]);
        // [L∂_a, ∂_b] + [∂_a, L∂_b] = ∂_a(L∂_b) - ∂_b(L∂_a), and the same for K.
        let inner_l = diff_field(&lb, a).sub(&diff_field(&la, b));
        let inner_k = diff_field(&kb, a).sub(&diff_field(&ka, b));
        let value = ka
            .lie_bracket(&lb)
            .add(&la.lie_bracket(&kb))
            .sub(&k.apply_field(&inner_l))
            .sub(&l.apply_field(&inner_k));
        for (c, comp) in per_component.iter_mut().enumerate() {
            comp.push((tuple.clone(), value.component(c).clone()));
        }
    }
    VectorForm::from_components(
        per_component
            .into_iter()
            .map(|terms| ScalarForm::from_coefficients(nv, 2, terms))
            .collect(),
    )
}

/// Residual of scalar homogeneity of degree `r` along the field `C`:
/// zero iff `lie(C, ω) = r·ω`.
pub fn homogeneity_residual_scalar(
    omega: &ScalarForm,
    r: i64,
    c_field: &VectorField,
) -> ScalarForm {
    lie_by_field(c_field, omega).sub(&omega.scale(&rat(r)))
}

/// Residual of vector homogeneity of degree `r` along the field `C`:
/// zero iff `[C, K] = (r-1)·K`.
pub fn homogeneity_residual_vector(
    k: &VectorForm,
    r: i64,
    c_field: &VectorField,
) -> VectorForm {
    fn_bracket_field(c_field, k).sub(&k.scale(&rat(r - 1)))
}

/// Cyclic graded Jacobi residual
/// `(-1)^{k1·k3}[K1,[K2,K3]] + (-1)^{k2·k1}[K2,[K3,K1]] + (-1)^{k3·k2}[K3,[K1,K2]]`,
/// identically zero for the bracket.
pub fn jacobi_residual(k1: &VectorForm, k2: &VectorForm, k3: &VectorForm) -> VectorForm {
    let (d1, d2, d3) = (k1.degree(), k2.degree(), k3.degree());
    let sign = |e: usize, term: VectorForm| if e % 2 == 1 { term.neg() } else { term };
    let t1 = sign(d1 * d3, fn_bracket(k1, &fn_bracket(k2, k3)));
    let t2 = sign(d2 * d1, fn_bracket(k2, &fn_bracket(k3, k1)));
    let t3 = sign(d3 * d2, fn_bracket(k3, &fn_bracket(k1, k2)));
    t1.add(&t2).add(&t3)
}

/// Residual of graded antisymmetry: `[K,L] + (-1)^{kl}[L,K]`, identically zero.
pub fn antisymmetry_residual(k: &VectorForm, l: &VectorForm) -> VectorForm {
    let kl = fn_bracket(k, l);
    let lk = fn_bracket(l, k);
    if (k.degree() * l.degree()) % 2 == 1 {
        kl.sub(&lk)
    } else {
        kl.add(&lk)
    }
}
