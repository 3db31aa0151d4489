//! Exact linear algebra over the rationals.
//!
//! Small hand-rolled routines (the matrices here are at most `2n x 2n` with
//! `n <= 3`): row reduction for ranks and kernels, determinants for minors.
//! Everything is exact — no pivoting heuristics are needed beyond "nonzero".

use crate::ratpoly::Rational;
use num_traits::Zero;

/// Reduced row echelon form, in place. Returns the pivot column of each
/// nonzero row, in order.
pub fn rref(rows: &mut Vec<Vec<Rational>>) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..nrows {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..ncols {
                    let delta = &f * &rows[r][j];
                    rows[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == nrows {
            break;
        }
    }
    pivots
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut work = rows.to_vec();
    rref(&mut work).len()
}

/// Basis of the solution space of `A v = 0`, where the rows of `A` are given.
/// Each basis vector has one free coordinate set to 1, so the result is
/// canonical for a fixed column order.
pub fn kernel_basis(rows: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut work = rows.to_vec();
    let pivots = rref(&mut work);
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![Rational::zero(); ncols];
        v[free] = Rational::from_integer(1.into());
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -work[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Determinant by cofactor expansion along the first row (matrices here are
/// tiny, at most 6x6).
pub fn det(mat: &[Vec<Rational>]) -> Rational {
    let m = mat.len();
    if m == 0 {
        return Rational::from_integer(1.into());
    }
    assert!(mat.iter().all(|r| r.len() == m), "determinant of a non-square matrix");
    if m == 1 {
        return mat[0][0].clone();
    }
    let mut total = Rational::zero();
    for (j, entry) in mat[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<Rational>> = mat[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter_map(|(c, v)| (c != j).then(|| v.clone()))
                    .collect()
            })
            .collect();
        let cofactor = det(&minor);
        if j % 2 == 0 {
            total += entry * cofactor;
        } else {
            total -= entry * cofactor;
        }
    }
    total
}

/// Determinants of the top-left `1x1 .. mxm` blocks (used for positive
/// definiteness via Sylvester's criterion).
pub fn leading_principal_minors(mat: &[Vec<Rational>]) -> Vec<Rational> {
    (1..=mat.len())
        .map(|k| {
            let block: Vec<Vec<Rational>> =
                mat[..k].iter().map(|row| row[..k].to_vec()).collect();
            det(&block)
        })
        .collect()
}
