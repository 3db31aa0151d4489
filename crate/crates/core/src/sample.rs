//! Sample points and seeded random geometry for property checks.
//!
//! Identity checks in this workspace are symbolic; points enter only where a
//! rank or a sign has to be decided (structure rank, nullity, involutivity,
//! metric definiteness). The deterministic grid uses the coordinate values
//! {0, 1, −1, 1/2}; a seeded ChaCha stream supplies extra rational points and
//! random polynomial data, so a fixed seed reproduces a run bit for bit.

use crate::calculus::{ScalarForm, VectorField, VectorForm};
use crate::ratpoly::{rat, ratio, MultiPoly, Point, Rational};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn grid_values() -> [Rational; 4] {
    [rat(0), rat(1), rat(-1), ratio(1, 2)]
}

/// Deterministic schedule of sample points for a `num_vars`-coordinate chart.
/// Small charts get the full {0,1,−1,1/2} grid; six-coordinate charts are
/// restricted to points with at most two nonzero coordinates (154 points) to
/// keep pointwise checks fast.
pub fn grid_points(num_vars: usize) -> Vec<Point> {
    let vals = grid_values();
    let mut out = Vec::new();
    if num_vars <= 4 {
        let mut idx = vec![0usize; num_vars];
        loop {
            out.push(idx.iter().map(|&i| vals[i].clone()).collect());
            let mut pos = num_vars;
            while pos > 0 {
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < vals.len() {
                    break;
                }
                idx[pos] = 0;
                if pos == 0 {
                    return out;
                }
            }
        }
    }
    // Zero point, then one or two nonzero coordinates.
    out.push(vec![rat(0); num_vars]);
    for a in 0..num_vars {
        for va in &vals[1..] {
            let mut p = vec![rat(0); num_vars];
            p[a] = va.clone();
            out.push(p);
        }
    }
    for a in 0..num_vars {
        for b in (a + 1)..num_vars {
            for va in &vals[1..] {
                for vb in &vals[1..] {
                    let mut p = vec![rat(0); num_vars];
                    p[a] = va.clone();
                    p[b] = vb.clone();
                    out.push(p);
                }
            }
        }
    }
    out
}

/// Seeded source of random rational geometry.
pub struct Sampler {
    rng: ChaCha20Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha20Rng::seed_from_u64(seed) }
    }

    /// A rational with numerator in [−6, 6] and denominator in [1, 4].
    pub fn rational(&mut self) -> Rational {
        let n = self.rng.gen_range(-6i64..=6);
        let d = self.rng.gen_range(1i64..=4);
        ratio(n, d)
    }

    pub fn point(&mut self, num_vars: usize) -> Point {
        (0..num_vars).map(|_| self.rational()).collect()
    }

    /// Random polynomial with up to `max_terms` monomials of total degree at
    /// most `max_degree`.
    pub fn poly(&mut self, num_vars: usize, max_degree: u16, max_terms: usize) -> MultiPoly {
        let nterms = self.rng.gen_range(0..=max_terms);
        let mut terms = Vec::with_capacity(nterms);
        for _ in 0..nterms {
            let mut exps = vec![0u16; num_vars];
            let mut budget = max_degree;
            for e in exps.iter_mut() {
                let step = self.rng.gen_range(0..=budget.min(2));
                *e = step;
                budget -= step;
            }
            terms.push((exps, self.rational()));
        }
        MultiPoly::from_terms(num_vars, terms)
    }

    pub fn vector_field(&mut self, num_vars: usize, max_degree: u16) -> VectorField {
        VectorField::from_components(
            (0..num_vars).map(|_| self.poly(num_vars, max_degree, 3)).collect(),
        )
    }

    pub fn scalar_form(&mut self, num_vars: usize, degree: usize, max_degree: u16) -> ScalarForm {
        let tuples = crate::calculus::increasing_tuples(num_vars, degree);
        let picks = self.rng.gen_range(0..=2.min(tuples.len()));
        let mut coeffs = Vec::new();
        for _ in 0..picks {
            let t = tuples[self.rng.gen_range(0..tuples.len())].clone();
            coeffs.push((t, self.poly(num_vars, max_degree, 2)));
        }
        ScalarForm::from_coefficients(num_vars, degree, coeffs)
    }

    pub fn vector_form(&mut self, num_vars: usize, degree: usize, max_degree: u16) -> VectorForm {
        VectorForm::from_components(
            (0..num_vars).map(|_| self.scalar_form(num_vars, degree, max_degree)).collect(),
        )
    }

    /// Random vertical components `G^i` for a semispray on an `n`-dimensional
    /// base (polynomials in all 2n chart variables).
    pub fn semispray_vertical(&mut self, n: usize, max_degree: u16) -> Vec<MultiPoly> {
        (0..n).map(|_| self.poly(2 * n, max_degree, 3)).collect()
    }

    /// Constant symmetric positive-definite n×n matrix `I + Bᵗ·B`, entered as
    /// polynomials on the 2n-coordinate chart.
    pub fn positive_definite_metric(&mut self, n: usize) -> Vec<Vec<MultiPoly>> {
        let b: Vec<Vec<Rational>> =
            (0..n).map(|_| (0..n).map(|_| self.rational()).collect()).collect();
        let mut g = vec![vec![MultiPoly::zero(2 * n); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut entry = if i == j { rat(1) } else { rat(0) };
                for (k, row) in b.iter().enumerate() {
                    let _ = k;
                    entry += &row[i] * &row[j];
                }
                g[i][j] = MultiPoly::constant(2 * n, entry);
            }
        }
        g
    }
}
