use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::RatMatrix;

/// Reduced row echelon form. Pivot columns are taken left to right and the
/// pivot row is the first remaining row with a nonzero entry.
pub(crate) struct Rref {
    pub m: RatMatrix,
    pub pivots: Vec<usize>,
}

pub(crate) fn rref(a: &RatMatrix) -> Rref {
    let mut m = a.clone();
    let (rows, cols) = (m.rows(), m.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        m.swap_rows(r, p);
        let inv = m[(r, c)].recip();
        for j in c..cols {
            m[(r, j)] = &m[(r, j)] * &inv;
        }
        for i in 0..rows {
            if i == r || m[(i, c)].is_zero() {
                continue;
            }
            let f = m[(i, c)].clone();
            for j in c..cols {
                let t = &f * &m[(r, j)];
                m[(i, j)] -= t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref { m, pivots }
}

/// Exact rank over the rationals.
pub fn rational_rank(a: &RatMatrix) -> usize {
    rref(a).pivots.len()
}

/// Solves `a x = b` exactly. Returns `None` when inconsistent; free
/// variables are set to zero, so the output has support on the
/// lexicographically first pivot columns.
pub fn solve_rational(a: &RatMatrix, b: &[BigRational]) -> Option<Vec<BigRational>> {
    assert_eq!(a.rows(), b.len(), "right-hand side length mismatch");
    let cols = a.cols();
    let mut aug = RatMatrix::zeros(a.rows(), cols + 1);
    for i in 0..a.rows() {
        for j in 0..cols {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, cols)] = b[i].clone();
    }
    let Rref { m, pivots } = rref(&aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[(r, cols)].clone();
    }
    Some(x)
}

/// Basis of the right null space, one vector per free column.
pub fn nullspace(a: &RatMatrix) -> Vec<Vec<BigRational>> {
    let Rref { m, pivots } = rref(a);
    let cols = a.cols();
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![BigRational::zero(); cols];
        v[free] = BigRational::one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = -m[(r, free)].clone();
        }
        basis.push(v);
    }
    basis
}
