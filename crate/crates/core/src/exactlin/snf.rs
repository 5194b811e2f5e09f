use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// Smith normal form `U * M * V = D` together with the inverse of `U`.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub d: IntMatrix,
    /// Nonzero diagonal entries of `d`, each dividing the next.
    pub invariant_factors: Vec<BigInt>,
}

struct Reducer {
    d: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
}

impl Reducer {
    // row_dst -= q * row_src
    fn row_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.d.cols() {
            let t = &self.d[(src, j)] * q;
            self.d[(dst, j)] -= t;
        }
        for j in 0..self.u.cols() {
            let t = &self.u[(src, j)] * q;
            self.u[(dst, j)] -= t;
        }
        // inverse picks up col_src += q * col_dst
        for i in 0..self.u_inv.rows() {
            let t = &self.u_inv[(i, dst)] * q;
            self.u_inv[(i, src)] += t;
        }
    }

    // col_dst -= q * col_src
    fn col_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.d.rows() {
            let t = &self.d[(i, src)] * q;
            self.d[(i, dst)] -= t;
        }
        for i in 0..self.v.rows() {
            let t = &self.v[(i, src)] * q;
            self.v[(i, dst)] -= t;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.d.cols() {
            self.d[(r, j)] = -self.d[(r, j)].clone();
        }
        for j in 0..self.u.cols() {
            self.u[(r, j)] = -self.u[(r, j)].clone();
        }
        for i in 0..self.u_inv.rows() {
            self.u_inv[(i, r)] = -self.u_inv[(i, r)].clone();
        }
    }

    fn min_abs_in_block(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.d.rows() {
            for j in t..self.d.cols() {
                let x = &self.d[(i, j)];
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs() < self.d[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    fn min_abs_in_cross(&self, t: usize) -> (usize, usize) {
        let mut best = (t, t);
        let mut best_abs = self.d[(t, t)].abs();
        for i in t + 1..self.d.rows() {
            let a = self.d[(i, t)].abs();
            if !a.is_zero() && (best_abs.is_zero() || a < best_abs) {
                best = (i, t);
                best_abs = a;
            }
        }
        for j in t + 1..self.d.cols() {
            let a = self.d[(t, j)].abs();
            if !a.is_zero() && (best_abs.is_zero() || a < best_abs) {
                best = (t, j);
                best_abs = a;
            }
        }
        best
    }
}

/// Smith normal form by elementary row and column operations, choosing
/// the entry of minimal absolute value as pivot at every step.
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let (rows, cols) = (m.rows(), m.cols());
    let mut r = Reducer {
        d: m.clone(),
        u: IntMatrix::identity(rows),
        u_inv: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
    };
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = r.min_abs_in_block(t) else {
            break;
        };
        r.swap_rows(t, pi);
        r.swap_cols(t, pj);
        loop {
            let p = r.d[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if r.d[(i, t)].is_zero() {
                    continue;
                }
                let q = r.d[(i, t)].div_floor(&p);
                r.row_axpy(i, t, &q);
                if !r.d[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if r.d[(t, j)].is_zero() {
                    continue;
                }
                let q = r.d[(t, j)].div_floor(&p);
                r.col_axpy(j, t, &q);
                if !r.d[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                let (bi, bj) = r.min_abs_in_cross(t);
                r.swap_rows(t, bi);
                r.swap_cols(t, bj);
                continue;
            }
            let p = r.d[(t, t)].clone();
            let offender = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !r.d[(i, j)].is_multiple_of(&p))
            });
            match offender {
                Some(i) => r.row_axpy(t, i, &-BigInt::one()),
                None => break,
            }
        }
        if r.d[(t, t)].is_negative() {
            r.negate_row(t);
        }
        t += 1;
    }
    let invariant_factors = (0..rows.min(cols))
        .map(|i| r.d[(i, i)].clone())
        .filter(|x| !x.is_zero())
        .collect();
    SnfResult {
        u: r.u,
        u_inv: r.u_inv,
        v: r.v,
        d: r.d,
        invariant_factors,
    }
}

/// Row-style Hermite normal form `T * G = H` with `T` unimodular.
/// Pivots are positive; entries above a pivot are reduced into `[0, pivot)`.
pub fn row_hermite(g: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let (rows, cols) = (g.rows(), g.cols());
    let mut h = g.clone();
    let mut t = IntMatrix::identity(rows);
    let mut t_inv = IntMatrix::identity(rows);

    // h/t: row_dst -= q row_src ; t_inv: col_src += q col_dst
    let axpy = |h: &mut IntMatrix, t: &mut IntMatrix, t_inv: &mut IntMatrix, dst: usize, src: usize, q: &BigInt| {
        for j in 0..h.cols() {
            let x = &h[(src, j)] * q;
            h[(dst, j)] -= x;
        }
        for j in 0..t.cols() {
            let x = &t[(src, j)] * q;
            t[(dst, j)] -= x;
        }
        for i in 0..t_inv.rows() {
            let x = &t_inv[(i, dst)] * q;
            t_inv[(i, src)] += x;
        }
    };

    let mut pivot_row = 0;
    for c in 0..cols {
        if pivot_row == rows {
            break;
        }
        loop {
            // smallest nonzero entry at or below pivot_row in column c
            let best = (pivot_row..rows)
                .filter(|&i| !h[(i, c)].is_zero())
                .min_by(|&a, &b| h[(a, c)].abs().cmp(&h[(b, c)].abs()));
            let Some(b) = best else { break };
            h.swap_rows(pivot_row, b);
            t.swap_rows(pivot_row, b);
            t_inv.swap_cols(pivot_row, b);
            let p = h[(pivot_row, c)].clone();
            let mut clean = true;
            for i in pivot_row + 1..rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = h[(i, c)].div_floor(&p);
                axpy(&mut h, &mut t, &mut t_inv, i, pivot_row, &q);
                if !h[(i, c)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h[(pivot_row, c)].is_zero() {
            continue;
        }
        if h[(pivot_row, c)].is_negative() {
            for j in 0..cols {
                h[(pivot_row, j)] = -h[(pivot_row, j)].clone();
            }
            for j in 0..t.cols() {
                t[(pivot_row, j)] = -t[(pivot_row, j)].clone();
            }
            for i in 0..t_inv.rows() {
                t_inv[(i, pivot_row)] = -t_inv[(i, pivot_row)].clone();
            }
        }
        let p = h[(pivot_row, c)].clone();
        for i in 0..pivot_row {
            let q = h[(i, c)].div_floor(&p);
            axpy(&mut h, &mut t, &mut t_inv, i, pivot_row, &q);
        }
        pivot_row += 1;
    }
    (h, t, t_inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> SnfResult {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d);
        assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(m.rows()));
        for w in s.invariant_factors.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        s
    }

    #[test]
    fn identity_has_unit_factors() {
        let s = check(&IntMatrix::identity(2));
        assert_eq!(s.invariant_factors, vec![BigInt::from(1), BigInt::from(1)]);
    }

    #[test]
    fn single_columns() {
        let s = check(&IntMatrix::from_i64(&[vec![3], vec![-2]]));
        assert_eq!(s.invariant_factors, vec![BigInt::from(1)]);
        let s = check(&IntMatrix::from_i64(&[vec![2], vec![-2]]));
        assert_eq!(s.invariant_factors, vec![BigInt::from(2)]);
    }

    #[test]
    fn divisibility_fixup() {
        // diag(2, 3) has invariant factors (1, 6)
        let s = check(&IntMatrix::from_i64(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.invariant_factors, vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn empty_matrix() {
        let s = check(&IntMatrix::zeros(2, 0));
        assert!(s.invariant_factors.is_empty());
        let s = check(&IntMatrix::zeros(0, 3));
        assert!(s.invariant_factors.is_empty());
    }

    #[test]
    fn hermite_transform_is_unimodular() {
        let g = IntMatrix::from_i64(&[vec![0, 3, 1, -2], vec![2, 1, 1, 4]]);
        let (h, t, t_inv) = row_hermite(&g);
        assert_eq!(t.mul(&g), h);
        assert_eq!(t.mul(&t_inv), IntMatrix::identity(2));
        assert!(h[(0, 0)].is_positive());
    }
}
