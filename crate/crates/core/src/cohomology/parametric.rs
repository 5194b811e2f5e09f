//! Fourier–Motzkin elimination with right-hand sides kept as linear forms in
//! the representative `r`, so a query only evaluates and enumerates.
//!
//! Works in `i128`; any overflow or missing bound makes the query return
//! `None` and the caller falls back to the exact rational path.

use num_bigint::BigInt;
use num_integer::Integer;

use crate::complex::RaySet;

const MAX_ROWS: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Row {
    a: Vec<i128>,
    /// Coefficients on `r_0..r_{n-1}` and a constant.
    rhs: Vec<i128>,
}

/// Integer points of `{w : -v_i·w ≤ r_i (i ∈ I), v_i·w ≤ -r_i - 1 (i ∉ I)}`.
#[derive(Clone, Debug)]
pub(super) struct Template {
    d: usize,
    /// `stages[j]`: rows in unknowns `0..=j` with a nonzero coefficient on `j`.
    stages: Vec<Vec<Row>>,
    /// Rows with no unknowns left: `0 ≤ rhs(r)`.
    constants: Vec<Row>,
}

fn gcd_all(xs: impl Iterator<Item = i128>) -> i128 {
    xs.fold(0i128, |g, x| g.gcd(&x))
}

fn normalize(mut row: Row) -> Row {
    let g = gcd_all(row.a.iter().chain(&row.rhs).copied());
    if g > 1 {
        row.a.iter_mut().for_each(|x| *x /= g);
        row.rhs.iter_mut().for_each(|x| *x /= g);
    }
    row
}

fn combine(p: &Row, q: &Row, j: usize) -> Option<Row> {
    // p.a[j] > 0, q.a[j] < 0
    let s = q.a[j].checked_neg()?;
    let t = p.a[j];
    let lin = |x: &[i128], y: &[i128]| -> Option<Vec<i128>> {
        x.iter()
            .zip(y)
            .map(|(&a, &b)| a.checked_mul(s)?.checked_add(b.checked_mul(t)?))
            .collect()
    };
    Some(normalize(Row {
        a: lin(&p.a, &q.a)?,
        rhs: lin(&p.rhs, &q.rhs)?,
    }))
}

fn to_i128(x: &BigInt) -> Option<i128> {
    i128::try_from(x).ok()
}

impl Template {
    pub fn new(rays: &[Vec<BigInt>], subset: RaySet) -> Option<Template> {
        let n = rays.len();
        let d = rays.first()?.len();
        let mut rows = Vec::with_capacity(n);
        for (i, v) in rays.iter().enumerate() {
            let v: Vec<i128> = v.iter().map(to_i128).collect::<Option<_>>()?;
            let mut rhs = vec![0i128; n + 1];
            let a = if subset.contains(i) {
                rhs[i] = 1;
                v.iter().map(|x| -x).collect()
            } else {
                rhs[i] = -1;
                rhs[n] = -1;
                v
            };
            rows.push(normalize(Row { a, rhs }));
        }
        let mut stages = vec![Vec::new(); d];
        let mut constants = Vec::new();
        for j in (0..d).rev() {
            rows.sort();
            rows.dedup();
            let mut keep = Vec::new();
            let mut pos = Vec::new();
            let mut neg = Vec::new();
            for r in rows {
                if r.a.iter().all(|&x| x == 0) {
                    constants.push(r);
                } else if r.a[j] > 0 {
                    pos.push(r);
                } else if r.a[j] < 0 {
                    neg.push(r);
                } else {
                    keep.push(r);
                }
            }
            stages[j] = pos.iter().chain(&neg).cloned().collect();
            if j > 0 {
                for p in &pos {
                    for q in &neg {
                        keep.push(combine(p, q, j)?);
                    }
                }
                if keep.len() > MAX_ROWS {
                    return None;
                }
            } else {
                constants.append(&mut keep);
            }
            rows = keep;
        }
        constants.sort();
        constants.dedup();
        Some(Template { d, stages, constants })
    }

    /// Lattice points in lexicographic order, or `None` if the fast path
    /// cannot decide.
    pub fn points(&self, r: &[BigInt]) -> Option<Vec<Vec<BigInt>>> {
        let mut x: Vec<i128> = r.iter().map(to_i128).collect::<Option<_>>()?;
        x.push(1);
        let eval = |row: &Row| -> Option<i128> {
            row.rhs
                .iter()
                .zip(&x)
                .try_fold(0i128, |acc, (&c, &v)| acc.checked_add(c.checked_mul(v)?))
        };
        for c in &self.constants {
            if eval(c)? < 0 {
                return Some(Vec::new());
            }
        }
        let rhs: Vec<Vec<i128>> = self
            .stages
            .iter()
            .map(|st| st.iter().map(eval).collect::<Option<Vec<_>>>())
            .collect::<Option<_>>()?;
        let mut out = Vec::new();
        let mut w = Vec::with_capacity(self.d);
        self.dfs(&rhs, &mut w, &mut out)?;
        Some(out)
    }

    fn dfs(&self, rhs: &[Vec<i128>], w: &mut Vec<i128>, out: &mut Vec<Vec<BigInt>>) -> Option<()> {
        let j = w.len();
        if j == self.d {
            out.push(w.iter().map(|&v| BigInt::from(v)).collect());
            return Some(());
        }
        let mut lo: Option<i128> = None;
        let mut hi: Option<i128> = None;
        for (row, &c) in self.stages[j].iter().zip(&rhs[j]) {
            let mut s = c;
            for (a, v) in row.a[..j].iter().zip(w.iter()) {
                s = s.checked_sub(a.checked_mul(*v)?)?;
            }
            let aj = row.a[j];
            if aj > 0 {
                let b = Integer::div_floor(&s, &aj);
                hi = Some(hi.map_or(b, |h| h.min(b)));
            } else {
                let b = Integer::div_ceil(&s, &aj);
                lo = Some(lo.map_or(b, |l| l.max(b)));
            }
        }
        let (lo, hi) = (lo?, hi?);
        let mut v = lo;
        while v <= hi {
            w.push(v);
            self.dfs(rhs, w, out)?;
            w.pop();
            v += 1;
        }
        Some(())
    }
}
