//! Fourier–Motzkin elimination over the integers.
//!
//! Rows are `a·x ≤ c` or `a·x < c` with integer data, scaled from rational
//! input. Each derived row carries the set of input rows it combines; after
//! `k` eliminations a row combining more than `k + 1` inputs is implied by
//! the others and is dropped (Kohler's rule).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactlin::Rat;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct History(Vec<u64>);

impl History {
    fn single(i: usize, n: usize) -> Self {
        let mut v = vec![0u64; n.div_ceil(64).max(1)];
        v[i / 64] |= 1 << (i % 64);
        History(v)
    }

    fn union(&self, other: &Self) -> Self {
        History(self.0.iter().zip(&other.0).map(|(a, b)| a | b).collect())
    }

    fn is_subset(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Row {
    pub a: Vec<BigInt>,
    pub c: BigInt,
    pub strict: bool,
    hist: History,
}

impl Row {
    fn normalize(&mut self) {
        let g = self
            .a
            .iter()
            .fold(self.c.abs(), |acc, x| acc.gcd(x));
        if g > BigInt::one() {
            self.a.iter_mut().for_each(|x| *x /= &g);
            self.c /= &g;
        }
    }

    fn is_trivial(&self) -> bool {
        self.a.iter().all(Zero::is_zero)
    }

    fn trivially_satisfied(&self) -> bool {
        if self.strict {
            self.c.is_positive()
        } else {
            !self.c.is_negative()
        }
    }
}

/// Mixed strict/non-strict linear system in `nvars` unknowns.
#[derive(Clone, Debug)]
pub(crate) struct FmSystem {
    pub nvars: usize,
    pub rows: Vec<Row>,
    capacity: usize,
    eliminated: usize,
}

impl FmSystem {
    /// Builds from rational rows `(a, c, strict)`.
    pub fn from_rational(nvars: usize, rows: &[(Vec<Rat>, Rat, bool)]) -> Self {
        let capacity = rows.len();
        let rows = rows
            .iter()
            .enumerate()
            .map(|(i, (a, c, strict))| {
                assert_eq!(a.len(), nvars, "row length mismatch");
                let lcm = a
                    .iter()
                    .chain(std::iter::once(c))
                    .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                let scale = |x: &Rat| (x * &lcm).to_integer();
                let mut row = Row {
                    a: a.iter().map(scale).collect(),
                    c: scale(c),
                    strict: *strict,
                    hist: History::single(i, capacity),
                };
                row.normalize();
                row
            })
            .collect();
        Self {
            nvars,
            rows,
            capacity,
            eliminated: 0,
        }
    }

    /// Checks the rows with no unknowns; `false` on a contradiction.
    fn settle(&mut self) -> bool {
        let mut ok = true;
        self.rows.retain(|r| {
            if r.is_trivial() {
                ok &= r.trivially_satisfied();
                false
            } else {
                true
            }
        });
        if ok {
            self.rows
                .sort_by(|x, y| (&x.a, &x.c, x.strict, x.hist.count(), &x.hist).cmp(&(&y.a, &y.c, y.strict, y.hist.count(), &y.hist)));
            // an equal row survives unless its history contains a kept one's;
            // descendants of the smaller history then dominate for pruning
            let rows = std::mem::take(&mut self.rows);
            let mut kept: Vec<Row> = Vec::with_capacity(rows.len());
            let mut group_start = 0;
            for r in rows {
                if kept.last().is_none_or(|k| k.a != r.a || k.c != r.c || k.strict != r.strict) {
                    group_start = kept.len();
                }
                if !kept[group_start..].iter().any(|k| k.hist.is_subset(&r.hist)) {
                    kept.push(r);
                }
            }
            self.rows = kept;
        }
        ok
    }

    /// Eliminates unknown `var`; `None` if the system is infeasible.
    pub fn eliminate(&self, var: usize) -> Option<FmSystem> {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut rest = Vec::new();
        for r in &self.rows {
            match r.a[var].sign() {
                num_bigint::Sign::Plus => pos.push(r),
                num_bigint::Sign::Minus => neg.push(r),
                num_bigint::Sign::NoSign => rest.push(r.clone()),
            }
        }
        let eliminated = self.eliminated + 1;
        for p in &pos {
            for q in &neg {
                let hist = p.hist.union(&q.hist);
                if hist.count() > eliminated + 1 {
                    continue;
                }
                let fp = -q.a[var].clone();
                let fq = p.a[var].clone();
                let mut row = Row {
                    a: p
                        .a
                        .iter()
                        .zip(&q.a)
                        .map(|(x, y)| x * &fp + y * &fq)
                        .collect(),
                    c: &p.c * &fp + &q.c * &fq,
                    strict: p.strict || q.strict,
                    hist,
                };
                debug_assert!(row.a[var].is_zero());
                row.normalize();
                rest.push(row);
            }
        }
        let mut out = FmSystem {
            nvars: self.nvars,
            rows: rest,
            capacity: self.capacity,
            eliminated,
        };
        out.settle().then_some(out)
    }

    pub fn feasible(&self) -> bool {
        let mut sys = self.clone();
        if !sys.settle() {
            return false;
        }
        for var in (0..self.nvars).rev() {
            match sys.eliminate(var) {
                Some(next) => sys = next,
                None => return false,
            }
        }
        true
    }

    /// Successive projections: `stages[j]` involves only unknowns `0..=j`.
    /// `None` if infeasible.
    pub fn stages(&self) -> Option<Vec<FmSystem>> {
        let mut sys = self.clone();
        if !sys.settle() {
            return None;
        }
        let mut stages = vec![sys.clone()];
        for var in (1..self.nvars).rev() {
            sys = sys.eliminate(var)?;
            stages.push(sys.clone());
        }
        // the last unknown must also be consistent
        sys.eliminate(0)?;
        stages.reverse();
        Some(stages)
    }

    /// Integer bounds on unknown `j` given fixed values for `0..j`.
    /// Returns `(lower, upper)` where `None` means unbounded in that direction.
    pub fn integer_bounds(&self, j: usize, prefix: &[BigInt]) -> (Option<BigInt>, Option<BigInt>) {
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for r in &self.rows {
            let aj = &r.a[j];
            if aj.is_zero() {
                continue;
            }
            let mut num = r.c.clone();
            for (a, x) in r.a.iter().zip(prefix) {
                num -= a * x;
            }
            if aj.is_positive() {
                let (q, rem) = num.div_mod_floor(aj);
                let b = if r.strict && rem.is_zero() { q - 1 } else { q };
                if hi.as_ref().is_none_or(|h| &b < h) {
                    hi = Some(b);
                }
            } else {
                // aj x ≤ num with aj < 0  ->  x ≥ num / aj
                let (q, rem) = num.div_mod_floor(aj);
                // div_mod_floor with negative divisor floors num/aj; ceil needs +1 when inexact
                let b = if rem.is_zero() {
                    if r.strict {
                        q + 1
                    } else {
                        q
                    }
                } else {
                    q + 1
                };
                if lo.as_ref().is_none_or(|l| &b > l) {
                    lo = Some(b);
                }
            }
        }
        (lo, hi)
    }

    /// Rational interval for unknown `j` given rational values for `0..j`:
    /// `(lower, upper)` with strictness flags.
    fn interval_at(&self, j: usize, prefix: &[Rat]) -> (Option<(Rat, bool)>, Option<(Rat, bool)>) {
        let mut lo: Option<(Rat, bool)> = None;
        let mut hi: Option<(Rat, bool)> = None;
        for r in &self.rows {
            let aj = &r.a[j];
            if aj.is_zero() {
                continue;
            }
            let mut num = Rat::from_integer(r.c.clone());
            for (a, x) in r.a.iter().zip(prefix) {
                num -= Rat::from_integer(a.clone()) * x;
            }
            let v = num / Rat::from_integer(aj.clone());
            if aj.is_positive() {
                if hi.as_ref().is_none_or(|(h, s)| v < *h || (v == *h && r.strict && !s)) {
                    hi = Some((v, r.strict));
                }
            } else if lo.as_ref().is_none_or(|(l, s)| v > *l || (v == *l && r.strict && !s)) {
                lo = Some((v, r.strict));
            }
        }
        (lo, hi)
    }

    /// A rational point satisfying every row, or `None` if infeasible.
    pub fn witness(&self) -> Option<Vec<Rat>> {
        if self.nvars == 0 {
            let mut s = self.clone();
            return s.settle().then(Vec::new);
        }
        let stages = self.stages()?;
        let mut x: Vec<Rat> = Vec::with_capacity(self.nvars);
        let one = Rat::one();
        let two = Rat::from_integer(BigInt::from(2));
        for (j, st) in stages.iter().enumerate() {
            let v = match st.interval_at(j, &x) {
                (Some((l, _)), Some((h, _))) if l == h => l,
                (Some((l, _)), Some((h, _))) => (l + h) / &two,
                (Some((l, _)), None) => l + &one,
                (None, Some((h, _))) => h - &one,
                (None, None) => Rat::zero(),
            };
            x.push(v);
        }
        Some(x)
    }

    /// Rational bounds on unknown `j` over a stage that only involves `j`.
    pub fn rational_bounds(&self, j: usize) -> (Option<(Rat, bool)>, Option<(Rat, bool)>) {
        let mut lo: Option<(Rat, bool)> = None;
        let mut hi: Option<(Rat, bool)> = None;
        for r in &self.rows {
            let aj = &r.a[j];
            if aj.is_zero() {
                continue;
            }
            let v = Rat::new(r.c.clone(), aj.clone());
            if aj.is_positive() {
                let tighter = match &hi {
                    None => true,
                    Some((h, s)) => v < *h || (v == *h && r.strict && !s),
                };
                if tighter {
                    hi = Some((v, r.strict));
                }
            } else {
                let tighter = match &lo {
                    None => true,
                    Some((l, s)) => v > *l || (v == *l && r.strict && !s),
                };
                if tighter {
                    lo = Some((v, r.strict));
                }
            }
        }
        (lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{rat, rat_frac};

    fn sys(nvars: usize, rows: &[(&[i64], i64, bool)]) -> FmSystem {
        let rows: Vec<_> = rows
            .iter()
            .map(|(a, c, s)| (a.iter().map(|&x| rat(x)).collect(), rat(*c), *s))
            .collect();
        FmSystem::from_rational(nvars, &rows)
    }

    #[test]
    fn empty_interval() {
        assert!(!sys(1, &[(&[1], 1, false), (&[-1], -2, false)]).feasible());
    }

    #[test]
    fn strict_point_is_infeasible() {
        assert!(sys(1, &[(&[1], 0, false), (&[-1], 0, false)]).feasible());
        assert!(!sys(1, &[(&[1], 0, true), (&[-1], 0, false)]).feasible());
    }

    #[test]
    fn triangle_projection() {
        // x ≥ 0, y ≥ 0, x + y ≤ 1
        let s = sys(2, &[(&[-1, 0], 0, false), (&[0, -1], 0, false), (&[1, 1], 1, false)]);
        let stages = s.stages().unwrap();
        let (lo, hi) = stages[0].rational_bounds(0);
        assert_eq!(lo.unwrap().0, rat(0));
        assert_eq!(hi.unwrap().0, rat(1));
    }

    #[test]
    fn witness_satisfies_rows() {
        let s = sys(2, &[(&[-1, 0], 0, true), (&[0, -1], 0, true), (&[1, 1], 1, true), (&[1, -1], 0, false)]);
        let w = s.witness().unwrap();
        assert!(w[0] > rat(0) && w[1] > rat(0) && &w[0] + &w[1] < rat(1) && w[0] <= w[1]);
        assert!(sys(1, &[(&[1], 0, true), (&[-1], 0, false)]).witness().is_none());
    }

    #[test]
    fn rational_rows_are_scaled() {
        let rows = vec![(vec![rat_frac(1, 2)], rat_frac(1, 3), false)];
        let s = FmSystem::from_rational(1, &rows);
        assert_eq!(s.rows[0].a, vec![BigInt::from(3)]);
        assert_eq!(s.rows[0].c, BigInt::from(2));
    }

    #[test]
    fn integer_bounds_respect_strictness() {
        let s = sys(1, &[(&[2], 4, true), (&[-3], 3, false)]);
        let (lo, hi) = s.integer_bounds(0, &[]);
        assert_eq!(lo, Some(BigInt::from(-1)));
        assert_eq!(hi, Some(BigInt::from(1)));
    }
}
