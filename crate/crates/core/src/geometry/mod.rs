//! Exact rational convex geometry: H-polyhedra, feasibility, lattice points
//! and zonotopes.

pub(crate) mod fm;
mod planar;
mod zonotope;

pub use planar::{convex_cyclic_check, convex_hull_2d, cross2};
pub use zonotope::{combinations, zonotope_facets, zonotope_vertices, Facet, FacetLabel, Zonotope, ZonotopeMode};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::bigjson;
use crate::error::{Result, TorexError};
use crate::exactlin::{dot, int_to_rat, nullspace, solve_rational, Rat, RatMatrix};
use fm::FmSystem;

/// `normal · x ≤ offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Halfspace {
    #[serde(with = "bigjson::rat_vec")]
    pub normal: Vec<Rat>,
    #[serde(with = "bigjson::rat")]
    pub offset: Rat,
}

impl Halfspace {
    pub fn new(normal: Vec<Rat>, offset: Rat) -> Result<Self> {
        if normal.iter().all(Zero::is_zero) {
            return Err(TorexError::ZeroNormal);
        }
        Ok(Self { normal, offset })
    }

    /// Signed slack `offset - normal·x`.
    pub fn slack(&self, x: &[Rat]) -> Rat {
        &self.offset - dot(&self.normal, x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HPolyhedron {
    pub dim: usize,
    pub ineqs: Vec<Halfspace>,
}

impl HPolyhedron {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            ineqs: Vec::new(),
        }
    }

    pub fn push(&mut self, normal: Vec<Rat>, offset: Rat) -> Result<()> {
        if normal.len() != self.dim {
            return Err(TorexError::DimensionMismatch {
                expected: self.dim,
                found: normal.len(),
            });
        }
        self.ineqs.push(Halfspace::new(normal, offset)?);
        Ok(())
    }

    /// Adds `lo ≤ normal·x ≤ hi`.
    pub fn push_slab(&mut self, normal: &[Rat], lo: &Rat, hi: &Rat) -> Result<()> {
        self.push(normal.to_vec(), hi.clone())?;
        self.push(normal.iter().map(|x| -x).collect(), -lo)
    }

    pub fn contains(&self, x: &[Rat], strict: bool) -> bool {
        self.ineqs.iter().all(|h| {
            let s = h.slack(x);
            if strict {
                s.is_positive()
            } else {
                !s.is_negative()
            }
        })
    }

    /// `{ x + p : x ∈ self }`.
    pub fn shift(&self, p: &[Rat]) -> HPolyhedron {
        HPolyhedron {
            dim: self.dim,
            ineqs: self
                .ineqs
                .iter()
                .map(|h| Halfspace {
                    normal: h.normal.clone(),
                    offset: &h.offset + dot(&h.normal, p),
                })
                .collect(),
        }
    }

    /// Indices of inequalities tight at `x`.
    pub fn tight_at(&self, x: &[Rat]) -> Vec<usize> {
        self.ineqs
            .iter()
            .enumerate()
            .filter(|(_, h)| h.slack(x).is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    fn fm_system(&self, strict_mask: &[bool]) -> FmSystem {
        let rows: Vec<_> = self
            .ineqs
            .iter()
            .zip(strict_mask)
            .map(|(h, &s)| (h.normal.clone(), h.offset.clone(), s))
            .collect();
        FmSystem::from_rational(self.dim, &rows)
    }
}

/// Exact feasibility of the mixed strict/non-strict system.
pub fn lp_feasible(p: &HPolyhedron, strict_mask: &[bool]) -> bool {
    assert_eq!(strict_mask.len(), p.ineqs.len(), "mask length mismatch");
    p.fm_system(strict_mask).feasible()
}

/// Feasibility of `{x : eq_a x = eq_b, rows}` where each row is
/// `(a, c, strict)` meaning `a·x ≤ c` or `a·x < c`.
pub fn feasible_with_equalities(
    eq_a: &RatMatrix,
    eq_b: &[Rat],
    rows: &[(Vec<Rat>, Rat, bool)],
) -> bool {
    let Some((x0, basis)) = affine_solutions(eq_a, eq_b) else {
        return false;
    };
    let sub = substitute(&x0, &basis, rows);
    FmSystem::from_rational(basis.len(), &sub).feasible()
}

/// A point of `{x : eq_a x = eq_b, rows}`, if one exists.
pub fn witness_with_equalities(
    eq_a: &RatMatrix,
    eq_b: &[Rat],
    rows: &[(Vec<Rat>, Rat, bool)],
) -> Option<Vec<Rat>> {
    let (x0, basis) = affine_solutions(eq_a, eq_b)?;
    let sub = substitute(&x0, &basis, rows);
    let mu = FmSystem::from_rational(basis.len(), &sub).witness()?;
    let mut x = x0;
    for (m, b) in mu.iter().zip(&basis) {
        for (xi, bi) in x.iter_mut().zip(b) {
            *xi += m * bi;
        }
    }
    Some(x)
}

/// Minimum of `objective·x` over `{x : eq_a x = eq_b, rows}`; `None` if the
/// set is empty or the objective is unbounded below. Strict rows are treated
/// as closed.
pub fn minimize_with_equalities(
    eq_a: &RatMatrix,
    eq_b: &[Rat],
    rows: &[(Vec<Rat>, Rat, bool)],
    objective: &[Rat],
) -> Option<Rat> {
    let (x0, basis) = affine_solutions(eq_a, eq_b)?;
    let k = basis.len();
    let base = dot(objective, &x0);
    // unknowns (mu_0..mu_{k-1}, s) with s ≥ objective(mu)
    let lin: Vec<Rat> = basis.iter().map(|b| dot(objective, b)).collect();
    let mut sub: Vec<(Vec<Rat>, Rat, bool)> = substitute(&x0, &basis, rows)
        .into_iter()
        .map(|(mut a, c, _)| {
            a.push(Rat::zero());
            (a, c, false)
        })
        .collect();
    let mut upper = lin.clone();
    upper.push(-Rat::from_integer(1.into()));
    sub.push((upper, -base.clone(), false));
    let mut lower: Vec<Rat> = lin.iter().map(|x| -x).collect();
    lower.push(Rat::from_integer(1.into()));
    sub.push((lower, base, false));
    // project onto s (the last unknown): reorder so that s is unknown 0
    let reordered: Vec<_> = sub
        .into_iter()
        .map(|(a, c, s)| {
            let mut b = Vec::with_capacity(k + 1);
            b.push(a[k].clone());
            b.extend_from_slice(&a[..k]);
            (b, c, s)
        })
        .collect();
    let stages = FmSystem::from_rational(k + 1, &reordered).stages()?;
    let (lo, _) = stages[0].rational_bounds(0);
    lo.map(|(v, _)| v)
}

/// All solutions of `a x = b` as `x0 + span(basis)`.
pub fn affine_solutions(a: &RatMatrix, b: &[Rat]) -> Option<(Vec<Rat>, Vec<Vec<Rat>>)> {
    let x0 = solve_rational(a, b)?;
    Some((x0, nullspace(a)))
}

fn substitute(
    x0: &[Rat],
    basis: &[Vec<Rat>],
    rows: &[(Vec<Rat>, Rat, bool)],
) -> Vec<(Vec<Rat>, Rat, bool)> {
    rows.iter()
        .map(|(a, c, s)| {
            let coeffs: Vec<Rat> = basis.iter().map(|b| dot(a, b)).collect();
            (coeffs, c - dot(a, x0), *s)
        })
        .collect()
}

/// Integer points of a bounded polyhedron, in lexicographic order.
pub fn lattice_points(p: &HPolyhedron) -> Result<Vec<Vec<BigInt>>> {
    let mask = vec![false; p.ineqs.len()];
    lattice_points_masked(p, &mask)
}

/// Integer points with the given inequalities taken strictly.
pub fn lattice_points_masked(p: &HPolyhedron, strict_mask: &[bool]) -> Result<Vec<Vec<BigInt>>> {
    if p.dim == 0 {
        let ok = p.ineqs.is_empty();
        return Ok(if ok { vec![Vec::new()] } else { Vec::new() });
    }
    let Some(stages) = p.fm_system(strict_mask).stages() else {
        return Ok(Vec::new());
    };
    for (j, st) in stages.iter().enumerate() {
        let has_lo = st.rows.iter().any(|r| r.a[j].is_negative());
        let has_hi = st.rows.iter().any(|r| r.a[j].is_positive());
        if !(has_lo && has_hi) {
            return Err(TorexError::UnboundedPolyhedron);
        }
    }
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(p.dim);
    enumerate(&stages, &mut prefix, &mut out);
    Ok(out)
}

fn enumerate(stages: &[FmSystem], prefix: &mut Vec<BigInt>, out: &mut Vec<Vec<BigInt>>) {
    let j = prefix.len();
    if j == stages.len() {
        out.push(prefix.clone());
        return;
    }
    let (lo, hi) = stages[j].integer_bounds(j, prefix);
    let (Some(lo), Some(hi)) = (lo, hi) else {
        unreachable!("boundedness checked before enumeration")
    };
    let mut x = lo;
    while x <= hi {
        prefix.push(x.clone());
        enumerate(stages, prefix, out);
        prefix.pop();
        x += 1;
    }
}

/// Integer points of `p` inside the integer box `[lo, hi]`, filtered exactly.
/// Used when a bounding box is known from the construction, avoiding
/// elimination on large systems.
pub fn lattice_points_in_box(
    p: &HPolyhedron,
    lo: &[BigInt],
    hi: &[BigInt],
    strict: bool,
) -> Vec<Vec<BigInt>> {
    assert_eq!(lo.len(), p.dim);
    assert_eq!(hi.len(), p.dim);
    // integer-scaled rows for fast partial checks
    let rows: Vec<(Vec<BigInt>, BigInt)> = p
        .ineqs
        .iter()
        .map(|h| {
            let sys = FmSystem::from_rational(p.dim, &[(h.normal.clone(), h.offset.clone(), strict)]);
            let r = &sys.rows[0];
            // for integer points a·x < c  <=>  a·x ≤ c - 1
            let c = if strict { &r.c - 1 } else { r.c.clone() };
            (r.a.clone(), c)
        })
        .collect();
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(p.dim);
    let partial = vec![BigInt::zero(); rows.len()];
    box_walk(&rows, lo, hi, &mut prefix, &partial, &mut out);
    out
}

fn box_walk(
    rows: &[(Vec<BigInt>, BigInt)],
    lo: &[BigInt],
    hi: &[BigInt],
    prefix: &mut Vec<BigInt>,
    partial: &[BigInt],
    out: &mut Vec<Vec<BigInt>>,
) {
    let j = prefix.len();
    if j == lo.len() {
        if rows.iter().zip(partial).all(|((_, c), s)| s <= c) {
            out.push(prefix.clone());
        }
        return;
    }
    let mut x = lo[j].clone();
    while x <= hi[j] {
        let next: Vec<BigInt> = rows
            .iter()
            .zip(partial)
            .map(|((a, _), s)| s + &a[j] * &x)
            .collect();
        // prune with the best case over the remaining coordinates
        let viable = rows.iter().zip(&next).all(|((a, c), s)| {
            let mut best = s.clone();
            for l in j + 1..lo.len() {
                best += if a[l].is_positive() { &a[l] * &lo[l] } else { &a[l] * &hi[l] };
            }
            &best <= c
        });
        if viable {
            prefix.push(x.clone());
            box_walk(rows, lo, hi, prefix, &next, out);
            prefix.pop();
        }
        x += 1;
    }
}

/// Integer points as rational vectors.
pub fn as_rational_points(points: &[Vec<BigInt>]) -> Vec<Vec<Rat>> {
    points.iter().map(|p| int_to_rat(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{rat, rat_frac};

    fn poly(dim: usize, rows: &[(&[i64], Rat)]) -> HPolyhedron {
        let mut p = HPolyhedron::new(dim);
        for (a, c) in rows {
            p.push(a.iter().map(|&x| rat(x)).collect(), c.clone()).unwrap();
        }
        p
    }

    fn square() -> HPolyhedron {
        poly(
            2,
            &[(&[1, 0], rat(1)), (&[-1, 0], rat(1)), (&[0, 1], rat(1)), (&[0, -1], rat(1))],
        )
    }

    #[test]
    fn feasibility_examples() {
        let empty = poly(1, &[(&[1], rat(1)), (&[-1], rat(-2))]);
        assert!(!lp_feasible(&empty, &[false, false]));
        let half_line = poly(1, &[(&[1], rat(1))]);
        assert!(lp_feasible(&half_line, &[true]));
    }

    #[test]
    fn square_has_nine_points() {
        let pts = lattice_points(&square()).unwrap();
        assert_eq!(pts.len(), 9);
        let boxed = lattice_points_in_box(
            &square(),
            &[BigInt::from(-3), BigInt::from(-3)],
            &[BigInt::from(3), BigInt::from(3)],
            false,
        );
        assert_eq!(pts, boxed);
    }

    #[test]
    fn shifted_interval() {
        let p = poly(1, &[(&[1], rat_frac(29, 10)), (&[-1], rat_frac(-1, 10))]);
        let pts = lattice_points(&p).unwrap();
        assert_eq!(pts, vec![vec![BigInt::from(1)], vec![BigInt::from(2)]]);
    }

    #[test]
    fn unbounded_is_an_error() {
        let p = poly(1, &[(&[1], rat(1))]);
        assert!(matches!(lattice_points(&p), Err(TorexError::UnboundedPolyhedron)));
    }

    #[test]
    fn contains_and_shift() {
        assert!(square().contains(&[rat(0), rat(0)], true));
        assert!(!square().contains(&[rat(1), rat(0)], true));
        assert!(square().contains(&[rat(1), rat(0)], false));
        let p = poly(1, &[(&[1], rat(0))]).shift(&[rat(1)]);
        assert_eq!(p.ineqs[0].offset, rat(1));
    }

    #[test]
    fn minimize_over_simplex() {
        // x + y = 1, x ≥ 0, y ≥ 0 ; minimize x - y
        let eq = RatMatrix::from_rows(vec![vec![rat(1), rat(1)]]);
        let rows = vec![
            (vec![rat(-1), rat(0)], rat(0), false),
            (vec![rat(0), rat(-1)], rat(0), false),
        ];
        let m = minimize_with_equalities(&eq, &[rat(1)], &rows, &[rat(1), rat(-1)]);
        assert_eq!(m, Some(rat(-1)));
    }

    #[test]
    fn zero_normal_rejected() {
        let mut p = HPolyhedron::new(1);
        assert!(p.push(vec![rat(0)], rat(1)).is_err());
    }
}
