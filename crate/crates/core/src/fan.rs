//! Stacky fans: validation, Fano classification, support complexes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::complex::{RaySet, SimplicialComplexOnRays, MAX_RAYS};
use crate::error::{Result, TorexError};
use crate::exactlin::{dot, int_to_rat, rat, rational_rank, solve_rational, Rat, RatMatrix};
use crate::geometry::fm::FmSystem;
use crate::geometry::{convex_hull_2d, cross2};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StackyFan {
    pub d: usize,
    #[serde(with = "crate::bigjson::int_rows")]
    pub rays: Vec<Vec<BigInt>>,
    pub max_cones: Vec<RaySet>,
    #[serde(default)]
    pub trusted_complete: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FanClass {
    Fano,
    NefFano,
    Neither,
}

/// One violated invariant found by [`StackyFan::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diagnostic {
    RayDimension { ray: usize, len: usize },
    ZeroRay { ray: usize },
    DuplicateRay { first: usize, second: usize },
    UnusedRay { ray: usize },
    ConeSize { cone: RaySet },
    ConeIndex { cone: RaySet },
    DuplicateCone { cone: RaySet },
    NonSimplicial { cone: RaySet },
    RidgeCount { ridge: RaySet, count: usize },
    RidgeSameSide { ridge: RaySet },
    CoveringDegree { degree: i64 },
    CompletenessUnchecked,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::RayDimension { ray, len } => write!(f, "ray {ray} has length {len}"),
            Diagnostic::ZeroRay { ray } => write!(f, "ray {ray} is zero"),
            Diagnostic::DuplicateRay { first, second } => {
                write!(f, "rays {first} and {second} coincide")
            }
            Diagnostic::UnusedRay { ray } => write!(f, "ray {ray} lies in no maximal cone"),
            Diagnostic::ConeSize { cone } => write!(f, "cone {cone} does not have d rays"),
            Diagnostic::ConeIndex { cone } => write!(f, "cone {cone} has an out-of-range index"),
            Diagnostic::DuplicateCone { cone } => write!(f, "cone {cone} is listed twice"),
            Diagnostic::NonSimplicial { cone } => {
                write!(f, "cone {cone} has linearly dependent rays (non-simplicial)")
            }
            Diagnostic::RidgeCount { ridge, count } => {
                write!(f, "ridge {ridge} lies in {count} maximal cones, expected 2 (incomplete)")
            }
            Diagnostic::RidgeSameSide { ridge } => {
                write!(f, "the two cones at ridge {ridge} overlap")
            }
            Diagnostic::CoveringDegree { degree } => {
                write!(f, "cones cover space {degree} times, expected once")
            }
            Diagnostic::CompletenessUnchecked => {
                write!(f, "completeness is only checked for d <= 3; set trusted_complete")
            }
        }
    }
}

impl StackyFan {
    /// Assembles a fan without validation; only index ranges are checked.
    pub fn from_parts(
        d: usize,
        rays: Vec<Vec<BigInt>>,
        max_cones: Vec<RaySet>,
        trusted_complete: bool,
    ) -> Result<Self> {
        if rays.len() > MAX_RAYS {
            return Err(TorexError::TooManyRays(rays.len()));
        }
        Ok(Self {
            d,
            rays,
            max_cones,
            trusted_complete,
        })
    }

    /// Assembles and validates.
    pub fn new(
        d: usize,
        rays: Vec<Vec<BigInt>>,
        max_cones: Vec<RaySet>,
        trusted_complete: bool,
    ) -> Result<Self> {
        let fan = Self::from_parts(d, rays, max_cones, trusted_complete)?;
        fan.ensure_valid()?;
        Ok(fan)
    }

    pub fn from_i64(d: usize, rays: &[Vec<i64>], cones: &[Vec<usize>]) -> Result<Self> {
        Self::new(
            d,
            rays.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
            cones.iter().map(|c| RaySet::from_indices(c.iter().copied())).collect(),
            false,
        )
    }

    pub fn n(&self) -> usize {
        self.rays.len()
    }

    /// Picard rank `n - d`.
    pub fn rank(&self) -> usize {
        self.n().saturating_sub(self.d)
    }

    pub fn ray_rat(&self, i: usize) -> Vec<Rat> {
        int_to_rat(&self.rays[i])
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let diags = self.validate();
        if diags.is_empty() {
            Ok(())
        } else {
            let msg: Vec<String> = diags.iter().map(ToString::to_string).collect();
            Err(TorexError::InvalidFan(msg.join("; ")))
        }
    }

    /// Every violated invariant; empty iff the fan is valid.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let n = self.n();
        for (i, r) in self.rays.iter().enumerate() {
            if r.len() != self.d {
                out.push(Diagnostic::RayDimension { ray: i, len: r.len() });
            } else if r.iter().all(Zero::is_zero) {
                out.push(Diagnostic::ZeroRay { ray: i });
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if self.rays[i] == self.rays[j] {
                    out.push(Diagnostic::DuplicateRay { first: i, second: j });
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        let mut seen = BTreeSet::new();
        let mut cones_ok = true;
        for &c in &self.max_cones {
            if !c.is_subset(RaySet::full(n)) {
                out.push(Diagnostic::ConeIndex { cone: c });
                cones_ok = false;
            } else if c.len() != self.d {
                out.push(Diagnostic::ConeSize { cone: c });
                cones_ok = false;
            } else if !seen.insert(c) {
                out.push(Diagnostic::DuplicateCone { cone: c });
            } else if rational_rank(&self.cone_matrix(c)) < self.d {
                out.push(Diagnostic::NonSimplicial { cone: c });
                cones_ok = false;
            }
        }
        let used = self.max_cones.iter().fold(RaySet::EMPTY, |a, c| a.union(*c));
        for i in 0..n {
            if !used.contains(i) {
                out.push(Diagnostic::UnusedRay { ray: i });
            }
        }
        if !cones_ok || !out.is_empty() {
            return out;
        }
        if self.d > 3 {
            if !self.trusted_complete {
                out.push(Diagnostic::CompletenessUnchecked);
            }
            return out;
        }
        out.extend(self.completeness_diagnostics());
        out
    }

    fn cone_matrix(&self, c: RaySet) -> RatMatrix {
        RatMatrix::from_rows(c.iter().map(|i| self.ray_rat(i)).collect())
    }

    // ridge counting, local orientation, and covering degree at a generic point
    fn completeness_diagnostics(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let mut ridges: BTreeMap<RaySet, Vec<RaySet>> = BTreeMap::new();
        for &c in &self.max_cones {
            for i in c.iter() {
                let mut r = c;
                r.0 &= !(1 << i);
                ridges.entry(r).or_default().push(c);
            }
        }
        if self.max_cones.is_empty() {
            out.push(Diagnostic::RidgeCount {
                ridge: RaySet::EMPTY,
                count: 0,
            });
            return out;
        }
        for (ridge, cones) in &ridges {
            if cones.len() != 2 {
                out.push(Diagnostic::RidgeCount {
                    ridge: *ridge,
                    count: cones.len(),
                });
                continue;
            }
            let a = cones[0].minus(*ridge).iter().next().unwrap();
            let b = cones[1].minus(*ridge).iter().next().unwrap();
            let sa = self.side(*ridge, a);
            let sb = self.side(*ridge, b);
            if sa * sb >= 0 {
                out.push(Diagnostic::RidgeSameSide { ridge: *ridge });
            }
        }
        if out.is_empty() {
            let deg = self.covering_degree();
            if deg != 1 {
                out.push(Diagnostic::CoveringDegree { degree: deg });
            }
        }
        out
    }

    // sign of det(ridge rays, v_j) with a fixed ordering
    fn side(&self, ridge: RaySet, j: usize) -> i32 {
        let mut rows: Vec<Vec<Rat>> = ridge.iter().map(|i| self.ray_rat(i)).collect();
        rows.push(self.ray_rat(j));
        let det = determinant(&RatMatrix::from_rows(rows));
        if det.is_positive() {
            1
        } else if det.is_negative() {
            -1
        } else {
            0
        }
    }

    // number of cones containing a point in general position
    fn covering_degree(&self) -> i64 {
        for attempt in 0..64i64 {
            let x: Vec<Rat> = (0..self.d)
                .map(|j| rat(1 + attempt * 7 + (j as i64) * (j as i64) * 13 + j as i64 * 97 + 31 * attempt * j as i64))
                .map(|v| if (attempt + self.d as i64) % 2 == 0 { v } else { -v })
                .collect();
            let mut count = 0i64;
            let mut boundary = false;
            for &c in &self.max_cones {
                let m = self.cone_matrix(c).transpose();
                let lam = solve_rational(&m, &x).expect("simplicial cone");
                if lam.iter().any(Zero::is_zero) {
                    boundary = true;
                    break;
                }
                if lam.iter().all(Signed::is_positive) {
                    count += 1;
                }
            }
            if !boundary {
                return count;
            }
        }
        0
    }

    /// `J` lies in some maximal cone.
    pub fn is_face(&self, j: RaySet) -> bool {
        self.max_cones.iter().any(|c| j.is_subset(*c))
    }

    /// Whether the rays are listed clockwise around the origin, for `d = 2`.
    pub fn is_clockwise(&self) -> bool {
        if self.d != 2 {
            return false;
        }
        let n = self.n();
        (0..n).all(|i| {
            let j = (i + 1) % n;
            cross2(&self.ray_rat(i), &self.ray_rat(j)).is_negative()
                && self.is_face(RaySet::from_indices([i, j]))
        })
    }

    /// Fano / nef-Fano / neither.
    pub fn classify(&self) -> Result<FanClass> {
        self.ensure_valid()?;
        let pts: Vec<Vec<Rat>> = (0..self.n()).map(|i| self.ray_rat(i)).collect();
        if !origin_interior(&pts, self.d) {
            return Ok(FanClass::Neither);
        }
        if (0..self.n()).all(|i| is_vertex(&pts, i)) {
            return Ok(FanClass::Fano);
        }
        if (0..self.n()).all(|i| on_boundary(&pts, i)) {
            return Ok(FanClass::NefFano);
        }
        Ok(FanClass::Neither)
    }

    pub fn supp_complex(&self, r: &[BigInt]) -> Result<SimplicialComplexOnRays> {
        if r.len() != self.n() {
            return Err(TorexError::LengthMismatch {
                expected: self.n(),
                found: r.len(),
            });
        }
        let nonneg = RaySet::from_indices((0..r.len()).filter(|&i| !r[i].is_negative()));
        Ok(self.c_complex(nonneg))
    }

    /// `Supp` of the vector that is 0 on `i` and -1 elsewhere.
    pub fn c_complex(&self, i: RaySet) -> SimplicialComplexOnRays {
        SimplicialComplexOnRays::generated_by(
            self.n(),
            self.max_cones.iter().map(|c| c.intersection(i)),
        )
    }

    /// Inclusion-minimal subsets contained in no maximal cone.
    pub fn minimal_nonfaces(&self) -> Vec<RaySet> {
        let n = self.n();
        let mut out = Vec::new();
        for size in 1..=(self.d + 1).min(n) {
            for combo in crate::geometry::combinations(n, size) {
                let r = RaySet::from_indices(combo.iter().copied());
                if self.is_face(r) {
                    continue;
                }
                let minimal = r.iter().all(|i| {
                    let mut s = r;
                    s.0 &= !(1 << i);
                    self.is_face(s)
                });
                if minimal {
                    out.push(r);
                }
            }
        }
        out
    }

    /// `d! · Vol(Δ)` as the sum of `|det|` over the maximal cones.
    pub fn normalized_volume(&self) -> Result<Rat> {
        match self.classify()? {
            FanClass::Neither => Err(TorexError::NotFano),
            _ => Ok(self
                .max_cones
                .iter()
                .map(|&c| {
                    let det = determinant(&self.cone_matrix(c));
                    if det.is_negative() {
                        -det
                    } else {
                        det
                    }
                })
                .fold(Rat::zero(), |a, b| a + b)),
        }
    }

    /// The same fan with rays reordered clockwise (`d = 2`). Returns the fan
    /// and `perm` with `new ray k = old ray perm[k]`.
    pub fn to_clockwise(&self) -> Result<(StackyFan, Vec<usize>)> {
        if self.d != 2 {
            return Err(TorexError::NotDimTwo(self.d));
        }
        let perm = clockwise_order(&self.rays);
        let mut inv = vec![0usize; perm.len()];
        for (k, &p) in perm.iter().enumerate() {
            inv[p] = k;
        }
        let fan = StackyFan {
            d: 2,
            rays: perm.iter().map(|&p| self.rays[p].clone()).collect(),
            max_cones: self
                .max_cones
                .iter()
                .map(|c| RaySet::from_indices(c.iter().map(|i| inv[i])))
                .collect(),
            trusted_complete: self.trusted_complete,
        };
        Ok((fan, perm))
    }
}

/// Indices sorted clockwise by angle, starting from the first ray.
pub fn clockwise_order(rays: &[Vec<BigInt>]) -> Vec<usize> {
    let n = rays.len();
    if n == 0 {
        return Vec::new();
    }
    let base = int_to_rat(&rays[0]);
    // angle measured clockwise from ray 0, compared exactly
    let half = |v: &[Rat]| -> u8 {
        let c = cross2(&base, v);
        if c.is_negative() || (c.is_zero() && dot(&base, v).is_positive()) {
            0
        } else {
            1
        }
    };
    let mut idx: Vec<usize> = (1..n).collect();
    idx.sort_by(|&a, &b| {
        let va = int_to_rat(&rays[a]);
        let vb = int_to_rat(&rays[b]);
        half(&va).cmp(&half(&vb)).then_with(|| {
            // within a half-plane, a before b iff b is clockwise of a
            let c = cross2(&va, &vb);
            if c.is_negative() {
                std::cmp::Ordering::Less
            } else if c.is_positive() {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Equal
            }
        })
    });
    let mut out = vec![0];
    out.extend(idx);
    out
}

/// Face fan of the convex hull of `points`.
pub fn face_fan_from_points(points: &[Vec<BigInt>]) -> Result<StackyFan> {
    let n = points.len();
    let Some(d) = points.first().map(Vec::len) else {
        return Err(TorexError::InvalidFan("no points".into()));
    };
    if points.iter().any(|p| p.len() != d) {
        return Err(TorexError::InvalidFan("points of different lengths".into()));
    }
    if n > MAX_RAYS {
        return Err(TorexError::TooManyRays(n));
    }
    let pts: Vec<Vec<Rat>> = points.iter().map(|p| int_to_rat(p)).collect();
    if !origin_interior(&pts, d) {
        return Err(TorexError::OriginNotInterior);
    }
    if let Some(i) = (0..n).find(|&i| !is_vertex(&pts, i)) {
        return Err(TorexError::NotSimplicial(format!("point {i} is not a vertex of the hull")));
    }
    match d {
        1 => StackyFan::new(
            1,
            points.to_vec(),
            (0..n).map(RaySet::singleton).collect(),
            false,
        ),
        2 => {
            // input order is kept; cones follow the hull around
            let cyc = clockwise_order(points);
            let cones = (0..n)
                .map(|i| RaySet::from_indices([cyc[i], cyc[(i + 1) % n]]))
                .collect();
            let fan = StackyFan::new(2, points.to_vec(), cones, false)?;
            debug_assert_eq!(convex_hull_2d(&pts).len(), n);
            Ok(fan)
        }
        _ => {
            let mut cones = Vec::new();
            for combo in crate::geometry::combinations(n, d) {
                // hyperplane a·x = 1 through the points, if they are independent
                let m = RatMatrix::from_rows(combo.iter().map(|&i| pts[i].clone()).collect());
                if rational_rank(&m) < d {
                    continue;
                }
                let a = solve_rational(&m, &vec![rat(1); d]).expect("independent rows");
                let mut on = 0;
                let mut beyond = false;
                for p in &pts {
                    let v = dot(&a, p);
                    if v == rat(1) {
                        on += 1;
                    } else if v > rat(1) {
                        beyond = true;
                        break;
                    }
                }
                if beyond {
                    continue;
                }
                if on > d {
                    return Err(TorexError::NotSimplicial(format!(
                        "facet through {combo:?} contains {on} points"
                    )));
                }
                cones.push(RaySet::from_indices(combo));
            }
            StackyFan::new(d, points.to_vec(), cones, true)
        }
    }
}

/// Determinant by exact elimination.
pub fn determinant(m: &RatMatrix) -> Rat {
    assert_eq!(m.rows(), m.cols());
    let n = m.rows();
    let mut a = m.clone();
    let mut det = rat(1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[(i, c)].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            a.swap_rows(p, c);
            det = -det;
        }
        let piv = a[(c, c)].clone();
        det *= &piv;
        for i in c + 1..n {
            if a[(i, c)].is_zero() {
                continue;
            }
            let f = &a[(i, c)] / &piv;
            for j in c..n {
                let t = &f * &a[(c, j)];
                a[(i, j)] -= t;
            }
        }
    }
    det
}

// some u with u·(p_j - p_i) < 0 for every j != i
fn is_vertex(pts: &[Vec<Rat>], i: usize) -> bool {
    let rows: Vec<(Vec<Rat>, Rat, bool)> = pts
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != i)
        .map(|(_, p)| {
            let a = p.iter().zip(&pts[i]).map(|(x, y)| x - y).collect();
            (a, Rat::zero(), true)
        })
        .collect();
    FmSystem::from_rational(pts[i].len(), &rows).feasible()
}

// a supporting functional at p_i exists; the centroid is interior when the
// points span, so normalize by u·(p_i - c) ≥ 1
fn on_boundary(pts: &[Vec<Rat>], i: usize) -> bool {
    let d = pts[i].len();
    let nr = rat(pts.len() as i64);
    let c: Vec<Rat> = (0..d)
        .map(|k| pts.iter().fold(Rat::zero(), |a, p| a + &p[k]) / &nr)
        .collect();
    let mut rows: Vec<(Vec<Rat>, Rat, bool)> = pts
        .iter()
        .map(|p| (p.iter().zip(&pts[i]).map(|(x, y)| x - y).collect(), Rat::zero(), false))
        .collect();
    rows.push((c.iter().zip(&pts[i]).map(|(x, y)| x - y).collect(), rat(-1), false));
    FmSystem::from_rational(d, &rows).feasible()
}

// points span and 0 = Σ λ_j p_j with every λ_j > 0
fn origin_interior(pts: &[Vec<Rat>], d: usize) -> bool {
    if pts.is_empty() || rational_rank(&RatMatrix::from_rows(pts.to_vec())) < d {
        return false;
    }
    // λ_j ≥ 1 after scaling; equalities Σ λ_j p_j = 0
    let n = pts.len();
    let eq = RatMatrix::from_rows((0..d).map(|k| pts.iter().map(|p| p[k].clone()).collect()).collect());
    let rows: Vec<(Vec<Rat>, Rat, bool)> = (0..n)
        .map(|j| {
            let mut a = vec![Rat::zero(); n];
            a[j] = rat(-1);
            (a, rat(-1), false)
        })
        .collect();
    crate::geometry::feasible_with_equalities(&eq, &vec![Rat::zero(); d], &rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn rs(v: &[usize]) -> RaySet {
        RaySet::from_indices(v.iter().copied())
    }

    #[test]
    fn fixtures_are_valid() {
        for (name, fan) in fixtures::all() {
            assert!(fan.validate().is_empty(), "{name}: {:?}", fan.validate());
        }
    }

    #[test]
    fn missing_cone_is_incomplete() {
        let fan = StackyFan::from_parts(
            2,
            fixtures::p2().rays.clone(),
            vec![rs(&[0, 1]), rs(&[1, 2])],
            false,
        )
        .unwrap();
        let diags = fan.validate();
        assert!(diags.iter().any(|d| matches!(d, Diagnostic::RidgeCount { .. })));
    }

    #[test]
    fn dependent_rays_are_non_simplicial() {
        let rays = vec![
            vec![BigInt::from(1), BigInt::from(0)],
            vec![BigInt::from(2), BigInt::from(0)],
            vec![BigInt::from(-1), BigInt::from(-1)],
        ];
        let fan = StackyFan::from_parts(2, rays, vec![rs(&[0, 1]), rs(&[1, 2]), rs(&[2, 0])], false)
            .unwrap();
        assert!(fan
            .validate()
            .iter()
            .any(|d| matches!(d, Diagnostic::NonSimplicial { .. })));
    }

    #[test]
    fn double_cover_is_rejected() {
        // consecutive cones turn by about 144 degrees, winding twice
        let rays: Vec<Vec<BigInt>> = [(1, 0), (-4, 3), (1, -3), (1, 3), (-4, -3)]
            .iter()
            .map(|&(a, b)| vec![BigInt::from(a), BigInt::from(b)])
            .collect();
        let cones = (0..5).map(|i| rs(&[i, (i + 1) % 5])).collect();
        let fan = StackyFan::from_parts(2, rays, cones, false).unwrap();
        assert_eq!(fan.validate(), vec![Diagnostic::CoveringDegree { degree: 2 }]);
    }

    #[test]
    fn classification() {
        assert_eq!(fixtures::pentagon().classify().unwrap(), FanClass::Fano);
        let nef = face_fan_like(&[(1, 0), (1, 1), (0, 1), (-1, 1), (-1, -1), (1, -1)]);
        // (1,0) is the midpoint of the edge (1,1)-(1,-1)
        assert_eq!(nef.classify().unwrap(), FanClass::NefFano);
        let neither = face_fan_like(&[(3, 0), (1, 1), (0, 3), (-3, 0), (0, -3)]);
        assert_eq!(neither.classify().unwrap(), FanClass::Neither);
    }

    fn face_fan_like(p: &[(i64, i64)]) -> StackyFan {
        // counter-clockwise input: reverse for a clockwise listing
        let rays: Vec<Vec<BigInt>> = p
            .iter()
            .rev()
            .map(|&(a, b)| vec![BigInt::from(a), BigInt::from(b)])
            .collect();
        let n = rays.len();
        StackyFan::new(2, rays, (0..n).map(|i| rs(&[i, (i + 1) % n])).collect(), false).unwrap()
    }

    #[test]
    fn face_fans() {
        let pent = fixtures::pentagon();
        let f = face_fan_from_points(&pent.rays).unwrap();
        assert_eq!(f.max_cones.len(), 5);
        assert_eq!(f.rays, pent.rays);
        let line = face_fan_from_points(&[vec![BigInt::from(3)], vec![BigInt::from(-2)]]).unwrap();
        assert_eq!(line.max_cones, vec![rs(&[0]), rs(&[1])]);
        let sq = face_fan_from_points(&fixtures::p1xp1().rays).unwrap();
        assert_eq!(sq.max_cones.len(), 4);
        let off = face_fan_from_points(&[vec![BigInt::from(1)], vec![BigInt::from(2)]]);
        assert!(matches!(off, Err(TorexError::OriginNotInterior)));
    }

    #[test]
    fn face_fan_keeps_input_order() {
        let pts: Vec<Vec<BigInt>> = [(0, 1), (-1, 0), (0, -1), (1, 0), (1, 1)]
            .iter()
            .map(|&(a, b)| vec![BigInt::from(a), BigInt::from(b)])
            .collect();
        let f = face_fan_from_points(&pts).unwrap();
        assert_eq!(f.rays, pts);
        assert!(f.ensure_valid().is_ok());
        assert!(!f.is_clockwise());
        assert!(f.is_face(rs(&[0, 4])));
        let (cw, _) = f.to_clockwise().unwrap();
        assert!(cw.is_clockwise());
        assert_eq!(cw.rays[0], pts[0]);
    }

    #[test]
    fn face_fan_of_octahedron() {
        let mut pts = Vec::new();
        for k in 0..3 {
            for s in [1i64, -1] {
                let mut v = vec![BigInt::from(0); 3];
                v[k] = BigInt::from(s);
                pts.push(v);
            }
        }
        let f = face_fan_from_points(&pts).unwrap();
        assert_eq!(f.max_cones.len(), 8);
        assert_eq!(f.normalized_volume().unwrap(), rat(8));
    }

    #[test]
    fn supp_and_c_complexes() {
        let p2 = fixtures::p2();
        let z = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(p2.supp_complex(&z(&[0, 0, 0])).unwrap().faces.len(), 7);
        assert_eq!(p2.supp_complex(&z(&[-1, -1, -1])).unwrap().faces.len(), 1);
        let s = p2.supp_complex(&z(&[1, -1, -1])).unwrap();
        assert_eq!(s.faces, [RaySet::EMPTY, rs(&[0])].into_iter().collect());
        let d = fixtures::p1xp1();
        let c = d.c_complex(rs(&[0, 2]));
        assert_eq!(c.faces.len(), 3);
        assert!(p2.supp_complex(&z(&[0])).is_err());
    }

    #[test]
    fn minimal_nonfaces_examples() {
        assert_eq!(fixtures::p2().minimal_nonfaces(), vec![rs(&[0, 1, 2])]);
        assert_eq!(fixtures::p1xp1().minimal_nonfaces(), vec![rs(&[0, 2]), rs(&[1, 3])]);
        let pent = fixtures::pentagon().minimal_nonfaces();
        assert_eq!(pent.len(), 5);
        assert!(pent.iter().all(|r| r.len() == 2));
    }

    #[test]
    fn volumes() {
        assert_eq!(fixtures::p2().normalized_volume().unwrap(), rat(3));
        assert_eq!(fixtures::weighted_line().normalized_volume().unwrap(), rat(5));
        assert_eq!(fixtures::pentagon().normalized_volume().unwrap(), rat(5));
    }
}
