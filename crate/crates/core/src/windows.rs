//! Window polytopes in `Pic_R`: the rank-1 degree segment, the rank-2
//! parallelogram and, for surfaces, the zonotopes `Q`, `P̂` and the window
//! `P`. Generic shifts and class enumeration in shifted windows.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bigjson;
use crate::cohomology::non_acyclic_subsets;
use crate::complex::RaySet;
use crate::error::{Result, TorexError};
use crate::exactlin::{dot, rat, rat_frac, GroupElement, Rat, RatMatrix};
use crate::fan::{FanClass, StackyFan};
use crate::geometry::{
    convex_cyclic_check, feasible_with_equalities, lattice_points_in_box, witness_with_equalities,
    zonotope_facets, zonotope_vertices, Facet, FacetLabel, HPolyhedron, Zonotope, ZonotopeMode,
};
use crate::picard::{alpha_functional, f_functional, pic_hat, PicHat, PicardGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowKind {
    Rank1,
    Rank2,
    DelPezzo,
}

impl fmt::Display for WindowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WindowKind::Rank1 => "rank1",
            WindowKind::Rank2 => "rank2",
            WindowKind::DelPezzo => "delpezzo",
        })
    }
}

impl FromStr for WindowKind {
    type Err = TorexError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rank1" => Ok(WindowKind::Rank1),
            "rank2" => Ok(WindowKind::Rank2),
            "delpezzo" => Ok(WindowKind::DelPezzo),
            _ => Err(TorexError::InvalidArgument(format!("unknown window kind {s:?}"))),
        }
    }
}

impl WindowKind {
    /// The construction that applies to `fan`, preferring the lowest rank.
    pub fn for_fan(fan: &StackyFan) -> Result<Self> {
        match (fan.rank(), fan.d) {
            (1, _) => Ok(WindowKind::Rank1),
            (2, _) => Ok(WindowKind::Rank2),
            (_, 2) => Ok(WindowKind::DelPezzo),
            (rank, dim) => Err(TorexError::UnsupportedShape { rank, dim }),
        }
    }
}

/// The vectors `t_i = v_i - v_{i-1}`, weights `φ` and the points `t̂_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HatT {
    #[serde(with = "bigjson::int_rows")]
    pub t_vectors: Vec<Vec<BigInt>>,
    #[serde(with = "bigjson::rat_vec")]
    pub phi: Vec<Rat>,
    #[serde(with = "bigjson::rat_rows")]
    pub that: Vec<Vec<Rat>>,
}

impl HatT {
    pub fn n(&self) -> usize {
        self.that.len()
    }

    /// `Ê_{[a,b)} = t̂_b - t̂_a`.
    pub fn arc_sum(&self, a: usize, b: usize) -> Vec<Rat> {
        sub(&self.that[b % self.n()], &self.that[a % self.n()])
    }
}

/// What the window looks like beyond the `|f| ≤ ½` slab.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HatPart {
    /// Closed degree segment `[lo, hi]`.
    Degree {
        #[serde(with = "bigjson::rat")]
        lo: Rat,
        #[serde(with = "bigjson::rat")]
        hi: Rat,
    },
    /// `|α(x)| ≤ bound`.
    Alpha {
        #[serde(with = "bigjson::vec")]
        alpha: Vec<BigInt>,
        #[serde(with = "bigjson::rat_vec")]
        covector: Vec<Rat>,
        #[serde(with = "bigjson::rat")]
        bound: Rat,
    },
    /// Preimage of `½P̂`.
    HalfPHat { hat: HatT, p_hat: Zonotope },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowP {
    pub kind: WindowKind,
    /// Covector of `f` in free coordinates.
    #[serde(with = "bigjson::rat_vec")]
    pub f: Vec<Rat>,
    #[serde(with = "bigjson::rat")]
    pub f_bound: Rat,
    /// The same body as a zonotope, used for bounding boxes and scaling.
    pub zonotope: Zonotope,
    pub polytope: HPolyhedron,
    pub facets: Vec<Facet>,
    pub hat_part: HatPart,
}

impl WindowP {
    pub fn dim(&self) -> usize {
        self.zonotope.dim
    }

    pub fn center(&self) -> &[Rat] {
        &self.zonotope.center
    }

    /// Scaled by `lambda` about its own center.
    pub fn scaled(&self, lambda: &Rat) -> Result<WindowP> {
        let z = &self.zonotope;
        let scaled = Zonotope::new(
            z.center.clone(),
            z.generators.iter().map(|g| g.iter().map(|x| x * lambda).collect()).collect(),
            z.mode,
        )?;
        let facets = zonotope_facets(&scaled)?;
        Ok(WindowP {
            polytope: HPolyhedron {
                dim: scaled.dim,
                ineqs: facets.iter().map(Facet::halfspace).collect(),
            },
            facets,
            zonotope: scaled,
            f_bound: &self.f_bound * lambda,
            ..self.clone()
        })
    }

    /// Lattice points of the closed body `p + window`, with a flag for
    /// points on the boundary.
    pub fn lattice_points(&self, p: &[Rat]) -> Vec<(Vec<BigInt>, bool)> {
        let (lo, hi) = self.zonotope.translate(p).integer_box();
        let shifted = self.polytope.shift(p);
        lattice_points_in_box(&shifted, &lo, &hi, false)
            .into_iter()
            .map(|x| {
                let xr: Vec<Rat> = x.iter().map(|v| Rat::from_integer(v.clone())).collect();
                let boundary = shifted.ineqs.iter().any(|h| h.slack(&xr).is_zero());
                (x, boundary)
            })
            .collect()
    }
}

fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn add(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn scale(a: &[Rat], c: &Rat) -> Vec<Rat> {
    a.iter().map(|x| x * c).collect()
}

fn zero_vec(k: usize) -> Vec<Rat> {
    vec![Rat::zero(); k]
}

fn surface_checks(fan: &StackyFan) -> Result<()> {
    if fan.d != 2 {
        return Err(TorexError::NotDimTwo(fan.d));
    }
    if fan.classify()? != FanClass::Fano {
        return Err(TorexError::NotFano);
    }
    if !fan.is_clockwise() {
        return Err(TorexError::InvalidFan("rays must be listed clockwise".into()));
    }
    Ok(())
}

fn f_covector(pic: &PicardGroup) -> Result<Vec<Rat>> {
    pic.functional_from_values(&f_functional(pic.fan())?)
}

/// `Q = Σ[0, Ê_i]`, centered at 0 since `Σ Ê_i = 0`.
pub fn build_q(pic: &PicardGroup) -> Result<Zonotope> {
    surface_checks(pic.fan())?;
    let hat = pic_hat(pic)?;
    Zonotope::new(zero_vec(hat.dim()), hat.e_hats(pic), ZonotopeMode::Segment)
}

/// Default weights `φ_i ∝ det(v_i, v_{i-1})`.
pub fn default_phi(fan: &StackyFan) -> Vec<Rat> {
    let n = fan.n();
    let dets: Vec<Rat> = (0..n)
        .map(|i| {
            let a = &fan.rays[i];
            let b = &fan.rays[(i + n - 1) % n];
            Rat::from_integer(&a[0] * &b[1] - &a[1] * &b[0])
        })
        .collect();
    let total: Rat = dets.iter().sum();
    dets.into_iter().map(|x| x / &total).collect()
}

/// Solves for `t̂` and returns it with `P̂ = Σ[-t̂_i, t̂_i]`.
pub fn build_p_hat(pic: &PicardGroup, phi: Option<&[Rat]>) -> Result<(HatT, Zonotope)> {
    let fan = pic.fan();
    surface_checks(fan)?;
    let hat = pic_hat(pic)?;
    let n = fan.n();
    let phi: Vec<Rat> = match phi {
        Some(p) if p.len() != n => {
            return Err(TorexError::LengthMismatch {
                expected: n,
                found: p.len(),
            })
        }
        Some(p) => {
            if p.iter().any(|x| !x.is_positive()) {
                return Err(TorexError::PhiNotConvex);
            }
            let total: Rat = p.iter().sum();
            p.iter().map(|x| x / &total).collect()
        }
        None => default_phi(fan),
    };
    if phi.iter().any(|x| !x.is_positive()) {
        return Err(TorexError::PhiNotConvex);
    }
    let t_vectors: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let prev = &fan.rays[(i + n - 1) % n];
            fan.rays[i].iter().zip(prev).map(|(a, b)| a - b).collect()
        })
        .collect();
    let scaled: Vec<Vec<Rat>> = t_vectors
        .iter()
        .zip(&phi)
        .map(|(t, w)| t.iter().map(|x| Rat::from_integer(x.clone()) / w).collect())
        .collect();
    if !convex_cyclic_check(&scaled) {
        return Err(TorexError::PhiNotConvex);
    }
    // t̂_i = c + Σ_{j<i} Ê_j with c fixed by Σ φ_i t̂_i = 0
    let e = hat.e_hats(pic);
    let m = hat.dim();
    let mut partial = Vec::with_capacity(n);
    let mut acc = zero_vec(m);
    for ei in &e {
        partial.push(acc.clone());
        acc = add(&acc, ei);
    }
    let mut c = zero_vec(m);
    for (s, w) in partial.iter().zip(&phi) {
        c = sub(&c, &scale(s, w));
    }
    let that: Vec<Vec<Rat>> = partial.iter().map(|s| add(&c, s)).collect();
    let z = Zonotope::new(zero_vec(m), that.clone(), ZonotopeMode::Symmetric)?;
    Ok((
        HatT {
            t_vectors,
            phi,
            that,
        },
        z,
    ))
}

/// A facet label `[i1,j1) ∪ [i2,j2)` with `i1, j1, i2, j2` in cyclic order.
/// The facet of `P̂` it names has `t̂_{j1}, t̂_{j2}` on the positive side and
/// `t̂_{i1}, t̂_{i2}` on the negative side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CrossingLabel {
    pub i1: usize,
    pub j1: usize,
    pub i2: usize,
    pub j2: usize,
}

/// Indices `a, a+1, …, b-1` modulo `n`.
pub fn arc(a: usize, b: usize, n: usize) -> RaySet {
    let mut s = RaySet::EMPTY;
    let mut i = a % n;
    while i != b % n {
        s.insert(i);
        i = (i + 1) % n;
    }
    s
}

/// Maximal cyclic runs of `set` as half-open arcs `[i, j)`, sorted by start.
pub fn arcs(set: RaySet, n: usize) -> Vec<(usize, usize)> {
    if set.is_empty() || set == RaySet::full(n) {
        return Vec::new();
    }
    let mut out = Vec::new();
    for i in set.iter() {
        if set.contains((i + n - 1) % n) {
            continue;
        }
        let mut j = (i + 1) % n;
        while set.contains(j) {
            j = (j + 1) % n;
        }
        out.push((i, j));
    }
    out
}

impl CrossingLabel {
    /// `I = [i1,j1) ∪ [i2,j2)`.
    pub fn subset(&self, n: usize) -> RaySet {
        arc(self.i1, self.j1, n).union(arc(self.i2, self.j2, n))
    }

    /// The label of the opposite facet; its subset is the complement.
    pub fn opposite(&self) -> CrossingLabel {
        CrossingLabel {
            i1: self.j1,
            j1: self.i2,
            i2: self.j2,
            j2: self.i1,
        }
    }

    /// The pair `(I, complement of I)`.
    pub fn pair(&self, n: usize) -> (RaySet, RaySet) {
        let i = self.subset(n);
        (i, i.complement(n))
    }

    pub fn facet_label(&self) -> FacetLabel {
        let mut pos = vec![self.j1, self.j2];
        let mut neg = vec![self.i1, self.i2];
        pos.sort_unstable();
        neg.sort_unstable();
        FacetLabel { pos, neg }
    }

    /// Inverse of [`facet_label`](Self::facet_label); `None` unless the
    /// label has two alternating positive and negative indices.
    pub fn from_facet_label(l: &FacetLabel) -> Option<CrossingLabel> {
        if l.pos.len() != 2 || l.neg.len() != 2 {
            return None;
        }
        let mut q: Vec<usize> = l.pos.iter().chain(&l.neg).copied().collect();
        q.sort_unstable();
        q.dedup();
        if q.len() != 4 {
            return None;
        }
        let neg0 = l.neg.contains(&q[0]);
        let alternates = (0..4).all(|k| l.neg.contains(&q[k]) == ((k % 2 == 0) == neg0));
        if !alternates {
            return None;
        }
        Some(if neg0 {
            CrossingLabel {
                i1: q[0],
                j1: q[1],
                i2: q[2],
                j2: q[3],
            }
        } else {
            CrossingLabel {
                i1: q[1],
                j1: q[2],
                i2: q[3],
                j2: q[0],
            }
        })
    }
}

/// Ordered pairs of crossing diagonals of the `n`-gon: two labels for each
/// 4-subset of vertices.
pub fn crossing_diagonal_facets(n: usize) -> Vec<CrossingLabel> {
    let mut out = Vec::new();
    if n < 4 {
        return out;
    }
    for q in crate::geometry::combinations(n, 4) {
        out.push(CrossingLabel {
            i1: q[0],
            j1: q[1],
            i2: q[2],
            j2: q[3],
        });
        out.push(CrossingLabel {
            i1: q[1],
            j1: q[2],
            i2: q[3],
            j2: q[0],
        });
    }
    out
}

/// Separating functional for one forbidden-cone image.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Separation {
    pub subset: RaySet,
    #[serde(with = "bigjson::rat_vec")]
    pub functional: Vec<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MidpointReport {
    pub q_vertices: Vec<RaySet>,
    pub p_hat_facets: Vec<CrossingLabel>,
    pub separations: Vec<Separation>,
}

fn fail<T>(msg: String) -> Result<T> {
    Err(TorexError::CertificateFailure(msg))
}

/// Some `u` with `u·t̂_j > 0` on `pos`, `u·t̂_i < 0` on `neg`, `u·t̂ = 0`
/// elsewhere; strictness controlled by `strict`, and `u·target = 1` when a
/// target is given.
fn face_normal(
    gens: &[Vec<Rat>],
    pos: &[usize],
    neg: &[usize],
    strict: bool,
    target: Option<&[Rat]>,
) -> Option<Vec<Rat>> {
    let m = gens[0].len();
    let mut eq = Vec::new();
    let mut eq_b = Vec::new();
    let mut rows = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        if pos.contains(&i) {
            rows.push((scale(g, &rat(-1)), Rat::zero(), strict));
        } else if neg.contains(&i) {
            rows.push((g.clone(), Rat::zero(), strict));
        } else {
            eq.push(g.clone());
            eq_b.push(Rat::zero());
        }
    }
    if let Some(t) = target {
        eq.push(t.to_vec());
        eq_b.push(rat(1));
    }
    let a = if eq.is_empty() {
        RatMatrix::zeros(0, m)
    } else {
        RatMatrix::from_rows(eq)
    };
    if target.is_some() {
        witness_with_equalities(&a, &eq_b, &rows)
    } else if feasible_with_equalities(&a, &eq_b, &rows) {
        Some(Vec::new())
    } else {
        None
    }
}

/// Checks the midpoint relations between `Q` and `P̂`, containment `Q ⊆ P̂`,
/// and that the interior of `P̂` misses the image of every forbidden cone
/// with nonempty proper subset.
pub fn midpoint_certificate(pic: &PicardGroup, q: &Zonotope, p_hat: &Zonotope) -> Result<MidpointReport> {
    let fan = pic.fan();
    surface_checks(fan)?;
    let n = fan.n();
    let that = &p_hat.generators;
    let e = &q.generators;
    if that.len() != n || e.len() != n {
        return fail("generator count differs from the number of rays".into());
    }
    let e_sum = |s: RaySet| -> Vec<Rat> {
        let mut acc = zero_vec(q.dim);
        for i in s.iter() {
            acc = add(&acc, &e[i]);
        }
        acc
    };
    let midpoint = |pos: &[usize], neg: &[usize]| -> Vec<Rat> {
        let mut acc = p_hat.center.clone();
        for &j in pos {
            acc = add(&acc, &that[j]);
        }
        for &i in neg {
            acc = sub(&acc, &that[i]);
        }
        acc
    };

    // (a) vertices of Q are midpoints of faces of P̂
    let mut q_vertices = Vec::new();
    for (point, signs) in zonotope_vertices(q)? {
        let i = RaySet::from_indices((0..n).filter(|&j| signs[j] > 0));
        let pieces = arcs(i, n);
        if fan.c_complex(i).components() < 2 || pieces.len() < 2 {
            return fail(format!("vertex {i} of Q has a connected C_I"));
        }
        let pos: Vec<usize> = pieces.iter().map(|&(_, j)| j).collect();
        let neg: Vec<usize> = pieces.iter().map(|&(i, _)| i).collect();
        if midpoint(&pos, &neg) != point || e_sum(i) != point {
            return fail(format!("vertex {i} of Q is not the midpoint of its face of P̂"));
        }
        if face_normal(that, &pos, &neg, true, None).is_none() {
            return fail(format!("no face of P̂ with label {i}"));
        }
        q_vertices.push(i);
    }
    let disconnected: BTreeSet<RaySet> = RaySet::full(n)
        .subsets()
        .filter(|&s| !s.is_empty() && s != RaySet::full(n) && fan.c_complex(s).components() >= 2)
        .collect();
    if disconnected != q_vertices.iter().copied().collect() {
        return fail("vertices of Q differ from subsets with disconnected C_I".into());
    }

    // (b) facet midpoints of P̂ are exactly the two-arc subsets
    let mut labels = Vec::new();
    let mut seen = BTreeSet::new();
    for facet in zonotope_facets(p_hat)? {
        let l = facet.label.clone().expect("zonotope facets are labeled");
        let Some(c) = CrossingLabel::from_facet_label(&l) else {
            return fail(format!("facet of P̂ with label {l:?} is not a crossing"));
        };
        let i = c.subset(n);
        if midpoint(&l.pos, &l.neg) != e_sum(i) {
            return fail(format!("midpoint of facet {l:?} is not Ê_{i}"));
        }
        if !seen.insert(i) {
            return fail(format!("two facets of P̂ share the subset {i}"));
        }
        labels.push(c);
    }
    let two_arc: BTreeSet<RaySet> = RaySet::full(n)
        .subsets()
        .filter(|&s| arcs(s, n).len() == 2)
        .collect();
    if seen != two_arc {
        return fail("facet midpoints of P̂ miss some two-arc subsets".into());
    }

    // (c) Q ⊆ P̂
    let hp = p_hat.to_hpolyhedron()?;
    for i in &q_vertices {
        if !hp.contains(&e_sum(*i), false) {
            return fail(format!("vertex {i} of Q lies outside P̂"));
        }
    }

    // (d) a functional separating int P̂ from each forbidden-cone image
    let mut separations = Vec::new();
    for i in non_acyclic_subsets(fan)? {
        if i.is_empty() || i == RaySet::full(n) {
            continue;
        }
        let pieces = arcs(i, n);
        let pos: Vec<usize> = pieces.iter().map(|&(_, j)| j).collect();
        let neg: Vec<usize> = pieces.iter().map(|&(i, _)| i).collect();
        let apex = e_sum(i);
        let Some(u) = face_normal(that, &pos, &neg, false, Some(&apex)) else {
            return fail(format!("no supporting face of P̂ at Ê_{i}"));
        };
        let level = dot(&u, &apex);
        let cone_ok = (0..n).all(|j| {
            let s = dot(&u, &e[j]);
            if i.contains(j) {
                !s.is_negative()
            } else {
                !s.is_positive()
            }
        });
        if !cone_ok || p_hat.support(&u) > level || !level.is_positive() {
            return fail(format!("forbidden cone {i} meets the interior of P̂"));
        }
        separations.push(Separation {
            subset: i,
            functional: u,
        });
    }
    Ok(MidpointReport {
        q_vertices,
        p_hat_facets: labels,
        separations,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MovingLemmaResult {
    pub ok: bool,
    pub witness: Option<String>,
}

impl MovingLemmaResult {
    fn failed(msg: String) -> Self {
        MovingLemmaResult {
            ok: false,
            witness: Some(msg),
        }
    }
}

/// Shifts of the facet `label` of `P̂` by `-2Ê_{[i1,j1)}`, `-2Ê_{[i2,j2)}`,
/// `2Ê_{[j1,i2)}` and `2Ê_{[j2,i1)}` land in the interior, and the shift by
/// `-2Ê_I` carries it onto the opposite facet. Relative interiors are
/// sampled by the midpoint and the vertices contracted by 1%.
pub fn moving_lemma_check(p_hat: &Zonotope, label: &CrossingLabel) -> Result<MovingLemmaResult> {
    Ok(moving_lemma_with(&FacetTable::new(p_hat)?, label))
}

/// The check for every crossing label, sharing one facet computation.
pub fn moving_lemma_check_all(p_hat: &Zonotope) -> Result<Vec<(CrossingLabel, MovingLemmaResult)>> {
    let table = FacetTable::new(p_hat)?;
    Ok(crossing_diagonal_facets(p_hat.generators.len())
        .into_iter()
        .map(|l| {
            let r = moving_lemma_with(&table, &l);
            (l, r)
        })
        .collect())
}

/// Facets of a zonotope evaluated on points `center + Σ c_g g / 100`:
/// `values[f][g]` is a positive multiple of `u_f·g`, `bounds[f]` the same
/// multiple of the support above the center.
struct FacetTable {
    labels: Vec<FacetLabel>,
    values: Vec<Vec<BigInt>>,
    bounds: Vec<BigInt>,
}

const SAMPLE_SCALE: i64 = 100;

impl FacetTable {
    fn new(z: &Zonotope) -> Result<Self> {
        let facets = zonotope_facets(z)?;
        let mut labels = Vec::with_capacity(facets.len());
        let mut values = Vec::with_capacity(facets.len());
        let mut bounds = Vec::with_capacity(facets.len());
        for f in facets {
            let row: Vec<Rat> = z.generators.iter().map(|g| dot(&f.normal, g)).collect();
            let bound = z.support(&f.normal) - dot(&f.normal, &z.center);
            let den = row
                .iter()
                .chain(std::iter::once(&bound))
                .fold(BigInt::one(), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
            let int = |x: &Rat| (x * Rat::from_integer(den.clone())).to_integer();
            values.push(row.iter().map(int).collect());
            bounds.push(int(&bound) * SAMPLE_SCALE);
            labels.push(f.label.expect("zonotope facets carry labels"));
        }
        Ok(Self { labels, values, bounds })
    }

    fn index(&self, l: &FacetLabel) -> Option<usize> {
        self.labels.iter().position(|x| x == l)
    }

    fn value(&self, f: usize, c: &[i64]) -> BigInt {
        self.values[f].iter().zip(c).filter(|(_, &x)| x != 0).map(|(v, &x)| v * x).sum()
    }

    fn contains(&self, c: &[i64], strict: bool) -> bool {
        (0..self.labels.len()).all(|f| {
            let v = self.value(f, c);
            if strict {
                v < self.bounds[f]
            } else {
                v <= self.bounds[f]
            }
        })
    }
}

fn moving_lemma_with(table: &FacetTable, label: &CrossingLabel) -> MovingLemmaResult {
    let n = table.values.first().map_or(0, Vec::len);
    let (Some(facet), Some(opposite)) = (
        table.index(&label.facet_label()),
        table.index(&label.opposite().facet_label()),
    ) else {
        return MovingLemmaResult::failed(format!("{label:?} and its opposite are not both facets"));
    };
    let l = &table.labels[facet];
    let mut mid = vec![0i64; n];
    for &j in &l.pos {
        mid[j] = SAMPLE_SCALE;
    }
    for &i in &l.neg {
        mid[i] = -SAMPLE_SCALE;
    }
    let free: Vec<usize> = (0..n).filter(|g| !l.pos.contains(g) && !l.neg.contains(g)).collect();
    let shrunk = SAMPLE_SCALE - 1;
    let mut samples = vec![mid.clone()];
    let mut vertices = vec![mid.clone()];
    for mask in 0u64..(1u64 << free.len()) {
        let mut v = mid.clone();
        let mut s = mid.clone();
        for (b, &g) in free.iter().enumerate() {
            let sign = if mask >> b & 1 == 1 { 1 } else { -1 };
            v[g] = sign * SAMPLE_SCALE;
            s[g] = sign * shrunk;
        }
        samples.push(s);
        vertices.push(v);
    }
    let arc = |a: usize, b: usize, k: i64| -> Vec<i64> {
        // k·Ê_{[a,b)} = k·(t̂_b - t̂_a)
        let mut c = vec![0i64; n];
        c[b % n] += k * SAMPLE_SCALE;
        c[a % n] -= k * SAMPLE_SCALE;
        c
    };
    let shifts = [
        ("-2E[i1,j1)", arc(label.i1, label.j1, -2)),
        ("-2E[i2,j2)", arc(label.i2, label.j2, -2)),
        ("2E[j1,i2)", arc(label.j1, label.i2, 2)),
        ("2E[j2,i1)", arc(label.j2, label.i1, 2)),
    ];
    let plus = |a: &[i64], b: &[i64]| -> Vec<i64> { a.iter().zip(b).map(|(x, y)| x + y).collect() };
    for (name, s) in &shifts {
        if samples.iter().any(|x| !table.contains(&plus(x, s), true)) {
            return MovingLemmaResult::failed(format!("{label:?}: shift {name} leaves the interior"));
        }
    }
    // -2Ê_I = -2·(midpoint - center)
    let full: Vec<i64> = mid.iter().map(|x| -2 * x).collect();
    for v in &vertices {
        let w = plus(v, &full);
        if table.value(opposite, &w) != table.bounds[opposite] || !table.contains(&w, false) {
            return MovingLemmaResult::failed(format!("{label:?}: shift by -2E_I misses the opposite facet"));
        }
    }
    MovingLemmaResult {
        ok: true,
        witness: None,
    }
}

fn window_from_zonotope(kind: WindowKind, f: Vec<Rat>, zonotope: Zonotope, hat_part: HatPart) -> Result<WindowP> {
    let facets = zonotope_facets(&zonotope)?;
    Ok(WindowP {
        kind,
        f,
        f_bound: rat_frac(1, 2),
        polytope: HPolyhedron {
            dim: zonotope.dim,
            ineqs: facets.iter().map(Facet::halfspace).collect(),
        },
        facets,
        zonotope,
        hat_part,
    })
}

fn mismatch<T>(kind: WindowKind, reason: String) -> Result<T> {
    Err(TorexError::KindMismatch {
        requested: kind.to_string(),
        reason,
    })
}

/// Builds the window of the requested kind.
pub fn build_window(pic: &PicardGroup, kind: WindowKind) -> Result<WindowP> {
    let fan = pic.fan();
    let k = pic.k();
    match kind {
        WindowKind::Rank1 => {
            if k != 1 {
                return mismatch(kind, format!("Picard rank is {k}"));
            }
            let deg_k = Rat::from_integer(pic.canonical_class().free[0].clone());
            let half = rat_frac(1, 2);
            let lo = &deg_k + &half;
            let hi = half.clone();
            let center = vec![(&lo + &hi) / rat(2)];
            let gen = vec![(&hi - &lo) / rat(2)];
            let z = Zonotope::new(center, vec![gen], ZonotopeMode::Symmetric)?;
            let f = vec![Rat::one() / -deg_k];
            window_from_zonotope(kind, f, z, HatPart::Degree { lo, hi })
        }
        WindowKind::Rank2 => {
            if k != 2 {
                return mismatch(kind, format!("Picard rank is {k}"));
            }
            let alpha = alpha_functional(fan)?;
            let f = f_covector(pic)?;
            let values: Vec<Rat> = alpha.iter().map(|a| Rat::from_integer(a.clone())).collect();
            let psi = pic.functional_from_values(&values)?;
            let bound: Rat = values.iter().filter(|a| a.is_positive()).sum::<Rat>() / rat(2);
            let m = RatMatrix::from_rows(vec![f.clone(), psi.clone()]);
            let g1 = crate::exactlin::solve_rational(&m, &[rat_frac(1, 2), Rat::zero()])
                .ok_or_else(|| TorexError::InvalidFan("f and α are dependent".into()))?;
            let g2 = crate::exactlin::solve_rational(&m, &[Rat::zero(), bound.clone()])
                .ok_or_else(|| TorexError::InvalidFan("f and α are dependent".into()))?;
            let z = Zonotope::new(zero_vec(2), vec![g1, g2], ZonotopeMode::Symmetric)?;
            window_from_zonotope(
                kind,
                f,
                z,
                HatPart::Alpha {
                    alpha,
                    covector: psi,
                    bound,
                },
            )
        }
        WindowKind::DelPezzo => {
            if fan.d != 2 {
                return mismatch(kind, format!("dimension is {}", fan.d));
            }
            if k < 2 {
                return mismatch(kind, format!("Picard rank is {k}"));
            }
            let (hat, p_hat) = build_p_hat(pic, None)?;
            let f = f_covector(pic)?;
            let ph: PicHat = pic_hat(pic)?;
            let half = rat_frac(1, 2);
            let mut gens: Vec<Vec<Rat>> =
                hat.that.iter().map(|t| scale(&ph.lift_into_kernel(t, &f), &half)).collect();
            gens.push(scale(&ph.kappa, &half));
            let z = Zonotope::new(zero_vec(k), gens, ZonotopeMode::Symmetric)?;
            window_from_zonotope(kind, f, z, HatPart::HalfPHat { hat, p_hat })
        }
    }
}

/// A shift `p` with no lattice point on the boundary of `p + window`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericShift {
    #[serde(with = "bigjson::rat_vec")]
    pub p: Vec<Rat>,
    pub seed: u64,
    pub attempts: usize,
    /// Lattice points of the closed shifted window checked against every facet.
    pub points_checked: usize,
}

pub const SHIFT_ATTEMPTS: usize = 64;
const SHIFT_DENOMINATOR: i64 = 997;

/// Number of lattice points of the closed shifted window, or `None` if one
/// lies on the boundary.
pub fn boundary_free(window: &WindowP, p: &[Rat]) -> Option<usize> {
    let pts = window.lattice_points(p);
    if pts.iter().any(|(_, b)| *b) {
        None
    } else {
        Some(pts.len())
    }
}

/// Draws small rational shifts from a seeded generator until one is
/// certified generic.
pub fn generic_shift(window: &WindowP, seed: u64) -> Result<GenericShift> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bound = SHIFT_DENOMINATOR / 4;
    for attempt in 1..=SHIFT_ATTEMPTS {
        let p: Vec<Rat> = (0..window.dim())
            .map(|_| rat_frac(rng.gen_range(-bound..=bound), SHIFT_DENOMINATOR))
            .collect();
        if let Some(points_checked) = boundary_free(window, &p) {
            return Ok(GenericShift {
                p,
                seed,
                attempts: attempt,
                points_checked,
            });
        }
    }
    Err(TorexError::GenericityFailure(SHIFT_ATTEMPTS))
}

fn expand_torsion(pic: &PicardGroup, free: Vec<Vec<BigInt>>) -> Vec<GroupElement> {
    let mut out: Vec<GroupElement> = free.iter().flat_map(|x| pic.classes_over(x)).collect();
    out.sort();
    out
}

/// Classes whose free part lies in `p + window`; errors if any lies on the
/// boundary.
pub fn classes_in(pic: &PicardGroup, p: &[Rat], window: &WindowP) -> Result<Vec<GroupElement>> {
    if p.len() != window.dim() {
        return Err(TorexError::DimensionMismatch {
            expected: window.dim(),
            found: p.len(),
        });
    }
    let pts = window.lattice_points(p);
    if pts.iter().any(|(_, b)| *b) {
        return Err(TorexError::NonGenericShift);
    }
    Ok(expand_torsion(pic, pts.into_iter().map(|(x, _)| x).collect()))
}

/// Classes in the closed body `p + window`, boundary included.
pub fn classes_in_closed(pic: &PicardGroup, p: &[Rat], window: &WindowP) -> Vec<GroupElement> {
    expand_torsion(pic, window.lattice_points(p).into_iter().map(|(x, _)| x).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::picard::picard_group;

    fn pic(fan: StackyFan) -> PicardGroup {
        picard_group(&fan).unwrap()
    }

    #[test]
    fn arcs_and_labels() {
        assert_eq!(arcs(RaySet::from_indices([0, 2]), 5), vec![(0, 1), (2, 3)]);
        assert_eq!(arcs(RaySet::from_indices([4, 0, 2]), 5), vec![(2, 3), (4, 1)]);
        assert!(arcs(RaySet::full(5), 5).is_empty());
        assert_eq!(crossing_diagonal_facets(3).len(), 0);
        assert_eq!(crossing_diagonal_facets(4).len(), 2);
        assert_eq!(crossing_diagonal_facets(5).len(), 10);
        for c in crossing_diagonal_facets(7) {
            assert_eq!(CrossingLabel::from_facet_label(&c.facet_label()), Some(c));
            assert_eq!(c.opposite().subset(7), c.subset(7).complement(7));
            assert_eq!(arcs(c.subset(7), 7).len(), 2);
        }
    }

    #[test]
    fn pentagon_q_and_p_hat() {
        let p = pic(fixtures::pentagon());
        let q = build_q(&p).unwrap();
        assert_eq!(zonotope_vertices(&q).unwrap().len(), 10);
        let (hat, ph) = build_p_hat(&p, None).unwrap();
        assert!(hat.phi.iter().all(|x| *x == rat_frac(1, 5)));
        let e = pic_hat(&p).unwrap().e_hats(&p);
        for i in 0..5 {
            assert_eq!(hat.arc_sum(i, i + 1), e[i]);
        }
        let mut s = zero_vec(2);
        for (t, w) in hat.that.iter().zip(&hat.phi) {
            s = add(&s, &scale(t, w));
        }
        assert!(s.iter().all(Zero::is_zero));
        assert_eq!(zonotope_facets(&ph).unwrap().len(), 10);
        let report = midpoint_certificate(&p, &q, &ph).unwrap();
        assert_eq!(report.q_vertices.len(), 10);
        assert_eq!(report.p_hat_facets.len(), 10);
        assert_eq!(report.separations.len(), 10);
        for c in crossing_diagonal_facets(5) {
            let r = moving_lemma_check(&ph, &c).unwrap();
            assert!(r.ok, "{:?}", r.witness);
        }
    }

    #[test]
    fn certificate_rejects_shrunken_p_hat() {
        let p = pic(fixtures::pentagon());
        let q = build_q(&p).unwrap();
        let (_, ph) = build_p_hat(&p, None).unwrap();
        let bad = ph.minkowski_scale(&rat_frac(9, 10));
        assert!(matches!(
            midpoint_certificate(&p, &q, &bad),
            Err(TorexError::CertificateFailure(_))
        ));
    }

    #[test]
    fn non_facet_label_fails_moving_check() {
        let p = pic(fixtures::pentagon());
        let (_, ph) = build_p_hat(&p, None).unwrap();
        let bogus = CrossingLabel {
            i1: 0,
            j1: 2,
            i2: 1,
            j2: 3,
        };
        assert!(!moving_lemma_check(&ph, &bogus).unwrap().ok);
    }

    #[test]
    fn hexagon_certificate() {
        let p = pic(fixtures::hexagon());
        let q = build_q(&p).unwrap();
        let (_, ph) = build_p_hat(&p, None).unwrap();
        let report = midpoint_certificate(&p, &q, &ph).unwrap();
        assert_eq!(report.p_hat_facets.len(), 30);
        for c in crossing_diagonal_facets(6) {
            assert!(moving_lemma_check(&ph, &c).unwrap().ok);
        }
    }

    #[test]
    fn bad_phi_is_rejected() {
        let p = pic(fixtures::pentagon());
        let phi = [rat(1), rat(1), rat(100), rat(1), rat(1)];
        assert_eq!(build_p_hat(&p, Some(&phi)).unwrap_err(), TorexError::PhiNotConvex);
        let neg = [rat(1), rat(1), rat(-1), rat(1), rat(1)];
        assert_eq!(build_p_hat(&p, Some(&neg)).unwrap_err(), TorexError::PhiNotConvex);
    }

    #[test]
    fn rank_one_windows() {
        let p = pic(fixtures::weighted_line());
        let w = build_window(&p, WindowKind::Rank1).unwrap();
        let classes = classes_in(&p, &[Rat::zero()], &w).unwrap();
        let degs: Vec<i64> = classes.iter().map(|c| i64::try_from(&c.free[0]).unwrap()).collect();
        assert_eq!(degs, vec![-4, -3, -2, -1, 0]);

        let t = pic(fixtures::torsion_line());
        let w = build_window(&t, WindowKind::Rank1).unwrap();
        let s = generic_shift(&w, 0).unwrap();
        assert_eq!(classes_in(&t, &s.p, &w).unwrap().len(), 4);

        let c = pic(fixtures::p2());
        let w = build_window(&c, WindowKind::Rank1).unwrap();
        let s = generic_shift(&w, 0).unwrap();
        assert_eq!(classes_in(&c, &s.p, &w).unwrap().len(), 3);
    }

    #[test]
    fn rank_two_parallelogram() {
        let p = pic(fixtures::p1xp1());
        let w = build_window(&p, WindowKind::Rank2).unwrap();
        assert_eq!(w.facets.len(), 4);
        // product coordinates (m, n) = m E_0 + n E_1
        let to_free = |m: i64, n: i64| {
            let x = p.class_of_i64(&[m, n, 0, 0]).free;
            x.iter().map(|v| Rat::from_integer(v.clone())).collect::<Vec<_>>()
        };
        for m in -4..=4 {
            for n in -4..=4 {
                let inside = (m + n).abs() <= 2 && (m - n).abs() <= 1;
                assert_eq!(w.polytope.contains(&to_free(m, n), false), inside, "{m} {n}");
            }
        }
        assert!(matches!(classes_in(&p, &[Rat::zero(), Rat::zero()], &w), Err(TorexError::NonGenericShift)));
        let s = generic_shift(&w, 0).unwrap();
        assert_eq!(classes_in(&p, &s.p, &w).unwrap().len(), 4);
        assert!(matches!(build_window(&p, WindowKind::Rank1), Err(TorexError::KindMismatch { .. })));
    }

    #[test]
    fn pentagon_window() {
        let p = pic(fixtures::pentagon());
        let w = build_window(&p, WindowKind::DelPezzo).unwrap();
        assert_eq!(w.facets.len(), 12);
        let s = generic_shift(&w, 0).unwrap();
        assert_eq!(classes_in(&p, &s.p, &w).unwrap().len(), 5);
    }

    #[test]
    fn counterclockwise_fan_is_rejected() {
        let p = pic(fixtures::p2());
        assert!(matches!(build_q(&p), Err(TorexError::InvalidFan(_))));
    }
}
