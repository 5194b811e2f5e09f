//! Line-bundle cohomology from reduced homology of support complexes,
//! acyclicity, and forbidden cones.
//!
//! `H^p(L)` is the sum over representatives `r` of `L` of `h_{d-p}(Supp r)`,
//! where `h_k` is the homology of the augmented complex with the empty face
//! in degree 0. A representative with sign pattern `I = {i : r_i ≥ 0}` has
//! `Supp r = C_I`, so only the non-acyclic `I` matter.

mod parametric;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bigjson;
use crate::complex::{homology_dims, RaySet};
use crate::error::{Result, TorexError};
use crate::exactlin::{canonical_direction, dot, int_to_rat, nullspace, rat, rational_rank, GroupElement, Rat, RatMatrix};
use crate::fan::StackyFan;
use crate::geometry::fm::FmSystem;
use crate::geometry::{combinations, feasible_with_equalities, lattice_points, HPolyhedron};
use crate::picard::PicardGroup;

pub use crate::complex::homology_dims as simplicial_homology_dims;

/// Largest ray count accepted by the exhaustive subset scan.
pub const MAX_SCAN_RAYS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contribution {
    pub subset: RaySet,
    #[serde(with = "bigjson::vec")]
    pub w: Vec<BigInt>,
    /// Homology index `k`; contributes to `H^{d-k}`.
    pub degree: usize,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyTable {
    pub dims: Vec<usize>,
    pub contributions: Vec<Contribution>,
}

impl CohomologyTable {
    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(p, &h)| if p % 2 == 0 { h as i64 } else { -(h as i64) })
            .sum()
    }

    /// `h^1 = … = h^d = 0`.
    pub fn is_acyclic(&self) -> bool {
        self.dims.iter().skip(1).all(|&h| h == 0)
    }
}

/// `q_I + cone(+E_i for i ∈ I, -E_i for i ∉ I)` in free coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForbiddenCone {
    pub subset: RaySet,
    #[serde(with = "bigjson::rat_vec")]
    pub apex: Vec<Rat>,
    #[serde(with = "bigjson::rat_rows")]
    pub generators: Vec<Vec<Rat>>,
}

impl ForbiddenCone {
    /// Exact membership of a real point.
    pub fn contains(&self, x: &[Rat]) -> bool {
        let k = self.apex.len();
        let m = self.generators.len();
        // Σ λ_j g_j = x - apex, λ ≥ 0
        let eq = RatMatrix::from_rows(
            (0..k)
                .map(|r| self.generators.iter().map(|g| g[r].clone()).collect())
                .collect(),
        );
        let rhs: Vec<Rat> = x.iter().zip(&self.apex).map(|(a, b)| a - b).collect();
        let rows: Vec<(Vec<Rat>, Rat, bool)> = (0..m)
            .map(|j| {
                let mut a = vec![Rat::zero(); m];
                a[j] = rat(-1);
                (a, Rat::zero(), false)
            })
            .collect();
        if m == 0 {
            return rhs.iter().all(Zero::is_zero);
        }
        feasible_with_equalities(&eq, &rhs, &rows)
    }

    /// Facet inequalities `a·x ≥ b`, when the generators span the space.
    /// Each facet is spanned by `k - 1` independent generators.
    pub fn inequalities(&self) -> Option<Vec<(Vec<Rat>, Rat)>> {
        let k = self.apex.len();
        if rational_rank(&RatMatrix::from_rows(self.generators.clone())) < k {
            return None;
        }
        let mut out: Vec<(Vec<Rat>, Rat)> = Vec::new();
        for idx in combinations(self.generators.len(), k - 1) {
            let ker = if k == 1 {
                vec![vec![rat(1)]]
            } else {
                nullspace(&RatMatrix::from_rows(idx.iter().map(|&j| self.generators[j].clone()).collect()))
            };
            if ker.len() != 1 {
                continue;
            }
            let mut a = ker.into_iter().next().unwrap();
            let signs: Vec<Rat> = self.generators.iter().map(|g| dot(&a, g)).collect();
            if signs.iter().any(|s| s.is_positive()) && signs.iter().any(|s| s.is_negative()) {
                continue;
            }
            if signs.iter().any(|s| s.is_negative()) {
                a.iter_mut().for_each(|x| *x = -x.clone());
            }
            let a: Vec<Rat> = int_to_rat(&canonical_direction(&a));
            // canonical_direction may flip the sign
            let a = if self.generators.iter().any(|g| dot(&a, g).is_negative()) {
                a.iter().map(|x| -x).collect()
            } else {
                a
            };
            let b = dot(&a, &self.apex);
            if !out.iter().any(|(c, _)| *c == a) {
                out.push((a, b));
            }
        }
        Some(out)
    }
}

/// Every `I` (including `∅` and the full set) with `C_I` non-acyclic.
pub fn non_acyclic_subsets(fan: &StackyFan) -> Result<Vec<RaySet>> {
    Ok(scan(fan)?.into_iter().map(|(s, _)| s).collect())
}

fn scan(fan: &StackyFan) -> Result<Vec<(RaySet, Vec<usize>)>> {
    let n = fan.n();
    if n > MAX_SCAN_RAYS {
        return Err(TorexError::TooManyRays(n));
    }
    let out: Vec<(RaySet, Vec<usize>)> = (0u64..1 << n)
        .into_par_iter()
        .filter_map(|m| {
            let s = RaySet(m);
            let h = homology_dims(&fan.c_complex(s));
            h.iter().any(|&x| x > 0).then_some((s, h))
        })
        .collect();
    Ok(out)
}

#[derive(Clone, Debug)]
struct SubsetData {
    subset: RaySet,
    homology: Vec<usize>,
    template: Option<parametric::Template>,
}

/// Precomputed non-acyclic subsets and forbidden cones of one Picard group.
#[derive(Clone, Debug)]
pub struct CohomologyEngine {
    pic: PicardGroup,
    subsets: Vec<SubsetData>,
    cones: Vec<ForbiddenCone>,
    cone_rows: Vec<Option<Vec<(Vec<Rat>, Rat)>>>,
}

impl CohomologyEngine {
    pub fn new(pic: &PicardGroup) -> Result<Self> {
        let fan = pic.fan();
        let n = fan.n();
        let full = RaySet::full(n);
        let subsets: Vec<SubsetData> = scan(fan)?
            .into_iter()
            .map(|(subset, homology)| SubsetData {
                subset,
                homology,
                template: parametric::Template::new(&fan.rays, subset),
            })
            .collect();
        for s in &subsets {
            if !recession_is_trivial(fan, s.subset) {
                return Err(TorexError::NonProperConfiguration(s.subset.to_vec()));
            }
        }
        let cones: Vec<ForbiddenCone> = subsets
            .iter()
            .filter(|s| s.subset != full)
            .map(|s| forbidden_cone(pic, s.subset))
            .collect();
        let cone_rows = cones.iter().map(ForbiddenCone::inequalities).collect();
        Ok(Self {
            pic: pic.clone(),
            subsets,
            cones,
            cone_rows,
        })
    }

    pub fn pic(&self) -> &PicardGroup {
        &self.pic
    }

    pub fn non_acyclic(&self) -> Vec<RaySet> {
        self.subsets.iter().map(|s| s.subset).collect()
    }

    pub fn forbidden_cones(&self) -> &[ForbiddenCone] {
        &self.cones
    }

    fn representatives(&self, r0: &[BigInt], s: &SubsetData) -> Result<Vec<Vec<BigInt>>> {
        if let Some(pts) = s.template.as_ref().and_then(|t| t.points(r0)) {
            return Ok(pts);
        }
        self.representatives_exact(r0, s.subset)
    }

    /// Integer `w` with `r0 + ρ*(w)` of sign pattern exactly `I`.
    fn representatives_exact(&self, r0: &[BigInt], subset: RaySet) -> Result<Vec<Vec<BigInt>>> {
        let fan = self.pic.fan();
        let mut p = HPolyhedron::new(fan.d);
        for i in 0..fan.n() {
            let v = fan.ray_rat(i);
            let r = Rat::from_integer(r0[i].clone());
            if subset.contains(i) {
                // r_i + w·v_i ≥ 0
                p.push(v.iter().map(|x| -x).collect(), r)?;
            } else {
                // r_i + w·v_i ≤ -1
                p.push(v, -r - rat(1))?;
            }
        }
        lattice_points(&p).map_err(|_| TorexError::NonProperConfiguration(subset.to_vec()))
    }

    pub fn cohomology(&self, l: &GroupElement) -> Result<CohomologyTable> {
        self.pic.check_class(l)?;
        let d = self.pic.d();
        let r0 = self.pic.representative(l);
        let per: Vec<Result<Vec<Contribution>>> = self
            .subsets
            .par_iter()
            .map(|s| {
                let ws = self.representatives(&r0, s)?;
                let mut out = Vec::new();
                for w in ws {
                    for (k, &h) in s.homology.iter().enumerate() {
                        if h > 0 {
                            out.push(Contribution {
                                subset: s.subset,
                                w: w.clone(),
                                degree: k,
                                multiplicity: h,
                            });
                        }
                    }
                }
                Ok(out)
            })
            .collect();
        let mut dims = vec![0usize; d + 1];
        let mut contributions = Vec::new();
        for c in per {
            for c in c? {
                dims[d - c.degree] += c.multiplicity;
                contributions.push(c);
            }
        }
        Ok(CohomologyTable {
            dims,
            contributions,
        })
    }

    /// No representative has the sign pattern of a non-acyclic `I ≠ full`.
    pub fn is_acyclic(&self, l: &GroupElement) -> Result<bool> {
        self.pic.check_class(l)?;
        let full = RaySet::full(self.pic.n());
        let r0 = self.pic.representative(l);
        for s in self.subsets.iter().filter(|s| s.subset != full) {
            if !self.representatives(&r0, s)?.is_empty() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The real point lies in no forbidden cone.
    pub fn is_strongly_acyclic(&self, x: &[Rat]) -> bool {
        !self.cones.iter().zip(&self.cone_rows).any(|(c, rows)| match rows {
            Some(rows) => rows.iter().all(|(a, b)| dot(a, x) >= *b),
            None => c.contains(x),
        })
    }

    /// Strong acyclicity of a class, through its free coordinates.
    pub fn is_strongly_acyclic_class(&self, l: &GroupElement) -> bool {
        self.is_strongly_acyclic(&self.pic.real(l))
    }
}

fn forbidden_cone(pic: &PicardGroup, subset: RaySet) -> ForbiddenCone {
    let n = pic.n();
    let apex_vec: Vec<Rat> = (0..n)
        .map(|i| if subset.contains(i) { Rat::zero() } else { rat(-1) })
        .collect();
    let generators = (0..n)
        .map(|i| {
            let g = pic.generator(i);
            if subset.contains(i) {
                g
            } else {
                g.iter().map(|x| -x).collect()
            }
        })
        .collect();
    ForbiddenCone {
        subset,
        apex: pic.real_proj(&apex_vec),
        generators,
    }
}

// {w : w·v_i ≥ 0 on I, ≤ 0 off I} is {0}: no solution with w_j ≥ 1 or w_j ≤ -1
fn recession_is_trivial(fan: &StackyFan, subset: RaySet) -> bool {
    let d = fan.d;
    let base: Vec<(Vec<Rat>, Rat, bool)> = (0..fan.n())
        .map(|i| {
            let v = fan.ray_rat(i);
            let a = if subset.contains(i) { v.iter().map(|x| -x).collect() } else { v };
            (a, Rat::zero(), false)
        })
        .collect();
    for j in 0..d {
        for sign in [1i64, -1] {
            let mut rows = base.clone();
            let mut a = vec![Rat::zero(); d];
            a[j] = rat(-sign);
            rows.push((a, rat(-1), false));
            if FmSystem::from_rational(d, &rows).feasible() {
                return false;
            }
        }
    }
    true
}

pub fn cohomology(pic: &PicardGroup, l: &GroupElement) -> Result<CohomologyTable> {
    CohomologyEngine::new(pic)?.cohomology(l)
}

pub fn is_acyclic(pic: &PicardGroup, l: &GroupElement) -> Result<bool> {
    CohomologyEngine::new(pic)?.is_acyclic(l)
}

pub fn forbidden_cones(pic: &PicardGroup) -> Result<Vec<ForbiddenCone>> {
    Ok(CohomologyEngine::new(pic)?.cones)
}

pub fn is_strongly_acyclic(pic: &PicardGroup, x: &[Rat]) -> Result<bool> {
    Ok(CohomologyEngine::new(pic)?.is_strongly_acyclic(x))
}

/// `Ext^i(L1, L2) = H^i(L2 - L1)`.
pub fn ext(engine: &CohomologyEngine, l1: &GroupElement, l2: &GroupElement) -> Result<CohomologyTable> {
    engine.cohomology(&engine.pic().sub(l2, l1))
}
