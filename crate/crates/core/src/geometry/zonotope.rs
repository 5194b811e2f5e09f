use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::fm::FmSystem;
use super::{HPolyhedron, Halfspace};
use crate::bigjson;
use crate::error::{Result, TorexError};
use crate::exactlin::{canonical_direction, dot, nullspace, rational_rank, Rat, RatMatrix};

/// `Symmetric`: `center + Σ[-g, g]`. `Segment`: `center + Σ[0, g]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZonotopeMode {
    Symmetric,
    Segment,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Zonotope {
    pub dim: usize,
    #[serde(with = "bigjson::rat_vec")]
    pub center: Vec<Rat>,
    #[serde(with = "bigjson::rat_rows")]
    pub generators: Vec<Vec<Rat>>,
    pub mode: ZonotopeMode,
}

/// Generators on the positive and negative side of a facet normal.
/// Indices not listed are parallel to the facet.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FacetLabel {
    pub pos: Vec<usize>,
    pub neg: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Facet {
    #[serde(with = "bigjson::rat_vec")]
    pub normal: Vec<Rat>,
    #[serde(with = "bigjson::rat")]
    pub offset: Rat,
    pub label: Option<FacetLabel>,
}

impl Facet {
    pub fn halfspace(&self) -> Halfspace {
        Halfspace {
            normal: self.normal.clone(),
            offset: self.offset.clone(),
        }
    }

    /// Free generators (parallel to the facet) given the generator count.
    pub fn free_generators(&self, ngens: usize) -> Vec<usize> {
        let Some(l) = &self.label else {
            return Vec::new();
        };
        (0..ngens)
            .filter(|i| !l.pos.contains(i) && !l.neg.contains(i))
            .collect()
    }
}

impl Zonotope {
    pub fn new(center: Vec<Rat>, generators: Vec<Vec<Rat>>, mode: ZonotopeMode) -> Result<Self> {
        let dim = center.len();
        if let Some(g) = generators.iter().find(|g| g.len() != dim) {
            return Err(TorexError::DimensionMismatch {
                expected: dim,
                found: g.len(),
            });
        }
        Ok(Self {
            dim,
            center,
            generators,
            mode,
        })
    }

    pub fn minkowski_scale(&self, lambda: &Rat) -> Zonotope {
        Zonotope {
            dim: self.dim,
            center: self.center.iter().map(|x| x * lambda).collect(),
            generators: self
                .generators
                .iter()
                .map(|g| g.iter().map(|x| x * lambda).collect())
                .collect(),
            mode: self.mode,
        }
    }

    pub fn translate(&self, p: &[Rat]) -> Zonotope {
        Zonotope {
            center: self.center.iter().zip(p).map(|(a, b)| a + b).collect(),
            ..self.clone()
        }
    }

    /// Same body written as `center' + Σ[-g', g']`.
    pub fn to_symmetric(&self) -> Zonotope {
        match self.mode {
            ZonotopeMode::Symmetric => self.clone(),
            ZonotopeMode::Segment => {
                let half = Rat::new(BigInt::one(), BigInt::from(2));
                let mut center = self.center.clone();
                for g in &self.generators {
                    for (c, x) in center.iter_mut().zip(g) {
                        *c += x * &half;
                    }
                }
                Zonotope {
                    dim: self.dim,
                    center,
                    generators: self
                        .generators
                        .iter()
                        .map(|g| g.iter().map(|x| x * &half).collect())
                        .collect(),
                    mode: ZonotopeMode::Symmetric,
                }
            }
        }
    }

    /// `max { u·x : x ∈ Z }`.
    pub fn support(&self, u: &[Rat]) -> Rat {
        let mut s = dot(u, &self.center);
        for g in &self.generators {
            let ug = dot(u, g);
            match self.mode {
                ZonotopeMode::Symmetric => s += ug.abs(),
                ZonotopeMode::Segment => {
                    if ug.is_positive() {
                        s += ug
                    }
                }
            }
        }
        s
    }

    /// Integer bounding box `[floor(min), ceil(max)]` per coordinate.
    pub fn integer_box(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        let mut lo = Vec::with_capacity(self.dim);
        let mut hi = Vec::with_capacity(self.dim);
        for j in 0..self.dim {
            let mut e = vec![Rat::zero(); self.dim];
            e[j] = Rat::one();
            hi.push(self.support(&e).ceil().to_integer());
            e[j] = -Rat::one();
            lo.push((-self.support(&e)).floor().to_integer());
        }
        (lo, hi)
    }

    /// The point selected by a sign vector (`+1`, `-1` or `0` per generator).
    pub fn point_for_signs(&self, signs: &[i8]) -> Vec<Rat> {
        let mut x = self.center.clone();
        for (g, &s) in self.generators.iter().zip(signs) {
            let w = match (self.mode, s) {
                (_, 0) => continue,
                (ZonotopeMode::Symmetric, 1) => Rat::one(),
                (ZonotopeMode::Symmetric, _) => -Rat::one(),
                (ZonotopeMode::Segment, 1) => Rat::one(),
                (ZonotopeMode::Segment, _) => continue,
            };
            for (xi, gi) in x.iter_mut().zip(g) {
                *xi += gi * &w;
            }
        }
        x
    }

    pub fn to_hpolyhedron(&self) -> Result<HPolyhedron> {
        let facets = zonotope_facets(self)?;
        Ok(HPolyhedron {
            dim: self.dim,
            ineqs: facets.iter().map(Facet::halfspace).collect(),
        })
    }
}

/// Irredundant facets, sorted by normal. Normals are primitive integer
/// vectors; labels record the generator signs.
pub fn zonotope_facets(z: &Zonotope) -> Result<Vec<Facet>> {
    let dim = z.dim;
    let nonzero: Vec<usize> = (0..z.generators.len())
        .filter(|&i| z.generators[i].iter().any(|x| !x.is_zero()))
        .collect();
    let all = RatMatrix::from_rows(nonzero.iter().map(|&i| z.generators[i].clone()).collect());
    if dim == 0 || nonzero.is_empty() || rational_rank(&all) < dim {
        return Err(TorexError::DegenerateZonotope);
    }
    let mut normals: BTreeMap<Vec<BigInt>, ()> = BTreeMap::new();
    for combo in combinations(nonzero.len(), dim - 1) {
        let rows: Vec<Vec<Rat>> = combo.iter().map(|&c| z.generators[nonzero[c]].clone()).collect();
        let u = if rows.is_empty() {
            // dim 1: the only normal direction
            vec![Rat::one()]
        } else {
            let m = RatMatrix::from_rows(rows);
            let ns = nullspace(&m);
            if ns.len() != 1 {
                continue;
            }
            ns.into_iter().next().unwrap()
        };
        normals.insert(canonical_direction(&u), ());
    }
    let mut out = Vec::new();
    for n in normals.keys() {
        for sign in [1i64, -1] {
            let normal: Vec<Rat> = n.iter().map(|x| Rat::from_integer(x * sign)).collect();
            let offset = z.support(&normal);
            let mut pos = Vec::new();
            let mut neg = Vec::new();
            for (i, g) in z.generators.iter().enumerate() {
                let ug = dot(&normal, g);
                if ug.is_positive() {
                    pos.push(i);
                } else if ug.is_negative() {
                    neg.push(i);
                }
            }
            out.push(Facet {
                normal,
                offset,
                label: Some(FacetLabel { pos, neg }),
            });
        }
    }
    out.sort_by(|a, b| a.normal.cmp(&b.normal));
    Ok(out)
}

/// Vertices with their sign vectors, sorted lexicographically by point.
///
/// Sign prefixes are extended only while some direction `u` realizes them
/// strictly, so the search visits vertices rather than all sign patterns.
pub fn zonotope_vertices(z: &Zonotope) -> Result<Vec<(Vec<Rat>, Vec<i8>)>> {
    let _ = zonotope_facets(z)?;
    let ngen = z.generators.len();
    let mut out: Vec<(Vec<Rat>, Vec<i8>)> = Vec::new();
    let mut signs: Vec<i8> = Vec::with_capacity(ngen);
    vertex_dfs(z, &mut signs, &mut out);
    out.sort();
    out.dedup_by(|a, b| a.0 == b.0);
    Ok(out)
}

fn vertex_dfs(z: &Zonotope, signs: &mut Vec<i8>, out: &mut Vec<(Vec<Rat>, Vec<i8>)>) {
    let j = signs.len();
    if j == z.generators.len() {
        out.push((z.point_for_signs(signs), signs.clone()));
        return;
    }
    if z.generators[j].iter().all(Zero::is_zero) {
        signs.push(0);
        vertex_dfs(z, signs, out);
        signs.pop();
        return;
    }
    for s in [1i8, -1] {
        signs.push(s);
        if realizable(z, signs) {
            vertex_dfs(z, signs, out);
        }
        signs.pop();
    }
}

// some u with s_i (u·g_i) > 0 on every nonzero prefix generator
fn realizable(z: &Zonotope, signs: &[i8]) -> bool {
    let rows: Vec<(Vec<Rat>, Rat, bool)> = z
        .generators
        .iter()
        .zip(signs)
        .filter(|(_, &s)| s != 0)
        .map(|(g, &s)| {
            let a: Vec<Rat> = if s > 0 { g.iter().map(|x| -x).collect() } else { g.clone() };
            (a, Rat::zero(), true)
        })
        .collect();
    FmSystem::from_rational(z.dim, &rows).feasible()
}

/// All `r`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < r - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    rec(0, n, r, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{rat, rat_frac};
    use crate::geometry::convex_hull_2d;

    fn z2(gens: &[(i64, i64)], mode: ZonotopeMode) -> Zonotope {
        Zonotope::new(
            vec![rat(0), rat(0)],
            gens.iter().map(|&(a, b)| vec![rat(a), rat(b)]).collect(),
            mode,
        )
        .unwrap()
    }

    #[test]
    fn square_has_four_facets() {
        let z = z2(&[(1, 0), (0, 1)], ZonotopeMode::Symmetric);
        let f = zonotope_facets(&z).unwrap();
        assert_eq!(f.len(), 4);
        assert!(f.iter().all(|f| f.offset == rat(1)));
        assert_eq!(zonotope_vertices(&z).unwrap().len(), 4);
    }

    #[test]
    fn degenerate_is_rejected() {
        let z = z2(&[(1, 1), (2, 2)], ZonotopeMode::Symmetric);
        assert!(matches!(zonotope_facets(&z), Err(TorexError::DegenerateZonotope)));
    }

    #[test]
    fn vertices_match_brute_force_hull() {
        let z = z2(&[(1, 0), (0, 1), (1, 1), (2, -1), (1, 0)], ZonotopeMode::Segment);
        let verts: Vec<Vec<Rat>> = zonotope_vertices(&z).unwrap().into_iter().map(|v| v.0).collect();
        let mut all = Vec::new();
        for mask in 0u32..32 {
            let s: Vec<i8> = (0..5).map(|i| if mask >> i & 1 == 1 { 1 } else { -1 }).collect();
            all.push(z.point_for_signs(&s));
        }
        let mut hull = convex_hull_2d(&all);
        hull.sort();
        assert_eq!(verts, hull);
        // parallel generators merge into one edge direction
        assert_eq!(zonotope_facets(&z).unwrap().len(), 8);
    }

    #[test]
    fn segment_and_symmetric_agree() {
        let z = z2(&[(1, 0), (0, 1), (1, 1)], ZonotopeMode::Segment);
        let s = z.to_symmetric();
        assert_eq!(zonotope_facets(&z).unwrap().iter().map(|f| &f.offset).collect::<Vec<_>>(),
            zonotope_facets(&s).unwrap().iter().map(|f| &f.offset).collect::<Vec<_>>());
        let half = z.minkowski_scale(&rat_frac(1, 2));
        assert_eq!(half.generators[2], vec![rat_frac(1, 2), rat_frac(1, 2)]);
    }

    #[test]
    fn integer_box_covers() {
        let z = z2(&[(1, 0), (1, 2)], ZonotopeMode::Symmetric).translate(&[rat_frac(1, 3), rat(0)]);
        let (lo, hi) = z.integer_box();
        assert_eq!(lo, vec![BigInt::from(-2), BigInt::from(-2)]);
        assert_eq!(hi, vec![BigInt::from(3), BigInt::from(2)]);
    }
}
