//! Index sets of rays and simplicial complexes on them.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exactlin::{rat, rational_rank, RatMatrix};

/// Subset of ray indices `0..64` as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RaySet(pub u64);

pub const MAX_RAYS: usize = 64;

impl RaySet {
    pub const EMPTY: RaySet = RaySet(0);

    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_RAYS);
        if n == 64 {
            RaySet(u64::MAX)
        } else {
            RaySet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        RaySet(1 << i)
    }

    pub fn from_indices(idx: impl IntoIterator<Item = usize>) -> Self {
        RaySet(idx.into_iter().fold(0, |acc, i| acc | (1 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_RAYS && self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: RaySet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: RaySet) -> RaySet {
        RaySet(self.0 | other.0)
    }

    pub fn intersection(self, other: RaySet) -> RaySet {
        RaySet(self.0 & other.0)
    }

    pub fn minus(self, other: RaySet) -> RaySet {
        RaySet(self.0 & !other.0)
    }

    /// Complement inside `0..n`.
    pub fn complement(self, n: usize) -> RaySet {
        RaySet::full(n).minus(self)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..MAX_RAYS).filter(move |&i| self.contains(i))
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// All subsets, in increasing bitmask order.
    pub fn subsets(self) -> impl Iterator<Item = RaySet> {
        let m = self.0;
        let mut sub = 0u64;
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let out = RaySet(sub);
            if sub == m {
                done = true;
            } else {
                sub = (sub.wrapping_sub(m)) & m;
            }
            Some(out)
        })
    }
}

impl fmt::Debug for RaySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for RaySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl Serialize for RaySet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_vec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RaySet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        if let Some(&bad) = v.iter().find(|&&i| i >= MAX_RAYS) {
            return Err(serde::de::Error::custom(format!("ray index {bad} out of range")));
        }
        Ok(RaySet::from_indices(v))
    }
}

/// Downward-closed family of ray subsets, always containing the empty set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialComplexOnRays {
    pub n: usize,
    pub faces: BTreeSet<RaySet>,
}

impl SimplicialComplexOnRays {
    /// Closure of the given generating faces under subsets.
    pub fn generated_by(n: usize, gens: impl IntoIterator<Item = RaySet>) -> Self {
        let mut faces = BTreeSet::new();
        faces.insert(RaySet::EMPTY);
        for g in gens {
            if faces.contains(&g) {
                continue;
            }
            faces.extend(g.subsets());
        }
        Self { n, faces }
    }

    pub fn contains(&self, s: RaySet) -> bool {
        self.faces.contains(&s)
    }

    pub fn vertices(&self) -> RaySet {
        self.faces.iter().fold(RaySet::EMPTY, |acc, f| acc.union(*f))
    }

    /// Largest face size.
    pub fn max_face_size(&self) -> usize {
        self.faces.iter().map(|f| f.len()).max().unwrap_or(0)
    }

    /// Connected components of the vertex set (via edges).
    pub fn components(&self) -> usize {
        let verts = self.vertices().to_vec();
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for f in self.faces.iter().filter(|f| f.len() == 2) {
            let v = f.to_vec();
            let (a, b) = (find(&mut parent, v[0]), find(&mut parent, v[1]));
            parent[a] = b;
        }
        let roots: BTreeSet<usize> = verts.iter().map(|&v| find(&mut parent, v)).collect();
        roots.len()
    }
}

/// Rational homology of the augmented chain complex with a face `J` in
/// degree `|J|` and the empty face in degree 0. Entry `k` is `dim H̃_{k-1}`.
/// The output has length `max_face_size + 1`.
pub fn homology_dims(cx: &SimplicialComplexOnRays) -> Vec<usize> {
    let top = cx.max_face_size();
    let mut by_size: Vec<Vec<RaySet>> = vec![Vec::new(); top + 2];
    for f in &cx.faces {
        by_size[f.len()].push(*f);
    }
    // ranks[k] = rank of the boundary C_k -> C_{k-1}; ranks[0] = 0
    let mut ranks = vec![0usize; top + 2];
    for k in 1..=top {
        ranks[k] = boundary_rank(&by_size[k], &by_size[k - 1]);
    }
    (0..=top)
        .map(|k| by_size[k].len() - ranks[k] - ranks[k + 1])
        .collect()
}

fn boundary_rank(cells: &[RaySet], faces: &[RaySet]) -> usize {
    if cells.is_empty() || faces.is_empty() {
        return 0;
    }
    let mut m = RatMatrix::zeros(faces.len(), cells.len());
    for (j, c) in cells.iter().enumerate() {
        for (t, v) in c.iter().enumerate() {
            let mut f = *c;
            f.0 &= !(1 << v);
            let i = faces.binary_search(&f).expect("complex is downward closed");
            m[(i, j)] = rat(if t % 2 == 0 { 1 } else { -1 });
        }
    }
    rational_rank(&m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(v: &[usize]) -> RaySet {
        RaySet::from_indices(v.iter().copied())
    }

    #[test]
    fn subsets_enumerates_all() {
        let s: Vec<RaySet> = rs(&[0, 2]).subsets().collect();
        assert_eq!(s, vec![rs(&[]), rs(&[0]), rs(&[2]), rs(&[0, 2])]);
        assert_eq!(RaySet::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn empty_complex_has_h0() {
        let cx = SimplicialComplexOnRays::generated_by(3, []);
        assert_eq!(homology_dims(&cx), vec![1]);
    }

    #[test]
    fn triangle_boundary_is_a_circle() {
        let cx = SimplicialComplexOnRays::generated_by(3, [rs(&[0, 1]), rs(&[1, 2]), rs(&[0, 2])]);
        assert_eq!(homology_dims(&cx), vec![0, 0, 1]);
    }

    #[test]
    fn two_points() {
        let cx = SimplicialComplexOnRays::generated_by(4, [rs(&[0]), rs(&[2])]);
        assert_eq!(homology_dims(&cx), vec![0, 1]);
        assert_eq!(cx.components(), 2);
    }

    #[test]
    fn full_simplex_is_acyclic() {
        let cx = SimplicialComplexOnRays::generated_by(3, [rs(&[0, 1, 2])]);
        assert_eq!(homology_dims(&cx), vec![0, 0, 0, 0]);
    }
}
