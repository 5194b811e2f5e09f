//! Koszul complexes of sections without common zeros.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::cohomology::CohomologyEngine;
use crate::complex::RaySet;
use crate::error::Result;
use crate::exactlin::GroupElement;
use crate::fan::StackyFan;
use crate::picard::PicardGroup;
use crate::windows::{arc, crossing_diagonal_facets, CrossingLabel};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MoveOrigin {
    /// Full Koszul complex on a minimal non-face.
    MinimalNonFace,
    /// Two monomial sections `Π_{a∈A} x_a`, `Π_{b∈B} x_b` from a facet label.
    Arc { label: CrossingLabel },
}

/// One term `anchor - Σ_{g∈J} D_g` of a move.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveTerm {
    /// Chosen groups `J`.
    pub groups: Vec<usize>,
    /// Divisor offset `-Σ_{g∈J} D_g` in `Z^n`.
    #[serde(with = "crate::bigjson::vec")]
    pub offset: Vec<BigInt>,
}

/// Exact complex `0 → L(-Σ D_g) → … → ⊕ L(-D_g) → L → 0` for sections of
/// `O(D_g)`, `D_g = Σ_{i∈g} E_i`, with no common zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KoszulMove {
    pub groups: Vec<RaySet>,
    pub origin: MoveOrigin,
}

impl KoszulMove {
    pub fn support(&self) -> RaySet {
        self.groups.iter().fold(RaySet::EMPTY, |a, &g| a.union(g))
    }

    /// The sections have no common zero: every transversal of the groups is
    /// a non-face.
    pub fn is_valid(&self, fan: &StackyFan) -> bool {
        fn rec(fan: &StackyFan, groups: &[RaySet], chosen: RaySet) -> bool {
            match groups.split_first() {
                None => !fan.is_face(chosen),
                Some((g, rest)) => g.iter().all(|i| {
                    let mut c = chosen;
                    c.insert(i);
                    rec(fan, rest, c)
                }),
            }
        }
        let disjoint = self
            .groups
            .iter()
            .enumerate()
            .all(|(a, g)| self.groups[a + 1..].iter().all(|h| g.intersection(*h).is_empty()));
        disjoint && !self.groups.is_empty() && rec(fan, &self.groups, RaySet::EMPTY)
    }

    /// All `2^m` terms, ordered by the bitmask of `J`.
    pub fn terms(&self, n: usize) -> Vec<MoveTerm> {
        let m = self.groups.len();
        (0u64..(1 << m))
            .map(|mask| {
                let groups: Vec<usize> = (0..m).filter(|b| mask >> b & 1 == 1).collect();
                let mut offset = vec![BigInt::from(0); n];
                for &g in &groups {
                    for i in self.groups[g].iter() {
                        offset[i] -= 1;
                    }
                }
                MoveTerm { groups, offset }
            })
            .collect()
    }

    /// Classes `anchor - Σ_J D_g` in term order.
    pub fn instance(&self, pic: &PicardGroup, anchor: &GroupElement) -> Vec<GroupElement> {
        self.terms(pic.n())
            .iter()
            .map(|t| pic.add(anchor, &pic.class_of(&t.offset)))
            .collect()
    }
}

/// One full Koszul move per minimal non-face and, for surfaces, one
/// two-section move per facet label whose supports pass the non-face check.
/// Moves with the same groups are listed once.
pub fn koszul_moves(fan: &StackyFan) -> Vec<KoszulMove> {
    let n = fan.n();
    let mut seen: BTreeSet<Vec<RaySet>> = BTreeSet::new();
    let mut out = Vec::new();
    for r in fan.minimal_nonfaces() {
        let groups: Vec<RaySet> = r.iter().map(RaySet::singleton).collect();
        if seen.insert(groups.clone()) {
            out.push(KoszulMove {
                groups,
                origin: MoveOrigin::MinimalNonFace,
            });
        }
    }
    if fan.d == 2 && fan.is_clockwise() {
        for label in crossing_diagonal_facets(n) {
            let a = arc(label.j1, label.i2, n);
            let b = arc(label.j2, label.i1, n);
            let mut groups = vec![a, b];
            groups.sort();
            let mv = KoszulMove {
                groups: groups.clone(),
                origin: MoveOrigin::Arc { label },
            };
            if mv.is_valid(fan) && seen.insert(groups) {
                out.push(mv);
            }
        }
    }
    out
}

/// `Σ_J (-1)^{|J|} χ(anchor - Σ_J D_g)`, zero for an exact complex.
pub fn euler_alternating_sum(engine: &CohomologyEngine, mv: &KoszulMove, anchor: &GroupElement) -> Result<i64> {
    let pic = engine.pic();
    let mut total = 0i64;
    for (term, class) in mv.terms(pic.n()).iter().zip(mv.instance(pic, anchor)) {
        let chi = engine.cohomology(&class)?.euler_characteristic();
        total += if term.groups.len() % 2 == 0 { chi } else { -chi };
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn move_counts() {
        let p2 = koszul_moves(&fixtures::p2());
        assert_eq!(p2.len(), 1);
        assert_eq!(p2[0].support(), RaySet::from_indices([0, 1, 2]));
        assert_eq!(p2[0].terms(3).len(), 8);

        let q = koszul_moves(&fixtures::p1xp1());
        assert_eq!(q.len(), 2);
        assert!(q.iter().all(|m| m.terms(4).len() == 4));

        let fan = fixtures::pentagon();
        let e = koszul_moves(&fan);
        let pairs = e.iter().filter(|m| m.origin == MoveOrigin::MinimalNonFace).count();
        assert_eq!(pairs, 5);
        assert!(e.iter().all(|m| m.is_valid(&fan)));
        // labels whose two arcs are single rays repeat a pair move
        assert_eq!(e.len(), 10);
    }

    #[test]
    fn invalid_supports_are_detected() {
        let fan = fixtures::pentagon();
        let adjacent = KoszulMove {
            groups: vec![RaySet::singleton(0), RaySet::singleton(1)],
            origin: MoveOrigin::MinimalNonFace,
        };
        assert!(!adjacent.is_valid(&fan));
    }

    #[test]
    fn alternating_sums_vanish() {
        for fan in [fixtures::p2(), fixtures::p1xp1(), fixtures::pentagon(), fixtures::weighted_line()] {
            let pic = PicardGroup::new(&fan).unwrap();
            let engine = CohomologyEngine::new(&pic).unwrap();
            for mv in koszul_moves(&fan) {
                for a in [-2i64, 0, 1] {
                    let mut r = vec![0i64; fan.n()];
                    r[0] = a;
                    r[fan.n() - 1] = 1 - a;
                    let anchor = pic.class_of_i64(&r);
                    assert_eq!(euler_alternating_sum(&engine, &mv, &anchor).unwrap(), 0);
                }
            }
        }
    }
}
