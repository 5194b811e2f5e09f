//! Candidate collections from windows, their verification by exact
//! cohomology, Hom ordering, and the Koszul closure engine.

mod closure;
mod koszul;

pub use closure::{closure, closure_window, replay, ClosureTrace, ClosureWindow, Derivation};
pub use koszul::{euler_alternating_sum, koszul_moves, KoszulMove, MoveOrigin, MoveTerm};

use std::collections::{BTreeMap, BTreeSet};

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cohomology::CohomologyEngine;
use crate::error::{Result, TorexError};
use crate::exactlin::{dot, GroupElement, Rat};
use crate::fan::{FanClass, StackyFan};
use crate::picard::PicardGroup;
use crate::windows::{build_window, classes_in, generic_shift, GenericShift, WindowKind, WindowP};

/// Cohomology of one ordered pair `(L_a, L_b)`, i.e. of `L_b - L_a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairFailure {
    pub from: usize,
    pub to: usize,
    pub dims: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub passed: bool,
    /// `h0[a][b] = h⁰(L_b - L_a)`, the dimension of `Hom(L_a, L_b)`.
    pub h0: Vec<Vec<usize>>,
    /// Whether `L_b - L_a` avoids every forbidden cone (diagonal: `true`).
    pub strongly_acyclic: Vec<Vec<bool>>,
    pub failures: Vec<PairFailure>,
    /// Every strongly acyclic difference was found acyclic by the full
    /// computation.
    pub strong_implies_acyclic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalCollection {
    pub classes: Vec<GroupElement>,
    pub window: WindowP,
    pub shift: GenericShift,
    pub expected_count: usize,
}

impl ExceptionalCollection {
    pub fn count_check(&self) -> bool {
        self.classes.len() == self.expected_count
    }
}

/// `d! · Vol(Δ)`, the rank of K-theory.
pub fn expected_count(fan: &StackyFan) -> Result<usize> {
    let v = fan.normalized_volume()?;
    if !v.is_integer() {
        return Err(TorexError::NonIntegralCount(v.to_string()));
    }
    v.to_integer()
        .to_usize()
        .ok_or_else(|| TorexError::NonIntegralCount(v.to_string()))
}

/// Builds the collection with the shift drawn from seed 0.
pub fn build_collection(fan: &StackyFan) -> Result<ExceptionalCollection> {
    build_collection_seeded(fan, 0)
}

pub fn build_collection_seeded(fan: &StackyFan, seed: u64) -> Result<ExceptionalCollection> {
    build_collection_with(&PicardGroup::new(fan)?, seed)
}

/// Classes of `p + P` ordered by `f`, then lexicographically. A nonzero
/// effective class has `f > 0`, so every nonzero Hom goes forward.
pub fn build_collection_with(pic: &PicardGroup, seed: u64) -> Result<ExceptionalCollection> {
    let fan = pic.fan();
    let kind = WindowKind::for_fan(fan)?;
    if fan.classify()? != FanClass::Fano {
        return Err(TorexError::NotFano);
    }
    let expected = expected_count(fan)?;
    let window = build_window(pic, kind)?;
    let shift = generic_shift(&window, seed)?;
    let mut keyed: Vec<(Rat, GroupElement)> = classes_in(pic, &shift.p, &window)?
        .into_iter()
        .map(|c| (dot(&window.f, &pic.real(&c)), c))
        .collect();
    keyed.sort();
    Ok(ExceptionalCollection {
        classes: keyed.into_iter().map(|(_, c)| c).collect(),
        window,
        shift,
        expected_count: expected,
    })
}

/// Full cohomology of every ordered difference, plus strong acyclicity
/// computed independently.
pub fn verify_strong_exceptional(engine: &CohomologyEngine, classes: &[GroupElement]) -> Result<VerificationReport> {
    let pic = engine.pic();
    for c in classes {
        pic.check_class(c)?;
    }
    let distinct: BTreeSet<&GroupElement> = classes.iter().collect();
    if distinct.len() != classes.len() {
        return Err(TorexError::InvalidArgument("classes must be distinct".into()));
    }
    let m = classes.len();
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|a| (0..m).map(move |b| (a, b))).collect();
    let results: Vec<Result<(usize, usize, Vec<usize>, bool)>> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let diff = pic.sub(&classes[b], &classes[a]);
            if a == b {
                let mut dims = vec![0; pic.d() + 1];
                dims[0] = 1;
                return Ok((a, b, dims, true));
            }
            let table = engine.cohomology(&diff)?;
            Ok((a, b, table.dims, engine.is_strongly_acyclic_class(&diff)))
        })
        .collect();
    let mut h0 = vec![vec![0; m]; m];
    let mut strongly = vec![vec![false; m]; m];
    let mut failures = Vec::new();
    let mut strong_implies_acyclic = true;
    for r in results {
        let (a, b, dims, strong) = r?;
        h0[a][b] = dims[0];
        strongly[a][b] = strong;
        let acyclic = dims.iter().skip(1).all(|&h| h == 0);
        if strong && !acyclic {
            strong_implies_acyclic = false;
        }
        if !acyclic {
            failures.push(PairFailure { from: a, to: b, dims });
        }
    }
    Ok(VerificationReport {
        passed: failures.is_empty() && strong_implies_acyclic,
        h0,
        strongly_acyclic: strongly,
        failures,
        strong_implies_acyclic,
    })
}

/// Classes ordered so that nonzero Homs go forward.
pub fn hom_order(engine: &CohomologyEngine, classes: &[GroupElement]) -> Result<Vec<GroupElement>> {
    let report = verify_strong_exceptional(engine, classes)?;
    order_by_hom(classes, &report.h0)
}

/// Topological sort of `a → b` whenever `h0[a][b] > 0` (`a ≠ b`), ties broken
/// by the lexicographic order of the classes.
pub fn order_by_hom(classes: &[GroupElement], h0: &[Vec<usize>]) -> Result<Vec<GroupElement>> {
    let m = classes.len();
    for a in 0..m {
        for b in a + 1..m {
            if h0[a][b] > 0 && h0[b][a] > 0 {
                return Err(TorexError::HomCycle(a, b));
            }
        }
    }
    let mut indeg = vec![0usize; m];
    for a in 0..m {
        for b in 0..m {
            if a != b && h0[a][b] > 0 {
                indeg[b] += 1;
            }
        }
    }
    let mut ready: BTreeMap<&GroupElement, usize> = (0..m)
        .filter(|&i| indeg[i] == 0)
        .map(|i| (&classes[i], i))
        .collect();
    let mut out = Vec::with_capacity(m);
    while let Some((_, a)) = ready.pop_first() {
        out.push(classes[a].clone());
        for b in 0..m {
            if a != b && h0[a][b] > 0 {
                indeg[b] -= 1;
                if indeg[b] == 0 {
                    ready.insert(&classes[b], b);
                }
            }
        }
    }
    if out.len() < m {
        let a = (0..m).find(|&i| indeg[i] > 0).unwrap_or(0);
        let b = (0..m).find(|&j| j != a && h0[j][a] > 0).unwrap_or(a);
        return Err(TorexError::HomCycle(b, a));
    }
    Ok(out)
}

/// Degree of a rank-one class as `i64`, for display and tests.
pub fn degree(c: &GroupElement) -> Option<i64> {
    match c.free.as_slice() {
        [x] => x.to_i64(),
        _ => None,
    }
}
