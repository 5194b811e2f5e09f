//! Fixpoint of Koszul moves inside a bounded window of classes.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::koszul::{koszul_moves, KoszulMove};
use super::ExceptionalCollection;
use crate::bigjson;
use crate::error::{Result, TorexError};
use crate::exactlin::{rat, GroupElement, Rat};
use crate::picard::PicardGroup;
use crate::windows::{classes_in_closed, WindowP};

/// `p + window`, closed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureWindow {
    pub window: WindowP,
    #[serde(with = "bigjson::rat_vec")]
    pub p: Vec<Rat>,
}

impl ClosureWindow {
    pub fn classes(&self, pic: &PicardGroup) -> Vec<GroupElement> {
        classes_in_closed(pic, &self.p, &self.window)
    }
}

/// The collection's window scaled by 3 about its center, with the same shift.
pub fn closure_window(c: &ExceptionalCollection) -> Result<ClosureWindow> {
    Ok(ClosureWindow {
        window: c.window.scaled(&rat(3))?,
        p: c.shift.p.clone(),
    })
}

/// `class` follows from the other terms of `moves[move_index]` at `anchor`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derivation {
    pub class: GroupElement,
    pub move_index: usize,
    pub anchor: GroupElement,
    pub round: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureTrace {
    pub start: Vec<GroupElement>,
    pub moves: Vec<KoszulMove>,
    pub window: ClosureWindow,
    pub generations: Vec<Derivation>,
    pub rounds: usize,
    pub target_count: usize,
    pub complete: bool,
    pub missing: Vec<GroupElement>,
}

impl ClosureTrace {
    pub fn known(&self) -> BTreeSet<GroupElement> {
        self.start
            .iter()
            .cloned()
            .chain(self.generations.iter().map(|g| g.class.clone()))
            .collect()
    }
}

struct Instance {
    move_index: usize,
    anchor: GroupElement,
    terms: Vec<usize>,
}

/// Repeats rounds of "all terms but one known, the last one in the window"
/// until nothing changes. Within a round every instance sees the set from
/// the start of the round; ties go to the first instance in move/anchor
/// order.
pub fn closure(pic: &PicardGroup, start: &[GroupElement], w: &ClosureWindow) -> ClosureTrace {
    let moves = koszul_moves(pic.fan());
    let targets = w.classes(pic);
    let index: HashMap<&GroupElement, usize> = targets.iter().enumerate().map(|(i, c)| (c, i)).collect();

    let mut instances = Vec::new();
    for (mi, mv) in moves.iter().enumerate() {
        let offsets: Vec<GroupElement> = mv.terms(pic.n()).iter().map(|t| pic.class_of(&t.offset)).collect();
        let anchors: BTreeSet<GroupElement> = targets
            .iter()
            .flat_map(|t| offsets.iter().map(move |o| pic.sub(t, o)))
            .collect();
        for anchor in anchors {
            let ids: Option<Vec<usize>> = offsets
                .iter()
                .map(|o| index.get(&pic.add(&anchor, o)).copied())
                .collect();
            if let Some(terms) = ids {
                instances.push(Instance {
                    move_index: mi,
                    anchor,
                    terms,
                });
            }
        }
    }

    let mut known = vec![false; targets.len()];
    let mut start_in: Vec<GroupElement> = Vec::new();
    for c in start {
        if let Some(&i) = index.get(c) {
            if !known[i] {
                known[i] = true;
                start_in.push(c.clone());
            }
        }
    }
    let mut generations = Vec::new();
    let mut rounds = 0;
    loop {
        let found: Vec<(usize, usize)> = instances
            .par_iter()
            .enumerate()
            .filter_map(|(k, inst)| {
                let mut unknown = inst.terms.iter().filter(|&&t| !known[t]);
                let first = *unknown.next()?;
                unknown.next().is_none().then_some((first, k))
            })
            .collect();
        if found.is_empty() {
            break;
        }
        rounds += 1;
        let mut added = BTreeSet::new();
        for (t, k) in found {
            if added.insert(t) {
                let inst = &instances[k];
                generations.push(Derivation {
                    class: targets[t].clone(),
                    move_index: inst.move_index,
                    anchor: inst.anchor.clone(),
                    round: rounds,
                });
            }
        }
        for t in added {
            known[t] = true;
        }
    }
    let missing: Vec<GroupElement> = targets
        .iter()
        .zip(&known)
        .filter(|(_, &k)| !k)
        .map(|(c, _)| c.clone())
        .collect();
    ClosureTrace {
        start: start_in,
        moves,
        window: w.clone(),
        generations,
        rounds,
        target_count: targets.len(),
        complete: missing.is_empty() && !targets.is_empty(),
        missing,
    }
}

/// Re-derives the trace in order, checking every step.
pub fn replay(pic: &PicardGroup, trace: &ClosureTrace) -> Result<BTreeSet<GroupElement>> {
    let fan = pic.fan();
    let mut known: BTreeSet<GroupElement> = trace.start.iter().cloned().collect();
    let mut round_start = known.clone();
    let mut round = 0;
    for d in &trace.generations {
        if d.round != round {
            round = d.round;
            round_start = known.clone();
        }
        let mv = trace
            .moves
            .get(d.move_index)
            .ok_or_else(|| TorexError::CertificateFailure(format!("unknown move {}", d.move_index)))?;
        if !mv.is_valid(fan) {
            return Err(TorexError::CertificateFailure(format!("move {} has a common zero", d.move_index)));
        }
        let terms = mv.instance(pic, &d.anchor);
        let others_known = terms.iter().filter(|&t| t != &d.class).all(|t| round_start.contains(t));
        if !terms.contains(&d.class) || !others_known {
            return Err(TorexError::CertificateFailure(format!(
                "derivation of {:?} does not follow",
                d.class
            )));
        }
        known.insert(d.class.clone());
    }
    Ok(known)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collections::build_collection;
    use crate::fixtures;
    use crate::windows::{build_window, WindowKind};

    #[test]
    fn p2_closure_completes() {
        let fan = fixtures::p2();
        let pic = PicardGroup::new(&fan).unwrap();
        let c = build_collection(&fan).unwrap();
        // degrees -8..8: the segment [-2.5, 0.5] scaled about its center by 17/3
        let base = build_window(&pic, WindowKind::Rank1).unwrap();
        let w = ClosureWindow {
            window: base.scaled(&Rat::new(17.into(), 3.into())).unwrap(),
            p: vec![rat(1)],
        };
        assert_eq!(w.classes(&pic).len(), 17);
        let t = closure(&pic, &c.classes, &w);
        assert!(t.complete);
        assert_eq!(replay(&pic, &t).unwrap(), t.known());
    }

    #[test]
    fn empty_start_is_incomplete() {
        let fan = fixtures::p1xp1();
        let pic = PicardGroup::new(&fan).unwrap();
        let c = build_collection(&fan).unwrap();
        let w = closure_window(&c).unwrap();
        let t = closure(&pic, &[], &w);
        assert!(!t.complete);
        assert!(t.generations.is_empty());
    }

    #[test]
    fn fixtures_close_in_tripled_window() {
        for fan in [fixtures::p1xp1(), fixtures::pentagon(), fixtures::weighted_line()] {
            let pic = PicardGroup::new(&fan).unwrap();
            let c = build_collection(&fan).unwrap();
            let w = closure_window(&c).unwrap();
            let t = closure(&pic, &c.classes, &w);
            assert!(t.complete, "missing {:?}", t.missing);
            assert_eq!(replay(&pic, &t).unwrap(), t.known());
        }
    }
}
