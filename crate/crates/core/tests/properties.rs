use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use torex_core::cohomology::CohomologyEngine;
use torex_core::collections::{build_collection, closure, closure_window, euler_alternating_sum, koszul_moves, replay};
use torex_core::exactlin::{rat_frac, Rat};
use torex_core::fixtures;
use torex_core::geometry::{zonotope_facets, HPolyhedron};
use torex_core::windows::{build_p_hat, build_q, crossing_diagonal_facets, CrossingLabel};
use torex_core::{PicardGroup, StackyFan};

fn fixture(i: usize) -> StackyFan {
    let all = fixtures::all();
    all[i % all.len()].1.clone()
}

fn engine(fan: &StackyFan) -> CohomologyEngine {
    CohomologyEngine::new(&PicardGroup::new(fan).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn class_map_is_additive(which in 0usize..8, a in prop::collection::vec(-5i64..5, 6), b in prop::collection::vec(-5i64..5, 6)) {
        let fan = fixture(which);
        let pic = PicardGroup::new(&fan).unwrap();
        let n = fan.n();
        let sum: Vec<i64> = a[..n].iter().zip(&b[..n]).map(|(x, y)| x + y).collect();
        prop_assert_eq!(pic.class_of_i64(&sum), pic.add(&pic.class_of_i64(&a[..n]), &pic.class_of_i64(&b[..n])));
    }

    #[test]
    fn serre_duality(which in 0usize..8, r in prop::collection::vec(-3i64..3, 6)) {
        let fan = fixture(which);
        let e = engine(&fan);
        let pic = e.pic();
        let l = pic.class_of_i64(&r[..fan.n()]);
        let dual = pic.sub(&pic.canonical_class(), &l);
        let h = e.cohomology(&l).unwrap().dims;
        let hd = e.cohomology(&dual).unwrap().dims;
        let d = fan.d;
        for p in 0..=d {
            prop_assert_eq!(h[p], hd[d - p]);
        }
    }

    #[test]
    fn strongly_acyclic_is_acyclic(which in 0usize..8, r in prop::collection::vec(-4i64..4, 6)) {
        let fan = fixture(which);
        let e = engine(&fan);
        let l = e.pic().class_of_i64(&r[..fan.n()]);
        if e.is_strongly_acyclic_class(&l) {
            prop_assert!(e.cohomology(&l).unwrap().is_acyclic());
            prop_assert!(e.is_acyclic(&l).unwrap());
        }
        prop_assert_eq!(e.is_acyclic(&l).unwrap(), e.cohomology(&l).unwrap().is_acyclic());
    }

    #[test]
    fn shifting_a_polyhedron_shifts_its_points(x in prop::collection::vec(-20i64..20, 2), p in prop::collection::vec(-20i64..20, 2)) {
        let mut h = HPolyhedron::new(2);
        h.push_slab(&[Rat::from_integer(1.into()), Rat::from_integer(2.into())], &rat_frac(-7, 2), &rat_frac(9, 1)).unwrap();
        h.push_slab(&[Rat::from_integer(3.into()), Rat::from_integer((-1).into())], &rat_frac(-4, 1), &rat_frac(11, 3)).unwrap();
        let xr: Vec<Rat> = x.iter().map(|&v| rat_frac(v, 1)).collect();
        let pr: Vec<Rat> = p.iter().map(|&v| rat_frac(v, 3)).collect();
        let moved: Vec<Rat> = xr.iter().zip(&pr).map(|(a, b)| a + b).collect();
        prop_assert_eq!(h.contains(&xr, false), h.shift(&pr).contains(&moved, false));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn facet_labels_biject_with_crossings(n in 4usize..=7, seed in 0u64..1000) {
        let fan = fixtures::random_convex_polygon(n, seed, 3);
        let pic = PicardGroup::new(&fan).unwrap();
        let want: BTreeSet<CrossingLabel> = crossing_diagonal_facets(n).into_iter().collect();
        let (_, ph) = build_p_hat(&pic, None).unwrap();
        let q = build_q(&pic).unwrap();
        for z in [ph, q] {
            let got: BTreeSet<CrossingLabel> = zonotope_facets(&z)
                .unwrap()
                .iter()
                .map(|f| CrossingLabel::from_facet_label(f.label.as_ref().unwrap()).unwrap())
                .collect();
            prop_assert_eq!(&got, &want);
        }
    }
}

#[test]
fn koszul_alternating_sums_on_random_anchors() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (name, fan) in fixtures::all() {
        let e = engine(&fan);
        let moves = koszul_moves(&fan);
        for k in 0..50 {
            let r: Vec<i64> = (0..fan.n()).map(|_| rng.gen_range(-3..=3)).collect();
            let anchor = e.pic().class_of_i64(&r);
            let mv = &moves[k % moves.len()];
            assert!(mv.is_valid(&fan));
            assert_eq!(euler_alternating_sum(&e, mv, &anchor).unwrap(), 0, "{name} {r:?}");
        }
    }
}

#[test]
fn closure_is_deterministic_and_replayable() {
    for fan in [fixtures::p2(), fixtures::p1xp1(), fixtures::pentagon()] {
        let pic = PicardGroup::new(&fan).unwrap();
        let c = build_collection(&fan).unwrap();
        let w = closure_window(&c).unwrap();
        let a = closure(&pic, &c.classes, &w);
        let b = closure(&pic, &c.classes, &w);
        assert_eq!(a, b);
        assert_eq!(replay(&pic, &a).unwrap(), a.known());
        for g in &a.generations {
            assert!(a.moves[g.move_index].is_valid(&fan));
        }
    }
}
