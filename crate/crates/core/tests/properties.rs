use std::collections::BTreeSet;

use dynlang::algebra::{example_monoid, Element, FiniteMonoid};
use dynlang::dyck::{D1Engine, DkEngine};
use dynlang::dyck_range::DyckRange;
use dynlang::hierarchy::HierarchyRangeEval;
use dynlang::oracle;
use dynlang::starfree::StarFreeEval;
use dynlang::string_eq::{Side, StringEq};
use dynlang::{DynamicWord, Letter, RankedSet, Symbol, WorkMeter};
use proptest::prelude::*;

/// Toggles: an empty cell gets `sym`, an occupied one is cleared.
fn toggles(n: usize, syms: u32, len: usize) -> impl Strategy<Value = Vec<(usize, u32)>> {
    prop::collection::vec((0..n, 0..syms), 1..len)
}

fn apply_toggle(w: &mut DynamicWord, p: usize, s: u32) -> Letter {
    if w.get(p).unwrap().is_some() {
        w.reset(p).unwrap();
        None
    } else {
        w.set(p, Symbol(s)).unwrap();
        Some(Symbol(s))
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ranked_set_matches_btreeset(ops in prop::collection::vec((0..200usize, any::<bool>()), 1..300), probes in prop::collection::vec(0..200usize, 20)) {
        let mut s = RankedSet::new(200, WorkMeter::new());
        let mut b = BTreeSet::new();
        for (i, ins) in ops {
            if ins { s.insert(i).unwrap(); b.insert(i); } else { s.delete(i).unwrap(); b.remove(&i); }
        }
        prop_assert_eq!(s.elements(), b.iter().copied().collect::<Vec<_>>());
        for i in probes {
            prop_assert_eq!(s.succ(i).unwrap(), b.range(i + 1..).next().copied());
            prop_assert_eq!(s.pred(i).unwrap(), b.range(..i).next_back().copied());
        }
        for (k, &x) in b.iter().enumerate() {
            prop_assert_eq!(s.select(k + 1), Some(x));
        }
        s.check_invariants().unwrap();
    }

    #[test]
    fn hierarchy_matches_fold(eps in prop_oneof![Just(0.4), Just(0.5), Just(1.0)], ops in prop::collection::vec((0..81usize, 0..3u32, 0..81usize, 0..81usize), 1..200)) {
        let m = FiniteMonoid::cyclic_group(3);
        let mut h = HierarchyRangeEval::new(m.clone(), 81, eps, WorkMeter::new());
        let mut cells = vec![Element::IDENTITY; 81];
        for (i, x, a, b) in ops {
            h.set(i, Element(x)).unwrap();
            cells[i] = Element(x);
            let (l, r) = (a.min(b), a.max(b));
            prop_assert_eq!(h.range(l, r).unwrap(), oracle::monoid_fold(&m, &cells, l, r));
        }
        h.store().check_consistency().unwrap();
    }

    #[test]
    fn starfree_matches_fold(ops in prop::collection::vec((0..64usize, 0..6u32, 0..64usize, 0..64usize), 1..200)) {
        let m = example_monoid();
        let mut ev = StarFreeEval::new(m.clone(), 64, WorkMeter::new()).unwrap();
        let mut cells = vec![Element::IDENTITY; 64];
        for (i, x, a, b) in ops {
            ev.set(i, Element(x)).unwrap();
            cells[i] = Element(x);
            let (l, r) = (a.min(b), a.max(b));
            prop_assert_eq!(ev.range(l, r).unwrap(), oracle::monoid_fold(&m, &cells, l, r));
        }
        ev.check_invariants().unwrap();
    }

    #[test]
    fn string_equality_matches_snapshots(ops in prop::collection::vec((any::<bool>(), 0..32usize, 0..2u32), 1..200)) {
        let mut e = StringEq::new(32, WorkMeter::new());
        for (u, p, s) in ops {
            let side = if u { Side::U } else { Side::V };
            if e.get(side, p).unwrap().is_some() { e.reset(side, p).unwrap() } else { e.set(side, p, Symbol(s)).unwrap() }
            prop_assert_eq!(e.equals(), e.word(Side::U) == e.word(Side::V));
        }
        e.check_invariants().unwrap();
    }

    #[test]
    fn d1_matches_stack(ops in toggles(64, 2, 300)) {
        let mut d = D1Engine::new(64, WorkMeter::new());
        let mut w = DynamicWord::new(64);
        for (p, s) in ops {
            match apply_toggle(&mut w, p, s) {
                Some(sym) => d.set(p, sym).unwrap(),
                None => d.reset(p).unwrap(),
            }
            let rep = oracle::dyck(&w.word(), false);
            prop_assert_eq!(d.member(), rep.member);
            prop_assert_eq!(d.root(), rep.unmatched);
        }
        d.check_invariants().unwrap();
    }

    #[test]
    fn dk_matches_typed_stack(types in 1..4usize, ops in toggles(48, 6, 300)) {
        let mut d = DkEngine::new(48, types, WorkMeter::new());
        let mut w = DynamicWord::new(48);
        for (p, s) in ops {
            let s = s % (2 * types as u32);
            match apply_toggle(&mut w, p, s) {
                Some(sym) => d.set(p, sym).unwrap(),
                None => d.reset(p).unwrap(),
            }
            prop_assert_eq!(d.member(), oracle::dyck(&w.word(), true).member);
            prop_assert_eq!(d.root_pair(), oracle::dyck(&w.word(), false).unmatched);
        }
        d.check_invariants().unwrap();
    }

    #[test]
    fn dyck_range_matches_stack(ops in toggles(81, 4, 200), queries in prop::collection::vec((0..81usize, 0..81usize), 30)) {
        let mut d = DyckRange::new(81, 2, 0.5, WorkMeter::new());
        let mut w = DynamicWord::new(81);
        for (p, s) in ops {
            match apply_toggle(&mut w, p, s) {
                Some(sym) => d.set(p, sym).unwrap(),
                None => d.reset(p).unwrap(),
            }
        }
        d.check_consistency().unwrap();
        let cells = w.cells();
        for (a, b) in queries {
            let (p, q) = (a.min(b), a.max(b));
            prop_assert_eq!(d.range1(p, q).unwrap(), oracle::dyck_range(cells, p, q, false));
            prop_assert_eq!(d.rangek(p, q).unwrap(), oracle::dyck_range(cells, p, q, true));
            for i in p..=q {
                if matches!(cells[i], Some(s) if s.0 % 2 == 0) {
                    prop_assert_eq!(d.find_match(i, p, q).unwrap(), oracle::dyck_match(cells, i, p, q));
                }
            }
        }
    }
}

#[test]
fn whole_word_range_agrees_with_membership_engines() {
    let n = 40;
    let mut r = DyckRange::new(n, 2, 0.5, WorkMeter::new());
    let mut d1 = D1Engine::new(n, WorkMeter::new());
    let mut dk = DkEngine::new(n, 2, WorkMeter::new());
    let word = "(1(2)2)1(2(1(1)1)1)2(1)1";
    let alpha = dynlang::Alphabet::dyck(2);
    let mut pos = 0;
    let mut i = 0;
    let chars: Vec<char> = word.chars().collect();
    while i < chars.len() {
        let name: String = chars[i..i + 2].iter().collect();
        let s = alpha.symbol(&name).unwrap();
        r.set(pos, s).unwrap();
        dk.set(pos, s).unwrap();
        d1.set(pos, Symbol(s.0 % 2)).unwrap();
        pos += 3;
        i += 2;
    }
    assert!(r.rangek(0, n - 1).unwrap() && dk.member());
    assert!(r.range1(0, n - 1).unwrap() && d1.member());
    r.reset(3).unwrap();
    dk.reset(3).unwrap();
    d1.reset(3).unwrap();
    assert_eq!(r.rangek(0, n - 1).unwrap(), dk.member());
    assert_eq!(r.range1(0, n - 1).unwrap(), d1.member());
}
