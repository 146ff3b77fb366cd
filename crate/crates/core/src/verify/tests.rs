use super::*;
use crate::intset::{EpSet, EventualSet, LazySet};

fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

fn win(lo: i64, hi: i64) -> Window {
    Window::new(lo, hi).unwrap()
}

fn ep(m: i64, a: &[i64]) -> IntegerSet {
    IntegerSet::Ep(EpSet::canonicalize(m, a, &[], &[]).unwrap())
}

#[test]
fn dependents_examples() {
    let d = dependents(
        &Int::from(0),
        &IntegerSet::finite(&[0]),
        &IntegerSet::naturals(),
        win(0, 3),
    )
    .unwrap();
    assert_eq!(d, ints(&[0, 1, 2, 3]));
    let c = IntegerSet::finite(&[1, 3]);
    let w = IntegerSet::finite(&[0, 2]);
    assert_eq!(dependents(&Int::from(1), &c, &w, win(0, 6)).unwrap(), ints(&[1]));
    let d = dependents(&Int::from(2), &ep(2, &[0]), &IntegerSet::finite(&[0, 1]), win(0, 9)).unwrap();
    assert_eq!(d, ints(&[2, 3]));
}

#[test]
fn dependents_refuse_inexact_counts() {
    let neg = IntegerSet::Eventual(EventualSet::periodic(2, &[0]).unwrap());
    let c = IntegerSet::Lazy(LazySet::powers(2).unwrap());
    assert!(matches!(
        dependents(&Int::from(1), &c, &neg, win(0, 3)),
        Err(Error::NotExact(_))
    ));
}

#[test]
fn single_point_against_naturals_certifies() {
    let r = verify_mac(
        &IntegerSet::finite(&[0]),
        &IntegerSet::naturals(),
        win(0, 10),
        Inspect::All,
    )
    .unwrap();
    assert!(r.certified());
    assert!(revalidate(&r, &IntegerSet::finite(&[0]), &IntegerSet::naturals()).unwrap());
}

#[test]
fn naturals_are_not_minimal_against_two_points() {
    let r = verify_mac(
        &IntegerSet::naturals(),
        &IntegerSet::finite(&[0, 1]),
        win(0, 10),
        Inspect::Window(win(1, 5)),
    )
    .unwrap();
    assert_eq!(r.verdict, Verdict::MinimalityFails { c: Int::from(1) });
    assert_eq!(r.unwitnessed, ints(&[1, 2, 3, 4, 5]));
}

#[test]
fn coverage_failure_is_reported() {
    let r = verify_mac(
        &ep(3, &[0]),
        &IntegerSet::finite(&[0, 1]),
        win(0, 10),
        Inspect::Window(win(0, 10)),
    )
    .unwrap();
    assert_eq!(r.verdict, Verdict::CoverageFails { z: 2 });
    assert!(!r.covered);
}

#[test]
fn infinite_w_uses_widened_zone() {
    // 2ℕ against {0} ∪ (negative odds): each even c depends on c itself.
    let neg_odds = EventualSet::periodic(2, &[1])
        .unwrap()
        .difference(&EpSet::canonicalize(1, &[0], &[], &[]).unwrap().to_eventual())
        .unwrap();
    let w = IntegerSet::Eventual(neg_odds.union(&EventualSet::finite(&[0])).unwrap());
    let c = ep(2, &[0]);
    let r = verify_mac(&c, &w, win(-20, 20), Inspect::Window(win(-20, 20))).unwrap();
    assert_eq!(r.verdict, Verdict::CoverageFails { z: -20 });
    // With all of 2ℤ each even c depends on itself.
    let w2 = IntegerSet::Eventual(neg_odds.union(&EventualSet::finite(&[0])).unwrap());
    let c2 = IntegerSet::Eventual(EventualSet::periodic(2, &[0]).unwrap());
    let r = verify_mac(&c2, &w2, win(-20, 20), Inspect::Window(win(-6, 6))).unwrap();
    assert!(r.certified());
    assert!(r.witnesses.iter().all(|w| w.z == w.c));
    assert!(revalidate(&r, &c2, &w2).unwrap());
}

#[test]
fn cyclic_prune_examples() {
    let c = |m, r: &[i64]| CyclicSet::new(m, r).unwrap();
    assert_eq!(prune_cyclic(&c(3, &[0, 1, 2]), &c(3, &[0])).unwrap(), c(3, &[0, 1, 2]));
    assert_eq!(prune_cyclic(&c(3, &[0, 1, 2]), &c(3, &[0, 1])).unwrap(), c(3, &[1, 2]));
    assert_eq!(
        prune_cyclic(&c(6, &[0, 2, 4]), &c(6, &[0, 1])).unwrap(),
        c(6, &[0, 2, 4])
    );
    assert!(prune_cyclic(&c(4, &[0]), &c(4, &[0, 1])).is_err());
}

#[test]
fn cyclic_prune_is_minimal_and_fixed() {
    let m = 7;
    for a in 1u64..(1 << m) {
        for b in [0b11u64, 0b1001, 0b10101] {
            let (a, b) = (CyclicSet::from_bits(m, a).unwrap(), CyclicSet::from_bits(m, b).unwrap());
            let Ok(p) = prune_cyclic(&a, &b) else { continue };
            assert!(p.is_subset(&a));
            assert!(p.sum(&b).unwrap().is_full());
            for r in p.residues() {
                assert!(!p.without(r).sum(&b).unwrap().is_full());
            }
            assert_eq!(prune_cyclic(&p, &b).unwrap(), p);
        }
    }
}

#[test]
fn window_prune_drops_redundant_elements() {
    let b = IntegerSet::finite(&[0, 1]);
    let a = ints(&[0, 1, 2, 3, 4, 5]);
    let p = prune_window(&a, &b, win(0, 5)).unwrap();
    assert_eq!(p, ints(&[0, 2, 4]));
    let again = prune_window(&p, &b, win(0, 5)).unwrap();
    assert_eq!(again, p);
    assert!(prune_window(&ints(&[0]), &b, win(0, 5)).is_err());
}

#[test]
fn refute_full_line_kills_every_candidate() {
    let z = IntegerSet::Eventual(EventualSet::periodic(1, &[0]).unwrap());
    let e = refute_mac_bounded(&z, 2, 6).unwrap();
    assert!(e.covering_candidates > 0);
    // Singletons do make ℤ minimal; every pair fails.
    assert!(e.survivors.iter().all(|w| w.len() == 1));
    assert_eq!(e.survivors.len(), 13);
}

#[test]
fn refute_interval_union_leaves_no_survivor() {
    let e = refute_mac_bounded(&IntegerSet::Lazy(LazySet::interval_union()), 2, 64).unwrap();
    assert!(e.survivors.is_empty());
}

#[test]
fn refute_dense_periodic_leaves_no_survivor() {
    let e = refute_mac_bounded(&ep(4, &[0, 1, 2]), 3, 40).unwrap();
    assert!(e.covering_candidates > 0);
    assert!(e.survivors.is_empty());
}

#[test]
fn refute_reports_overflow() {
    assert!(matches!(
        refute_mac_bounded(&ep(2, &[0]), 4, 200),
        Err(Error::Budget(_))
    ));
}

#[test]
fn refutations_persist_as_radius_grows() {
    let c = ep(3, &[0, 1]);
    let small = refute_mac_bounded(&c, 2, 10).unwrap();
    let big = refute_mac_bounded(&c, 2, 16).unwrap();
    for s in &big.survivors {
        if s.iter().all(|x| x.abs() <= 10) {
            assert!(small.survivors.contains(s), "{s:?} resurrected");
        }
    }
}

#[test]
fn long_gap_obstruction_is_cited() {
    // ℤ with sparse holes at multiples of 40: long runs of members, and
    // consecutive holes far apart.
    let holes = IntegerSet::Eventual(EventualSet::periodic(40, &(1..40).collect::<Vec<u32>>()).unwrap());
    let e = refute_mac_bounded(&holes, 2, 30).unwrap();
    assert!(e.refutations.iter().any(|r| r.long_gap_obstruction.is_some()));
}
