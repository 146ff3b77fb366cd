//! Minkowski sums on windows and in `ℤ/mℤ`, representation counts and gaps.
//!
//! Each operand is split into parts: a finite list of points, a periodic tail
//! to the right, a periodic tail to the left, or a lazily generated set. The
//! number of ways to write `z = c + w` is then a sum over pairs of parts, and
//! every pair except "generated set against a left tail" has a closed form.
//! That pair can have infinitely many candidates, so it is only sampled and
//! the result is flagged as not exact.

use std::borrow::Cow;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclic::CyclicSet;
use crate::intset::{residue, IntegerSet, LazySet};
use crate::{Error, Int, Result, Window};

/// Elements of `(C + W) ∩ window`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowedSum {
    pub window: Window,
    #[serde(serialize_with = "crate::ser::ints", deserialize_with = "crate::ser::de_ints")]
    pub elements: Vec<Int>,
    /// True iff `elements` is exactly `(C + W) ∩ window`.
    pub complete: bool,
    /// When incomplete: the range of generated-set elements that was examined
    /// against a left-unbounded operand.
    pub support: Option<Window>,
}

/// Number of representations `z = c + w`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Count {
    Finite(u64),
    Infinite,
}

impl Count {
    pub fn is_zero(&self) -> bool {
        *self == Count::Finite(0)
    }

    pub fn is_one(&self) -> bool {
        *self == Count::Finite(1)
    }

    fn add(&self, other: &Count) -> Count {
        match (self, other) {
            (Count::Finite(a), Count::Finite(b)) => Count::Finite(a.saturating_add(*b)),
            _ => Count::Infinite,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepCount {
    #[serde(serialize_with = "crate::ser::int", deserialize_with = "crate::ser::de_int")]
    pub z: Int,
    pub count: Count,
    /// False when some candidate pairs lay outside the examined support.
    pub exact: bool,
}

#[derive(Clone, Debug)]
pub(crate) struct Tail {
    /// Strict bound: members lie beyond it.
    bound: Int,
    period: u64,
    residues: Vec<bool>,
}

impl Tail {
    fn has(&self, z: &Int) -> bool {
        self.residues[residue(z, self.period)]
    }
}

#[derive(Clone, Debug)]
pub(crate) enum Part<'a> {
    Points(Cow<'a, [Int]>),
    /// Members `z > bound` with allowed residues.
    Up(Tail),
    /// Members `z < bound` with allowed residues.
    Down(Tail),
    Lazy(&'a LazySet),
}

pub(crate) fn parts(s: &IntegerSet) -> Vec<Part<'_>> {
    let ev = match s {
        IntegerSet::Finite(f) => return vec![Part::Points(Cow::Borrowed(f.elements()))],
        IntegerSet::Lazy(l) => return vec![Part::Lazy(l)],
        IntegerSet::Ep(e) => Cow::Owned(e.to_eventual()),
        IntegerSet::Eventual(e) => Cow::Borrowed(e),
    };
    let (lo, hi) = ev.cuts();
    let mut out = vec![Part::Points(Cow::Owned(ev.middle().to_vec()))];
    if ev.has_up_tail() {
        out.push(Part::Up(Tail {
            bound: Int::from(hi),
            period: ev.period(),
            residues: ev.up_residues().to_vec(),
        }));
    }
    if ev.has_down_tail() {
        out.push(Part::Down(Tail {
            bound: Int::from(lo),
            period: ev.period(),
            residues: ev.down_residues().to_vec(),
        }));
    }
    out
}

impl Part<'_> {
    fn contains(&self, z: &Int) -> Result<bool> {
        Ok(match self {
            Part::Points(p) => p.binary_search(z).is_ok(),
            Part::Up(t) => *z > t.bound && t.has(z),
            Part::Down(t) => *z < t.bound && t.has(z),
            Part::Lazy(l) => l.contains(z)?,
        })
    }
}

/// Number of `c ∈ [lo, hi]` with `pred(c mod l)`.
fn count_range(lo: &Int, hi: &Int, l: u64, pred: impl Fn(u64) -> bool) -> Int {
    if lo > hi {
        return Int::zero();
    }
    let n: Int = hi - lo + 1;
    let lb = Int::from(l);
    let (full, rest) = n.div_rem(&lb);
    let per: u64 = (0..l).filter(|&r| pred(r)).count() as u64;
    let start = residue(lo, l) as u64;
    let rest = rest.to_u64().unwrap();
    let partial = (0..rest).filter(|&k| pred((start + k) % l)).count() as u64;
    full * per + partial
}

/// How many generated-set elements past the forced start are sampled.
const SAMPLE_SPAN: i64 = 1 << 12;

struct PairCount {
    count: Count,
    exact: bool,
    sampled_to: Option<Int>,
}

fn as_count(n: Int) -> Count {
    Count::Finite(n.to_u64().unwrap_or(u64::MAX))
}

/// Representations of `z` as `c + w`, `c ∈ p`, `w ∈ q`.
fn pair_count(z: &Int, p: &Part, q: &Part, sample_hi: Option<&Int>) -> Result<PairCount> {
    let exact = |count| PairCount {
        count,
        exact: true,
        sampled_to: None,
    };
    match (p, q) {
        (Part::Points(ps), _) => {
            let mut n = 0u64;
            for c in ps.iter() {
                if q.contains(&(z - c))? {
                    n += 1;
                }
            }
            Ok(exact(Count::Finite(n)))
        }
        (_, Part::Points(_)) => pair_count(z, q, p, sample_hi),
        (Part::Up(a), Part::Up(b)) => {
            let l = num_integer::lcm(a.period, b.period);
            let lo = &a.bound + 1;
            let hi = z - &b.bound - 1;
            Ok(exact(as_count(count_range(&lo, &hi, l, |r| {
                a.residues[(r % a.period) as usize] && b.has(&(z - Int::from(r)))
            }))))
        }
        (Part::Down(a), Part::Down(b)) => {
            let l = num_integer::lcm(a.period, b.period);
            let lo = z - &b.bound + 1;
            let hi = &a.bound - 1;
            Ok(exact(as_count(count_range(&lo, &hi, l, |r| {
                a.residues[(r % a.period) as usize] && b.has(&(z - Int::from(r)))
            }))))
        }
        (Part::Up(a), Part::Down(b)) | (Part::Down(b), Part::Up(a)) => {
            // c → +∞ in the up tail pairs with w → −∞ in the down tail.
            let l = num_integer::lcm(a.period, b.period);
            let any = (0..l).any(|r| a.residues[(r % a.period) as usize] && b.has(&(z - Int::from(r))));
            Ok(exact(if any { Count::Infinite } else { Count::Finite(0) }))
        }
        (Part::Lazy(c), Part::Up(b)) | (Part::Up(b), Part::Lazy(c)) => {
            // w = z − c > bound forces c < z − bound.
            let hi = z - &b.bound - 1;
            Ok(exact(as_count(count_lazy(c, &hi, |x| b.has(&(z - x)))?)))
        }
        (Part::Lazy(c), Part::Lazy(d)) => {
            let hi = z - d.min()?;
            let mut n = 0u64;
            let mut k = match c.run_at_or_after(&c.min()?)? {
                Some(k) => k,
                None => return Ok(exact(Count::Finite(0))),
            };
            while let Some(r) = c.run(k)? {
                if r.start > hi {
                    break;
                }
                let mut x = r.start.clone();
                let e = r.end.clone().min(hi.clone());
                while x <= e {
                    if d.contains(&(z - &x))? {
                        n += 1;
                    }
                    x += 1;
                }
                k += 1;
            }
            Ok(exact(Count::Finite(n)))
        }
        (Part::Lazy(c), Part::Down(b)) | (Part::Down(b), Part::Lazy(c)) => {
            // w = z − c < bound forces c > z − bound, with no upper limit.
            let lo: Int = z - &b.bound + 1;
            let hi = match sample_hi {
                Some(h) => h.clone().max(lo.clone()),
                None => &lo + SAMPLE_SPAN,
            };
            let in_range = count_lazy(c, &hi, |x| *x >= lo && b.has(&(z - x)))?;
            Ok(PairCount {
                count: as_count(in_range),
                exact: false,
                sampled_to: Some(hi),
            })
        }
    }
}

/// Number of elements `x ≤ hi` of a generated set with `pred(x)`, walking
/// runs and counting residues arithmetically inside each.
fn count_lazy(c: &LazySet, hi: &Int, pred: impl Fn(&Int) -> bool) -> Result<Int> {
    let mut n = Int::zero();
    let mut k = 0;
    while let Some(r) = c.run(k)? {
        if r.start > *hi {
            break;
        }
        let e = r.end.clone().min(hi.clone());
        let len: Int = &e - &r.start + 1;
        if len > Int::from(crate::intset::MAX_WINDOW_ELEMENTS) {
            return Err(Error::Budget(format!("run of {} too long to scan", c.describe())));
        }
        let mut x = r.start.clone();
        while x <= e {
            if pred(&x) {
                n += 1;
            }
            x += 1;
        }
        k += 1;
    }
    Ok(n)
}

/// Representations of `z` in `C + W`.
///
/// Exact whenever at most one operand is unbounded below, except for a
/// generated set paired with a left-unbounded set; there the candidates
/// `c ∈ C` above `support.hi` are not examined and `exact` is false.
pub fn rep_count(z: &Int, c: &IntegerSet, w: &IntegerSet, support: Window) -> Result<RepCount> {
    let hi = support.hi_int();
    rep_count_inner(z, &parts(c), &parts(w), Some(&hi))
}

pub(crate) fn rep_count_inner(z: &Int, cp: &[Part], wp: &[Part], sample_hi: Option<&Int>) -> Result<RepCount> {
    let mut total = Count::Finite(0);
    let mut exact = true;
    for p in cp {
        for q in wp {
            let pc = pair_count(z, p, q, sample_hi)?;
            total = total.add(&pc.count);
            exact &= pc.exact;
        }
    }
    Ok(RepCount {
        z: z.clone(),
        count: total,
        exact: exact || total == Count::Infinite,
    })
}

/// `(C + W) ∩ w`.
pub fn minkowski_window(c: &IntegerSet, w: &IntegerSet, win: Window) -> Result<WindowedSum> {
    let (cp, wp) = (parts(c), parts(w));
    let mut elements = Vec::new();
    let mut complete = true;
    let mut sampled: Option<Int> = None;
    for z in win.iter() {
        let z = Int::from(z);
        // A sampled hit is still a hit; sampling only matters for misses.
        let mut hit = false;
        let mut unsure = None;
        'pairs: for p in &cp {
            for q in &wp {
                let pc = pair_count(&z, p, q, None)?;
                if !pc.count.is_zero() {
                    hit = true;
                    break 'pairs;
                }
                if !pc.exact {
                    unsure = pc.sampled_to.or(unsure);
                }
            }
        }
        if !hit {
            if let Some(s) = unsure {
                complete = false;
                sampled = Some(sampled.map_or(s.clone(), |t: Int| t.max(s)));
            }
        }
        if hit {
            elements.push(z);
        }
    }
    let support = if complete {
        None
    } else {
        let lo = match (c.lower_bound()?, w.lower_bound()?) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => Int::zero(),
        };
        let hi = sampled.unwrap_or_else(|| lo.clone());
        Some(Window {
            lo: lo.to_i64().unwrap_or(i64::MIN),
            hi: hi.to_i64().unwrap_or(i64::MAX),
        })
    };
    Ok(WindowedSum {
        window: win,
        elements,
        complete,
        support,
    })
}

/// Whether `(C + W) ⊇ [lo, hi]`; returns the first uncovered integer.
pub fn first_uncovered(c: &IntegerSet, w: &IntegerSet, win: Window) -> Result<Option<i64>> {
    let (cp, wp) = (parts(c), parts(w));
    for z in win.iter() {
        let zi = Int::from(z);
        let mut hit = false;
        'pairs: for p in &cp {
            for q in &wp {
                if !pair_count(&zi, p, q, None)?.count.is_zero() {
                    hit = true;
                    break 'pairs;
                }
            }
        }
        if !hit {
            return Ok(Some(z));
        }
    }
    Ok(None)
}

/// `A + B` in `ℤ/mℤ`.
pub fn minkowski_cyclic(a: &CyclicSet, b: &CyclicSet) -> Result<CyclicSet> {
    a.sum(b)
}

/// Largest difference between consecutive elements of `S ∩ w`.
pub fn gap(s: &IntegerSet, w: Window) -> Result<Int> {
    if let IntegerSet::Lazy(l) = s {
        let (lo, hi) = (w.lo_int(), w.hi_int());
        return match l.max_gap_in(&lo, &hi)? {
            Some(g) => Ok(g),
            None => Err(Error::TooFewElements(
                l.window_limited(&lo, &hi, 1).map_or(1, |v| v.len()),
            )),
        };
    }
    let v = s.enumerate_window(w)?;
    gap_of(&v)
}

/// Largest consecutive difference of a sorted list.
pub fn gap_of(v: &[Int]) -> Result<Int> {
    if v.len() < 2 {
        return Err(Error::TooFewElements(v.len()));
    }
    Ok(v.windows(2).map(|p| &p[1] - &p[0]).max().expect("two elements"))
}

#[cfg(test)]
mod tests {
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

    /// Brute force over explicit element lists.
    fn brute_sum(c: &[i64], w: &[i64], lo: i64, hi: i64) -> Vec<Int> {
        let mut v: Vec<i64> = c
            .iter()
            .flat_map(|x| w.iter().map(move |y| x + y))
            .filter(|z| (lo..=hi).contains(z))
            .collect();
        v.sort();
        v.dedup();
        ints(&v)
    }

    #[test]
    fn identity_and_tiling_examples() {
        let s = minkowski_window(&IntegerSet::finite(&[0]), &IntegerSet::naturals(), win(0, 5)).unwrap();
        assert_eq!(s.elements, ints(&[0, 1, 2, 3, 4, 5]));
        assert!(s.complete);
        let s = minkowski_window(&ep(2, &[0]), &IntegerSet::finite(&[0, 1]), win(0, 9)).unwrap();
        assert_eq!(s.elements, ints(&(0..=9).collect::<Vec<_>>()));
        assert!(s.complete);
    }

    #[test]
    fn finite_pairs_match_enumeration() {
        let s = minkowski_window(
            &IntegerSet::finite(&[1, 3, 7, 15]),
            &IntegerSet::finite(&[-1, -3]),
            win(-3, 14),
        )
        .unwrap();
        assert_eq!(s.elements, brute_sum(&[1, 3, 7, 15], &[-1, -3], -3, 14));
        assert_eq!(s.elements, ints(&[-2, 0, 2, 4, 6, 12, 14]));
    }

    #[test]
    fn rep_count_examples() {
        let nat = IntegerSet::naturals();
        let sup = win(-100, 100);
        let r = rep_count(&Int::from(0), &nat, &nat, sup).unwrap();
        assert_eq!((r.count, r.exact), (Count::Finite(1), true));
        let r = rep_count(&Int::from(5), &nat, &nat, sup).unwrap();
        assert_eq!(r.count, Count::Finite(6));
        let r = rep_count(
            &Int::from(3),
            &IntegerSet::finite(&[1, 3]),
            &IntegerSet::finite(&[0, 2]),
            sup,
        )
        .unwrap();
        assert_eq!(r.count, Count::Finite(2));
    }

    #[test]
    fn opposite_tails_give_infinite_counts() {
        let evens = IntegerSet::Eventual(EventualSet::periodic(2, &[0]).unwrap());
        let r = rep_count(&Int::from(4), &IntegerSet::naturals(), &evens, win(0, 1)).unwrap();
        assert_eq!((r.count, r.exact), (Count::Infinite, true));
        let r = rep_count(&Int::from(3), &ep(2, &[0]), &evens, win(0, 1)).unwrap();
        assert_eq!(r.count, Count::Finite(0));
        assert!(r.exact);
    }

    #[test]
    fn lazy_against_left_tail_is_sampled() {
        // Negative evens: 1 = c + w needs odd c = 1 and w = 0, which is absent.
        let neg = IntegerSet::Eventual(
            EpSet::canonicalize(2, &[2], &[], &[])
                .unwrap()
                .to_eventual()
                .reflect()
                .unwrap(),
        );
        let s = minkowski_window(&IntegerSet::Lazy(LazySet::powers(2).unwrap()), &neg, win(-2, 2)).unwrap();
        assert!(!s.complete);
        assert!(s.support.is_some());
        assert_eq!(s.elements, ints(&[-2, -1, 0, 2]));
    }

    #[test]
    fn lazy_against_finite_is_exact() {
        let c = IntegerSet::Lazy(LazySet::mersenne());
        let w = IntegerSet::finite(&[-1, -3]);
        let s = minkowski_window(&c, &w, win(-3, 14)).unwrap();
        assert!(s.complete);
        assert_eq!(s.elements, brute_sum(&[1, 3, 7, 15, 31], &[-1, -3], -3, 14));
    }

    #[test]
    fn symmetric_and_monotone() {
        let a = ep(3, &[0, 1]);
        let b = IntegerSet::finite(&[-4, 0, 5]);
        let sub = IntegerSet::finite(&[-4, 5]);
        for (lo, hi) in [(-20, 20), (0, 50), (-5, 5)] {
            let ab = minkowski_window(&a, &b, win(lo, hi)).unwrap();
            let ba = minkowski_window(&b, &a, win(lo, hi)).unwrap();
            assert_eq!(ab.elements, ba.elements);
            let sub = minkowski_window(&a, &sub, win(lo, hi)).unwrap();
            assert!(sub.elements.iter().all(|z| ab.elements.contains(z)));
        }
    }

    #[test]
    fn periodic_sums_project_to_cyclic_sums() {
        let m = 6u32;
        for a in 1u64..(1 << m) {
            for b in [0b1u64, 0b11, 0b101, 0b10010] {
                let ra: Vec<u32> = (0..m).filter(|r| a >> r & 1 == 1).collect();
                let rb: Vec<u32> = (0..m).filter(|r| b >> r & 1 == 1).collect();
                let pa = IntegerSet::Eventual(EventualSet::periodic(m as u64, &ra).unwrap());
                let pb = IntegerSet::Eventual(EventualSet::periodic(m as u64, &rb).unwrap());
                let s = minkowski_window(&pa, &pb, win(-7, 2 * m as i64)).unwrap();
                let proj: Vec<i64> = s.elements.iter().map(|z| residue(z, m as u64) as i64).collect();
                let cyc = minkowski_cyclic(
                    &CyclicSet::from_bits(m, a).unwrap(),
                    &CyclicSet::from_bits(m, b).unwrap(),
                )
                .unwrap();
                assert_eq!(CyclicSet::new(m, &proj).unwrap(), cyc);
            }
        }
    }

    #[test]
    fn cyclic_examples() {
        let c = |m, r: &[i64]| CyclicSet::new(m, r).unwrap();
        assert_eq!(minkowski_cyclic(&c(2, &[0]), &c(2, &[0, 1])).unwrap(), c(2, &[0, 1]));
        assert!(minkowski_cyclic(&c(5, &[0, 1]), &c(5, &[])).unwrap().is_empty());
        assert_eq!(
            minkowski_cyclic(&c(5, &[0, 1]), &c(5, &[0, 2])).unwrap(),
            c(5, &[0, 1, 2, 3])
        );
        assert_eq!(
            minkowski_cyclic(&c(5, &[0]), &c(4, &[0])),
            Err(Error::ModulusMismatch(5, 4))
        );
    }

    #[test]
    fn cauchy_davenport_holds_for_small_primes() {
        for p in [2u32, 3, 5, 7, 11] {
            let n = 1u64 << p;
            for a in 1..n {
                for b in a..n {
                    let s = minkowski_cyclic(
                        &CyclicSet::from_bits(p, a).unwrap(),
                        &CyclicSet::from_bits(p, b).unwrap(),
                    )
                    .unwrap();
                    let bound = (a.count_ones() + b.count_ones() - 1).min(p);
                    assert!(s.len() >= bound, "p={p} a={a:b} b={b:b}");
                }
            }
        }
    }

    #[test]
    fn gap_examples() {
        assert_eq!(
            gap(&IntegerSet::finite(&[0, 1, 2, 3]), win(0, 3)).unwrap(),
            Int::from(1)
        );
        assert_eq!(
            gap(&IntegerSet::finite(&[1, 3, 7, 15]), win(0, 15)).unwrap(),
            Int::from(8)
        );
        assert_eq!(
            gap(&IntegerSet::Lazy(LazySet::interval_union()), win(0, 63)).unwrap(),
            Int::from(9)
        );
        assert_eq!(
            gap(&IntegerSet::finite(&[4]), win(0, 10)),
            Err(Error::TooFewElements(1))
        );
    }
}
