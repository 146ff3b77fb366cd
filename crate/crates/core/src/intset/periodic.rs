use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::{Error, Int, Result};

/// Widest explicit middle section an eventually periodic set may carry.
const MAX_MIDDLE: i64 = 1 << 24;

pub(crate) fn residue(z: &Int, m: u64) -> usize {
    z.mod_floor(&Int::from(m)).to_usize().unwrap_or(0)
}

pub(crate) fn residue_i64(z: i64, m: u64) -> usize {
    z.rem_euclid(m as i64) as usize
}

fn divisors(m: u64) -> Vec<u64> {
    let mut ds: Vec<u64> = (1..=m).filter(|d| m.is_multiple_of(*d)).collect();
    ds.sort_unstable();
    ds
}

/// Canonical eventually periodic set `(mℕ + A) ∪ B ∪ F`, bounded below,
/// with `ℕ = {0, 1, 2, …}`.
///
/// Canonical means: `m` is the minimal period of the tail, `A` holds exactly
/// one progression start per occupied residue class and each start is as
/// small as possible (so `b + m ∉ A` for `b ∈ B`), `B` lies in the classes of
/// `A` below their starts, and `F` lies in the other classes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EpSet {
    m: u64,
    a: Vec<i64>,
    b: Vec<i64>,
    f: Vec<i64>,
}

impl EpSet {
    /// Reduces an arbitrary `(m, A, B, F)` description to canonical form.
    /// Elements of `B` or `F` that sit on a progression are absorbed into it.
    pub fn canonicalize(m: i64, a: &[i64], b: &[i64], f: &[i64]) -> Result<Self> {
        if m <= 0 {
            return Err(Error::InvalidPeriod(m));
        }
        if a.is_empty() {
            return Err(Error::EmptyProgression);
        }
        let m = m as u64;
        let member =
            |z: i64| a.iter().any(|&s| z >= s && (z - s).rem_euclid(m as i64) == 0) || b.contains(&z) || f.contains(&z);
        let all = a.iter().chain(b).chain(f);
        let lb = *all.clone().min().unwrap();
        let t0 = *all.max().unwrap();
        Self::from_membership(m, lb, t0, member)
    }

    /// Builds the canonical form of a set that is empty below `lb`, periodic
    /// with period `m` above `t0`, and has at least one tail class.
    pub(crate) fn from_membership(m: u64, lb: i64, t0: i64, member: impl Fn(i64) -> bool) -> Result<Self> {
        if t0 - lb > MAX_MIDDLE {
            return Err(Error::Unsupported(format!(
                "eventually periodic set spans {} integers before its tail",
                t0 - lb
            )));
        }
        let start = t0 + 1;
        let p = divisors(m)
            .into_iter()
            .find(|&d| (start..start + m as i64).all(|z| member(z) == member(z + d as i64)))
            .unwrap_or(m);
        let pi = p as i64;
        let mut a = Vec::new();
        let mut tail_class = vec![false; p as usize];
        for z in start..start + pi {
            if member(z) {
                tail_class[residue_i64(z, p)] = true;
                let mut s = z;
                while s - pi >= lb && member(s - pi) {
                    s -= pi;
                }
                a.push(s);
            }
        }
        if a.is_empty() {
            return Err(Error::EmptyProgression);
        }
        a.sort_unstable();
        let mut b = Vec::new();
        let mut f = Vec::new();
        for z in lb..start {
            if !member(z) {
                continue;
            }
            let r = residue_i64(z, p);
            if tail_class[r] {
                let s = a.iter().find(|&&s| residue_i64(s, p) == r).copied().unwrap();
                if z < s {
                    b.push(z);
                }
            } else {
                f.push(z);
            }
        }
        Ok(EpSet { m: p, a, b, f })
    }

    pub fn period(&self) -> u64 {
        self.m
    }

    /// Progression starts, ascending.
    pub fn starts(&self) -> &[i64] {
        &self.a
    }

    /// The finite set `B` (in progression classes, below the starts).
    pub fn prefix(&self) -> &[i64] {
        &self.b
    }

    /// The finite set `F` (outside the progression classes).
    pub fn sporadic(&self) -> &[i64] {
        &self.f
    }

    pub fn a_residues(&self) -> Vec<u32> {
        let mut r: Vec<u32> = self.a.iter().map(|&s| residue_i64(s, self.m) as u32).collect();
        r.sort_unstable();
        r
    }

    pub fn f_residues(&self) -> Vec<u32> {
        let mut r: Vec<u32> = self.f.iter().map(|&s| residue_i64(s, self.m) as u32).collect();
        r.sort_unstable();
        r.dedup();
        r
    }

    pub fn min_element(&self) -> i64 {
        self.a
            .iter()
            .chain(&self.b)
            .chain(&self.f)
            .copied()
            .min()
            .expect("A is nonempty")
    }

    /// Largest progression start; membership is `m`-periodic strictly above it
    /// once `B ∪ F` is passed as well.
    pub fn tail_start(&self) -> i64 {
        self.a
            .iter()
            .chain(&self.b)
            .chain(&self.f)
            .copied()
            .max()
            .expect("A is nonempty")
    }

    pub fn contains_i64(&self, z: i64) -> bool {
        let m = self.m as i64;
        self.a.iter().any(|&s| z >= s && (z - s) % m == 0)
            || self.b.binary_search(&z).is_ok()
            || self.f.binary_search(&z).is_ok()
    }

    pub fn contains(&self, z: &Int) -> bool {
        match z.to_i64() {
            Some(v) => self.contains_i64(v),
            None if z.sign() == num_bigint::Sign::Minus => false,
            None => {
                let r = residue(z, self.m);
                self.a.iter().any(|&s| residue_i64(s, self.m) == r)
            }
        }
    }

    pub fn translate(&self, t: i64) -> Result<Self> {
        let sh = |v: &Vec<i64>| v.iter().map(|x| x + t).collect::<Vec<_>>();
        Self::canonicalize(self.m as i64, &sh(&self.a), &sh(&self.b), &sh(&self.f))
    }

    /// Same set as a two-sided eventually periodic set.
    pub fn to_eventual(&self) -> EventualSet {
        let lo = self.min_element();
        let hi = self.tail_start();
        EventualSet::from_fn(self.m, lo, hi, |z| self.contains_i64(z)).expect("EP sets are narrow")
    }

    /// Checks the canonical-form invariants.
    pub fn is_canonical(&self) -> bool {
        let m = self.m;
        let ar = self.a_residues();
        let mut dedup = ar.clone();
        dedup.dedup();
        if dedup.len() != ar.len() || self.a.is_empty() {
            return false;
        }
        let class_start = |r: usize| self.a.iter().copied().find(|&s| residue_i64(s, m) == r);
        let b_ok = self.b.iter().all(|&b| match class_start(residue_i64(b, m)) {
            Some(s) => b < s && !self.a.contains(&(b + m as i64)),
            None => false,
        });
        let f_ok = self.f.iter().all(|&x| class_start(residue_i64(x, m)).is_none());
        let minimal = divisors(m).into_iter().filter(|&d| d < m).all(|d| {
            let s = self.tail_start() + 1;
            (s..s + m as i64).any(|z| self.contains_i64(z) != self.contains_i64(z + d as i64))
        });
        b_ok && f_ok && minimal
    }
}

/// A set that is periodic below `lo_cut` and above `hi_cut` (possibly with
/// different residue patterns) and arbitrary in between. Finite sets,
/// eventually periodic sets, their reflections and two-sided periodic sets
/// are all special cases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventualSet {
    period: u64,
    down: Vec<bool>,
    up: Vec<bool>,
    lo_cut: i64,
    hi_cut: i64,
    middle: Vec<Int>,
}

impl EventualSet {
    /// Samples `member` on `[lo_cut, hi_cut]` and on one period beyond each
    /// cut. `member` must be `period`-periodic outside the cuts.
    pub fn from_fn(period: u64, lo_cut: i64, hi_cut: i64, member: impl Fn(i64) -> bool) -> Result<Self> {
        if period == 0 {
            return Err(Error::InvalidPeriod(0));
        }
        if hi_cut - lo_cut > MAX_MIDDLE {
            return Err(Error::Unsupported("eventually periodic middle too wide".into()));
        }
        let p = period as i64;
        let hi_cut = hi_cut.max(lo_cut - 1);
        let mut up = vec![false; period as usize];
        for z in hi_cut + 1..=hi_cut + p {
            up[residue_i64(z, period)] = member(z);
        }
        let mut down = vec![false; period as usize];
        for z in lo_cut - p..lo_cut {
            down[residue_i64(z, period)] = member(z);
        }
        let middle = (lo_cut..=hi_cut).filter(|&z| member(z)).map(Int::from).collect();
        Ok(EventualSet {
            period,
            down,
            up,
            lo_cut,
            hi_cut,
            middle,
        })
    }

    pub fn finite(elements: &[i64]) -> Self {
        let lo = elements.iter().copied().min().unwrap_or(0);
        let hi = elements.iter().copied().max().unwrap_or(-1);
        Self::from_fn(1, lo, hi, |z| elements.contains(&z)).expect("narrow finite set")
    }

    /// Two-sided periodic set `R + mℤ`.
    pub fn periodic(m: u64, residues: &[u32]) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidPeriod(0));
        }
        Self::from_fn(m, 0, -1, |z| residues.contains(&(residue_i64(z, m) as u32)))
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn cuts(&self) -> (i64, i64) {
        (self.lo_cut, self.hi_cut)
    }

    pub fn down_residues(&self) -> &[bool] {
        &self.down
    }

    pub fn up_residues(&self) -> &[bool] {
        &self.up
    }

    pub fn middle(&self) -> &[Int] {
        &self.middle
    }

    pub fn has_down_tail(&self) -> bool {
        self.down.iter().any(|&x| x)
    }

    pub fn has_up_tail(&self) -> bool {
        self.up.iter().any(|&x| x)
    }

    pub fn contains_i64(&self, z: i64) -> bool {
        if z < self.lo_cut {
            self.down[residue_i64(z, self.period)]
        } else if z > self.hi_cut {
            self.up[residue_i64(z, self.period)]
        } else {
            self.middle.binary_search(&Int::from(z)).is_ok()
        }
    }

    pub fn contains(&self, z: &Int) -> bool {
        if *z < Int::from(self.lo_cut) {
            self.down[residue(z, self.period)]
        } else if *z > Int::from(self.hi_cut) {
            self.up[residue(z, self.period)]
        } else {
            self.middle.binary_search(z).is_ok()
        }
    }

    pub fn lower_bound(&self) -> Option<Int> {
        if self.has_down_tail() {
            return None;
        }
        if let Some(x) = self.middle.first() {
            return Some(x.clone());
        }
        (self.hi_cut + 1..=self.hi_cut + self.period as i64)
            .find(|&z| self.contains_i64(z))
            .map(Int::from)
    }

    pub fn upper_bound(&self) -> Option<Int> {
        if self.has_up_tail() {
            return None;
        }
        if let Some(x) = self.middle.last() {
            return Some(x.clone());
        }
        (self.lo_cut - self.period as i64..self.lo_cut)
            .rev()
            .find(|&z| self.contains_i64(z))
            .map(Int::from)
    }

    /// Pointwise combination of two sets; `op` receives the memberships.
    pub fn combine(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Result<Self> {
        let period = num_integer::lcm(self.period, other.period);
        let lo = self.lo_cut.min(other.lo_cut);
        let hi = self.hi_cut.max(other.hi_cut);
        Self::from_fn(period, lo, hi, |z| op(self.contains_i64(z), other.contains_i64(z)))
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a || b)
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a && !b)
    }

    /// Image under `z ↦ scale·z + shift`.
    pub fn affine(&self, scale: i64, shift: i64) -> Result<Self> {
        if scale == 0 {
            return Err(Error::Precondition("affine scale must be nonzero".into()));
        }
        let period = self.period * scale.unsigned_abs();
        let (a, b) = (scale * self.lo_cut + shift, scale * self.hi_cut + shift);
        let member = |z: i64| {
            let u = z - shift;
            u % scale == 0 && self.contains_i64(u / scale)
        };
        Self::from_fn(period, a.min(b) - scale.abs(), a.max(b) + scale.abs(), member)
    }

    pub fn translate(&self, t: i64) -> Result<Self> {
        self.affine(1, t)
    }

    pub fn reflect(&self) -> Result<Self> {
        self.affine(-1, 0)
    }

    pub fn is_empty(&self) -> bool {
        self.middle.is_empty() && !self.has_down_tail() && !self.has_up_tail()
    }

    /// Same membership, regardless of representation.
    pub fn same_members(&self, other: &Self) -> Result<bool> {
        Ok(self.combine(other, |a, b| a != b)?.is_empty())
    }

    /// `F + self` for a finite `F`.
    pub fn plus_finite(&self, f: &[i64]) -> Result<Self> {
        let mut out = EventualSet::finite(&[]);
        for &x in f {
            out = out.union(&self.translate(x)?)?;
        }
        Ok(out)
    }

    /// Least member of `[lo, hi]`, if any.
    pub fn first_in(&self, lo: i64, hi: i64) -> Option<i64> {
        (lo..=hi).find(|&z| self.contains_i64(z))
    }

    /// Members of `[lo, hi]` in increasing order.
    pub fn window(&self, lo: i64, hi: i64) -> Vec<i64> {
        (lo..=hi).filter(|&z| self.contains_i64(z)).collect()
    }

    /// One-sided view, if the set is bounded below and infinite.
    pub fn to_ep(&self) -> Option<EpSet> {
        if self.has_down_tail() || !self.has_up_tail() {
            return None;
        }
        let lb = self.lower_bound()?.to_i64()?;
        EpSet::from_membership(self.period, lb, self.hi_cut, |z| self.contains_i64(z)).ok()
    }
}
