//! Exhaustive search in `ℤ/mℤ`.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::verify::{self, Inspect, MacReport};
use crate::{Error, EventualSet, IntegerSet, Result, Window};

/// Hard ceiling imposed by the 64-bit mask representation.
pub const MASK_BITS: u32 = 64;

/// Subset of `ℤ/mℤ` stored as an `m`-bit mask (bit `i` ↔ residue `i`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CyclicSet {
    m: u32,
    bits: u64,
}

impl fmt::Debug for CyclicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} mod {}", self.residues(), self.m)
    }
}

#[inline]
fn full_mask(m: u32) -> u64 {
    if m == 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}

/// Rotates an `m`-bit mask by `t` positions (adds `t` to every residue).
#[inline]
pub(crate) fn rotate(bits: u64, t: u32, m: u32) -> u64 {
    let t = t % m;
    if t == 0 {
        return bits;
    }
    ((bits << t) | (bits >> (m - t))) & full_mask(m)
}

impl CyclicSet {
    pub fn new(m: u32, residues: &[i64]) -> Result<Self> {
        Self::check_modulus(m)?;
        let bits = residues.iter().fold(0u64, |b, &r| b | 1 << r.rem_euclid(m as i64));
        Ok(CyclicSet { m, bits })
    }

    pub fn from_bits(m: u32, bits: u64) -> Result<Self> {
        Self::check_modulus(m)?;
        Ok(CyclicSet {
            m,
            bits: bits & full_mask(m),
        })
    }

    pub(crate) fn raw(m: u32, bits: u64) -> Self {
        CyclicSet { m, bits }
    }

    fn check_modulus(m: u32) -> Result<()> {
        if m == 0 {
            return Err(Error::InvalidPeriod(0));
        }
        if m > MASK_BITS {
            return Err(Error::ModulusTooLarge { m, max: MASK_BITS });
        }
        Ok(())
    }

    pub fn full(m: u32) -> Result<Self> {
        Self::from_bits(m, u64::MAX)
    }

    pub fn empty(m: u32) -> Result<Self> {
        Self::from_bits(m, 0)
    }

    pub fn modulus(&self) -> u32 {
        self.m
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_full(&self) -> bool {
        self.bits == full_mask(self.m)
    }

    pub fn contains(&self, r: u32) -> bool {
        r < self.m && self.bits >> r & 1 == 1
    }

    pub fn residues(&self) -> Vec<u32> {
        (0..self.m).filter(|&r| self.contains(r)).collect()
    }

    pub fn with(&self, r: u32) -> Self {
        CyclicSet::raw(self.m, self.bits | 1 << (r % self.m))
    }

    pub fn without(&self, r: u32) -> Self {
        CyclicSet::raw(self.m, self.bits & !(1 << (r % self.m)))
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.bits & !other.bits == 0
    }

    /// `S + t`.
    pub fn translate(&self, t: i64) -> Self {
        CyclicSet::raw(self.m, rotate(self.bits, t.rem_euclid(self.m as i64) as u32, self.m))
    }

    /// `−S`.
    pub fn negate(&self) -> Self {
        let bits = self
            .residues()
            .into_iter()
            .fold(0u64, |b, r| b | 1 << ((self.m - r) % self.m));
        CyclicSet::raw(self.m, bits)
    }

    /// `S + T`.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        if self.m != other.m {
            return Err(Error::ModulusMismatch(self.m, other.m));
        }
        Ok(CyclicSet::raw(self.m, sum_bits(self.bits, other.bits, self.m)))
    }
}

#[inline]
pub(crate) fn sum_bits(a: u64, b: u64, m: u32) -> u64 {
    let mut out = 0;
    let mut rest = a;
    while rest != 0 {
        let r = rest.trailing_zeros();
        out |= rotate(b, r, m);
        rest &= rest - 1;
    }
    out
}

/// Default ceiling on the modulus for exhaustive sweeps.
pub const DEFAULT_MAX_MODULUS: u32 = 24;

/// Environment variable overriding [`DEFAULT_MAX_MODULUS`].
pub const MAX_MODULUS_ENV: &str = "MINCOMP_MAX_MODULUS";

#[derive(Clone, Copy, Debug)]
pub struct CyclicOptions {
    pub max_modulus: u32,
}

impl Default for CyclicOptions {
    fn default() -> Self {
        let max_modulus = std::env::var(MAX_MODULUS_ENV)
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(DEFAULT_MAX_MODULUS)
            .min(MASK_BITS);
        CyclicOptions { max_modulus }
    }
}

impl CyclicOptions {
    fn check(&self, m: u32) -> Result<()> {
        if m > self.max_modulus {
            return Err(Error::ModulusTooLarge {
                m,
                max: self.max_modulus,
            });
        }
        Ok(())
    }
}

/// Residues covered at least once and at least twice by `C + W`.
fn cover_counts(c: u64, w: u64, m: u32) -> (u64, u64) {
    let (mut once, mut twice) = (0u64, 0u64);
    let mut rest = w;
    while rest != 0 {
        let r = rotate(c, rest.trailing_zeros(), m);
        twice |= once & r;
        once |= r;
        rest &= rest - 1;
    }
    (once, twice)
}

/// Every `c ∈ C` has some `z ∈ c + W` outside `(C ∖ {c}) + W`.
fn all_have_private(c: u64, w: u64, twice: u64, m: u32) -> bool {
    let mut rest = c;
    while rest != 0 {
        if rotate(w, rest.trailing_zeros(), m) & !twice == 0 {
            return false;
        }
        rest &= rest - 1;
    }
    true
}

/// Whether `C` is a minimal additive complement to `W` in `ℤ/mℤ`.
pub fn is_minimal_complement(c: &CyclicSet, w: &CyclicSet) -> Result<bool> {
    if c.m != w.m {
        return Err(Error::ModulusMismatch(c.m, w.m));
    }
    let (once, twice) = cover_counts(c.bits, w.bits, c.m);
    Ok(once == full_mask(c.m) && all_have_private(c.bits, w.bits, twice, c.m))
}

/// `C` is minimal with respect to its own sumset: no proper subset has the
/// same sum with `W`.
pub fn is_sumset_minimal(c: &CyclicSet, w: &CyclicSet) -> bool {
    let (_, twice) = cover_counts(c.bits, w.bits, c.m);
    all_have_private(c.bits, w.bits, twice, c.m)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicMacAnswer {
    pub m: u32,
    pub arises: bool,
    pub witness: Option<Vec<u32>>,
    /// The whole candidate space was searched.
    pub exhausted: bool,
}

/// Masks over `m` bits with bit 0 set and `k` bits in total, ascending.
fn masks_with_zero(m: u32, k: u32) -> Vec<u64> {
    if k == 0 || k > m {
        return Vec::new();
    }
    let mut out = Vec::new();
    if k == 1 {
        return vec![1];
    }
    // Gosper's hack over the remaining m − 1 bits.
    let r = k - 1;
    let limit = 1u64 << (m - 1);
    let mut x = (1u64 << r) - 1;
    while x < limit {
        out.push(x << 1 | 1);
        let c = x & x.wrapping_neg();
        let y = x + c;
        x = (((y ^ x) >> 2) / c) | y;
    }
    out
}

/// Searches for `W ∋ 0` making `C` a minimal additive complement, by
/// increasing size and then mask value.
pub fn solve_arises(c: &CyclicSet, opts: &CyclicOptions) -> Result<CyclicMacAnswer> {
    let m = c.m;
    opts.check(m)?;
    if c.is_empty() {
        return Err(Error::Precondition("C must be nonempty".into()));
    }
    let full = full_mask(m);
    for k in 1..=m {
        let found = masks_with_zero(m, k).into_par_iter().find_first(|&w| {
            let (once, twice) = cover_counts(c.bits, w, m);
            once == full && all_have_private(c.bits, w, twice, m)
        });
        if let Some(w) = found {
            return Ok(CyclicMacAnswer {
                m,
                arises: true,
                witness: Some(CyclicSet::raw(m, w).residues()),
                exhausted: false,
            });
        }
    }
    Ok(CyclicMacAnswer {
        m,
        arises: false,
        witness: None,
        exhausted: true,
    })
}

/// Depth-first search over minimal complements to `W`, deciding residues in
/// increasing order. Branches die as soon as some residue can no longer be
/// covered or some chosen element has lost every private residue.
struct Search<'a> {
    m: u32,
    w: u64,
    /// `suffix[i]` is everything `{i, …, m−1} + W` can cover.
    suffix: Vec<u64>,
    keep: &'a mut dyn FnMut(u64),
    /// `(chosen so far, undecided)` → whether the branch may still matter.
    promising: &'a dyn Fn(u32, u32) -> bool,
}

impl Search<'_> {
    fn new<'a>(m: u32, w: u64, keep: &'a mut dyn FnMut(u64), promising: &'a dyn Fn(u32, u32) -> bool) -> Search<'a> {
        let mut suffix = vec![0u64; m as usize + 1];
        for i in (0..m as usize).rev() {
            suffix[i] = suffix[i + 1] | rotate(w, i as u32, m);
        }
        Search {
            m,
            w,
            suffix,
            keep,
            promising,
        }
    }

    fn run(&mut self, i: u32, chosen: u64, once: u64, twice: u64) {
        let full = full_mask(self.m);
        if (once | self.suffix[i as usize]) != full {
            return;
        }
        if !all_have_private(chosen, self.w, twice, self.m) {
            return;
        }
        if !(self.promising)(chosen.count_ones(), self.m - i) {
            return;
        }
        if i == self.m {
            if once == full {
                (self.keep)(chosen);
            }
            return;
        }
        let r = rotate(self.w, i, self.m);
        self.run(i + 1, chosen | 1 << i, once | r, twice | (once & r));
        self.run(i + 1, chosen, once, twice);
    }
}

/// Every minimal additive complement to `W`, sorted by size then mask.
pub fn enumerate_minimal_complements(w: &CyclicSet, opts: &CyclicOptions) -> Result<Vec<CyclicSet>> {
    opts.check(w.m)?;
    if w.is_empty() {
        return Err(Error::Precondition("W must be nonempty".into()));
    }
    let mut found = Vec::new();
    let mut keep = |c: u64| found.push(c);
    let all = |_: u32, _: u32| true;
    Search::new(w.m, w.bits, &mut keep, &all).run(0, 0, 0, 0);
    found.sort_by_key(|&c| (c.count_ones(), c));
    Ok(found.into_iter().map(|c| CyclicSet::raw(w.m, c)).collect())
}

/// Largest and smallest minimal complement to `W` containing 0. By
/// translation these sizes are the extremes over all minimal complements.
fn extremes_through_zero(w: &CyclicSet) -> Option<(u64, u64)> {
    let m = w.m;
    let best = std::cell::Cell::new((u32::MAX, 0u32));
    let (mut small, mut large) = (None, None);
    let mut keep = |c: u64| {
        let n = c.count_ones();
        let (lo, hi) = best.get();
        if n < lo {
            small = Some(c);
        }
        if n > hi {
            large = Some(c);
        }
        best.set((lo.min(n), hi.max(n)));
    };
    let promising = |chosen: u32, undecided: u32| {
        let (lo, hi) = best.get();
        chosen < lo || chosen + undecided > hi
    };
    let mut search = Search::new(m, w.bits, &mut keep, &promising);
    // Residue 0 is always chosen.
    let r = rotate(w.bits, 0, m);
    search.run(1, 1, r, 0);
    Some((small?, large?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CayleyDomination {
    pub n: u32,
    pub gamma: u32,
    pub upper_gamma: u32,
    pub gamma_witness: Vec<u32>,
    pub upper_gamma_witness: Vec<u32>,
}

/// `{0}` together with the units of `ℤ/nℤ`.
pub fn unit_set(n: u32) -> Result<CyclicSet> {
    let units: Vec<i64> = (0..n as i64)
        .filter(|&x| x == 0 || num_integer::gcd(x, n as i64) == 1)
        .collect();
    CyclicSet::new(n, &units)
}

/// Domination number and upper domination number of the unitary Cayley
/// graph on `ℤ/nℤ`, as the extreme sizes of minimal complements to the
/// unit set.
pub fn cayley_domination(n: u32, opts: &CyclicOptions) -> Result<CayleyDomination> {
    if n < 2 {
        return Err(Error::Precondition("n must be at least 2".into()));
    }
    opts.check(n)?;
    let p = unit_set(n)?;
    let (small, large) = extremes_through_zero(&p).expect("the full group is a complement");
    Ok(CayleyDomination {
        n,
        gamma: small.count_ones(),
        upper_gamma: large.count_ones(),
        gamma_witness: CyclicSet::raw(n, small).residues(),
        upper_gamma_witness: CyclicSet::raw(n, large).residues(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumsetBoundExtreme {
    pub k: u32,
    /// Largest `|C|` seen for this `k`.
    pub max_c: u32,
    /// `⌊k·|G| / (2k − 1)⌋`.
    pub bound_floor: u32,
    pub c: Vec<u32>,
    pub w: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumsetBoundReport {
    pub order: u32,
    pub pairs_checked: u64,
    pub violations: Vec<(Vec<u32>, Vec<u32>)>,
    pub extremes: Vec<SumsetBoundExtreme>,
}

/// Largest order accepted by [`check_minimal_sumset_bound`].
pub const SUMSET_BOUND_MAX_ORDER: u32 = 14;

/// Sweeps all `C, W ∋ 0` in `ℤ/gℤ` with `|W| ≥ 2` and `C` minimal for its
/// sum with `W`, checking `|C|(2k − 1) ≤ k·g`.
pub fn check_minimal_sumset_bound(g: u32) -> Result<SumsetBoundReport> {
    if g == 0 {
        return Err(Error::InvalidPeriod(0));
    }
    if g > SUMSET_BOUND_MAX_ORDER {
        return Err(Error::ModulusTooLarge {
            m: g,
            max: SUMSET_BOUND_MAX_ORDER,
        });
    }
    let half = 1u64 << (g - 1);
    let mut extremes = Vec::new();
    let mut violations = Vec::new();
    let mut pairs = 0u64;
    for k in 2..=g {
        let ws = masks_with_zero(g, k);
        // (max |C|, c, w) per W, and violations.
        #[allow(clippy::type_complexity)]
        let per_w: Vec<(u32, u64, u64, Vec<(u64, u64)>, u64)> = ws
            .par_iter()
            .map(|&w| {
                let mut best = (0u32, 0u64);
                let mut bad = Vec::new();
                for tail in 0..half {
                    let c = tail << 1 | 1;
                    let (_, twice) = cover_counts(c, w, g);
                    if !all_have_private(c, w, twice, g) {
                        continue;
                    }
                    let n = c.count_ones();
                    if n as u64 * (2 * k as u64 - 1) > k as u64 * g as u64 {
                        bad.push((c, w));
                    }
                    if n > best.0 {
                        best = (n, c);
                    }
                }
                (best.0, best.1, w, bad, half)
            })
            .collect();
        let mut top: Option<(u32, u64, u64)> = None;
        for (n, c, w, bad, count) in per_w {
            pairs += count;
            violations.extend(
                bad.into_iter()
                    .map(|(c, w)| (CyclicSet::raw(g, c).residues(), CyclicSet::raw(g, w).residues())),
            );
            if top.is_none_or(|t| n > t.0) {
                top = Some((n, c, w));
            }
        }
        if let Some((n, c, w)) = top {
            extremes.push(SumsetBoundExtreme {
                k,
                max_c: n,
                bound_floor: k * g / (2 * k - 1),
                c: CyclicSet::raw(g, c).residues(),
                w: CyclicSet::raw(g, w).residues(),
            });
        }
    }
    Ok(SumsetBoundReport {
        order: g,
        pairs_checked: pairs,
        violations,
        extremes,
    })
}

/// An integer pair lifted from a cyclic witness.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuotientLift {
    pub m: u32,
    pub w: Vec<i64>,
    pub report: MacReport,
}

/// Lifts a cyclic witness for `C mod m` to `W ⊂ ℤ` with one element per
/// witness residue, and certifies the pair on `[−m, 2m]`.
pub fn quotient_lift(c: &EventualSet, answer: &CyclicMacAnswer) -> Result<QuotientLift> {
    let m = answer.m;
    let residues: Vec<u32> = (0..m).filter(|&r| c.contains_i64(r as i64)).collect();
    let periodic = EventualSet::periodic(m as u64, &residues)?;
    if !c.same_members(&periodic)? {
        return Err(Error::Precondition(format!("C is not periodic with period {m}")));
    }
    let witness = answer
        .witness
        .as_ref()
        .filter(|_| answer.arises)
        .ok_or_else(|| Error::Precondition("the cyclic answer has no witness".into()))?;
    let w: Vec<i64> = witness.iter().map(|&r| r as i64).collect();
    let mi = m as i64;
    let window = Window::new(-mi, 2 * mi)?;
    let report = verify::verify_mac(
        &IntegerSet::Eventual(c.clone()),
        &IntegerSet::finite(&w),
        window,
        Inspect::Window(window),
    )?;
    Ok(QuotientLift { m, w, report })
}

#[cfg(test)]
mod tests;
