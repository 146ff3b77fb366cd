//! Dependence certificates, window-restricted MAC verification, pruning to
//! minimal complements, and bounded refutation search.

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclic::CyclicSet;
use crate::sumset::{self, parts, rep_count_inner, Count, Part};
use crate::{Error, Int, IntegerSet, Result, Window};

/// Printed with every window certificate.
pub const WINDOW_CAVEAT: &str = "certified on the stated windows only; this is not a proof for infinite sets";

/// `z` is covered by `C + W` only as `c + (z − c)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DependenceWitness {
    #[serde(serialize_with = "crate::ser::int", deserialize_with = "crate::ser::de_int")]
    pub c: Int,
    #[serde(serialize_with = "crate::ser::int", deserialize_with = "crate::ser::de_int")]
    pub z: Int,
    #[serde(serialize_with = "crate::ser::ints", deserialize_with = "crate::ser::de_ints")]
    pub unique_rep: Vec<Int>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    CertifiedOnWindow,
    CoverageFails {
        z: i64,
    },
    MinimalityFails {
        #[serde(serialize_with = "crate::ser::int", deserialize_with = "crate::ser::de_int")]
        c: Int,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MacReport {
    pub verdict: Verdict,
    pub covered: bool,
    pub coverage_window: Window,
    /// Elements of `C` that were inspected, ascending.
    #[serde(serialize_with = "crate::ser::ints", deserialize_with = "crate::ser::de_ints")]
    pub inspected: Vec<Int>,
    pub witnesses: Vec<DependenceWitness>,
    /// Inspected elements for which no dependent element was found.
    #[serde(serialize_with = "crate::ser::ints", deserialize_with = "crate::ser::de_ints")]
    pub unwitnessed: Vec<Int>,
    pub caveat: String,
}

impl MacReport {
    pub fn certified(&self) -> bool {
        self.verdict == Verdict::CertifiedOnWindow
    }
}

/// Which elements of `C` must have a dependent element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Inspect {
    Window(Window),
    /// Every element; `C` must be finite.
    All,
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Dependent elements of `c` are searched in the coverage window widened
    /// by a slack that doubles from 16 up to this cap. Only used when `W` is
    /// infinite; for finite `W` the candidates `c + W` are all checked.
    pub max_slack: i64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { max_slack: 1 << 10 }
    }
}

fn exact_count(z: &Int, cp: &[Part], wp: &[Part]) -> Result<Count> {
    let r = rep_count_inner(z, cp, wp, None)?;
    if !r.exact {
        return Err(Error::NotExact(format!(
            "representations of {z} cannot be counted exactly (generated set against a left-unbounded set)"
        )));
    }
    Ok(r.count)
}

/// All `z ∈ zone` that depend on `c`: `z ∈ c + W` and `z ∉ (C ∖ {c}) + W`.
pub fn dependents(c: &Int, cset: &IntegerSet, w: &IntegerSet, zone: Window) -> Result<Vec<Int>> {
    if !cset.member(c)? {
        return Err(Error::Precondition(format!("{c} is not in C")));
    }
    let (cp, wp) = (parts(cset), parts(w));
    let mut out = Vec::new();
    for z in zone.iter() {
        let z = Int::from(z);
        if w.member(&(&z - c))? && exact_count(&z, &cp, &wp)?.is_one() {
            out.push(z);
        }
    }
    Ok(out)
}

/// Least dependent element of `c` (searching as described in
/// [`VerifyOptions`]), or `None`.
fn find_dependent(
    c: &Int,
    w: &IntegerSet,
    cp: &[Part],
    wp: &[Part],
    around: Window,
    opts: &VerifyOptions,
) -> Result<Option<Int>> {
    let check = |ws: Vec<Int>| -> Result<Option<Int>> {
        for x in ws {
            let z = c + &x;
            if exact_count(&z, cp, wp)?.is_one() {
                return Ok(Some(z));
            }
        }
        Ok(None)
    };
    if let Some(ws) = w.finite_elements() {
        return check(ws);
    }
    let mut slack = 16i64;
    let mut done: Option<(Int, Int)> = None;
    loop {
        let zone = around.widen(slack);
        let (lo, hi) = (zone.lo_int() - c, zone.hi_int() - c);
        // Skip candidates already examined at the previous slack.
        let mut ws = w.enumerate_range(&lo, &hi)?;
        if let Some((plo, phi)) = &done {
            ws.retain(|x| x < plo || x > phi);
        }
        if let Some(z) = check(ws)? {
            return Ok(Some(z));
        }
        done = Some((lo, hi));
        if slack >= opts.max_slack {
            return Ok(None);
        }
        slack = (slack * 2).min(opts.max_slack);
    }
}

/// First integer of `coverage` not in `C + W`; errors if a miss cannot be
/// confirmed exactly.
pub fn coverage_gap(c: &IntegerSet, w: &IntegerSet, coverage: Window) -> Result<Option<i64>> {
    let (cp, wp) = (parts(c), parts(w));
    for z in coverage.iter() {
        let r = rep_count_inner(&Int::from(z), &cp, &wp, None)?;
        if r.count.is_zero() {
            if !r.exact {
                return Err(Error::NotExact(format!("cannot decide whether {z} is covered")));
            }
            return Ok(Some(z));
        }
    }
    Ok(None)
}

/// Checks that `C + W ⊇ coverage` and that every inspected `c ∈ C` has a
/// dependent element.
pub fn verify_mac(c: &IntegerSet, w: &IntegerSet, coverage: Window, inspect: Inspect) -> Result<MacReport> {
    verify_mac_with(c, w, coverage, inspect, &VerifyOptions::default())
}

pub fn verify_mac_with(
    c: &IntegerSet,
    w: &IntegerSet,
    coverage: Window,
    inspect: Inspect,
    opts: &VerifyOptions,
) -> Result<MacReport> {
    let inspected = match inspect {
        Inspect::Window(iw) => c.enumerate_window(iw)?,
        Inspect::All => c
            .finite_elements()
            .ok_or_else(|| Error::Precondition("inspecting every element needs a finite set".into()))?,
    };
    let gap = coverage_gap(c, w, coverage)?;
    let (cp, wp) = (parts(c), parts(w));
    let found: Vec<Result<Option<Int>>> = inspected
        .par_iter()
        .map(|x| find_dependent(x, w, &cp, &wp, coverage, opts))
        .collect();
    let mut witnesses = Vec::new();
    let mut unwitnessed = Vec::new();
    for (x, f) in inspected.iter().zip(found) {
        match f? {
            Some(z) => witnesses.push(DependenceWitness {
                c: x.clone(),
                unique_rep: vec![x.clone(), &z - x],
                z,
            }),
            None => unwitnessed.push(x.clone()),
        }
    }
    let verdict = match (gap, unwitnessed.first()) {
        (Some(z), _) => Verdict::CoverageFails { z },
        (None, Some(x)) => Verdict::MinimalityFails { c: x.clone() },
        (None, None) => Verdict::CertifiedOnWindow,
    };
    Ok(MacReport {
        verdict,
        covered: gap.is_none(),
        coverage_window: coverage,
        inspected,
        witnesses,
        unwitnessed,
        caveat: WINDOW_CAVEAT.into(),
    })
}

/// Re-checks every witness of a report by direct pair enumeration of
/// `C ∩ [z − max W, z − min W]` against `W`.
pub fn revalidate(report: &MacReport, c: &IntegerSet, w: &IntegerSet) -> Result<bool> {
    for wit in &report.witnesses {
        if wit.unique_rep.len() != 2 || &wit.unique_rep[0] + &wit.unique_rep[1] != wit.z {
            return Ok(false);
        }
        if !c.member(&wit.unique_rep[0])? || !w.member(&wit.unique_rep[1])? {
            return Ok(false);
        }
        if sumset::rep_count(&wit.z, c, w, report.coverage_window)?.count != Count::Finite(1) {
            return Ok(false);
        }
    }
    let cov = sumset::minkowski_window(c, w, report.coverage_window)?;
    let full = cov.elements.len() as u64 == report.coverage_window.len();
    Ok(full == report.covered)
}

/// Greedy pruning in `ℤ/mℤ`: drops residues of `A` in ascending order while
/// `A + B` stays the whole group.
pub fn prune_cyclic(a: &CyclicSet, b: &CyclicSet) -> Result<CyclicSet> {
    if !a.sum(b)?.is_full() {
        return Err(Error::Precondition("A + B is not the whole group".into()));
    }
    let mut cur = *a;
    for r in a.residues() {
        let smaller = cur.without(r);
        if smaller.sum(b)?.is_full() {
            cur = smaller;
        }
    }
    Ok(cur)
}

/// Greedy pruning of a finite `A` against `B` on a window: drops elements in
/// ascending order while `A + B ⊇ window` still holds.
pub fn prune_window(a: &[Int], b: &IntegerSet, window: Window) -> Result<Vec<Int>> {
    let n = window.len() as usize;
    let mut hits: Vec<Vec<usize>> = Vec::with_capacity(a.len());
    let mut cover = vec![0u32; n];
    for x in a {
        let lo = window.lo_int() - x;
        let hi = window.hi_int() - x;
        let idx: Vec<usize> = b
            .enumerate_range(&lo, &hi)?
            .into_iter()
            .map(|y| (&y + x - window.lo_int()).to_usize().expect("inside window"))
            .collect();
        for &i in &idx {
            cover[i] += 1;
        }
        hits.push(idx);
    }
    if let Some(i) = cover.iter().position(|&k| k == 0) {
        return Err(Error::Precondition(format!(
            "{} is not covered by A + B",
            window.lo + i as i64
        )));
    }
    let mut sorted: Vec<usize> = (0..a.len()).collect();
    sorted.sort_by(|&i, &j| a[i].cmp(&a[j]));
    let mut keep = vec![true; a.len()];
    for i in sorted {
        if hits[i].iter().all(|&k| cover[k] > 1) {
            for &k in &hits[i] {
                cover[k] -= 1;
            }
            keep[i] = false;
        }
    }
    let mut out: Vec<Int> = a.iter().zip(keep).filter(|(_, k)| *k).map(|(x, _)| x.clone()).collect();
    out.sort();
    Ok(out)
}

/// One refuted candidate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refutation {
    pub w: Vec<i64>,
    /// An element of `C` with no dependent element.
    pub c: i64,
    /// Set when `c` is the element `c₀ + g(W) + 1` past a long run of
    /// non-members `c₀ < c₀'` with `c₀' − c₀ > g(W) + 2 + span(W)`; such an
    /// element never has a dependent element for any complement `W`.
    pub long_gap_obstruction: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefutationEvidence {
    pub set: String,
    pub w_size_max: usize,
    pub radius: i64,
    pub coverage_window: Window,
    pub inspect_window: Window,
    pub candidates_examined: u64,
    pub covering_candidates: u64,
    /// Covering candidates for which every inspected element of `C` has a
    /// dependent element. Empty means no finite candidate survived.
    pub survivors: Vec<Vec<i64>>,
    /// The first few refutations in lexicographic order of `W`.
    pub refutations: Vec<Refutation>,
    pub caveat: String,
}

/// Largest candidate space `refute_mac_bounded` will enumerate.
pub const REFUTE_CANDIDATE_LIMIT: u64 = 5_000_000;
const REFUTATION_SAMPLE: usize = 20;

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Searches every `W ⊆ [−r, r]` with `1 ≤ |W| ≤ w_size_max` whose sumset
/// with `C` covers `[−r/2, r/2]`, and tries to show that some
/// `c ∈ C ∩ [−r, r]` has no dependent element. Dependence is decided
/// exactly: all pairs involved lie in `[−3r, 3r]`.
pub fn refute_mac_bounded(c: &IntegerSet, w_size_max: usize, radius: i64) -> Result<RefutationEvidence> {
    if !(1..=100_000).contains(&radius) {
        return Err(Error::Precondition("radius must lie in [1, 100000]".into()));
    }
    if w_size_max == 0 {
        return Err(Error::Precondition("w_size_max must be positive".into()));
    }
    let span = 2 * radius as u64 + 1;
    let total: u64 = (1..=w_size_max as u64)
        .map(|k| binomial(span, k))
        .fold(0, u64::saturating_add);
    if total > REFUTE_CANDIDATE_LIMIT {
        return Err(Error::Budget(format!(
            "{total} candidate sets exceed the limit of {REFUTE_CANDIDATE_LIMIT}"
        )));
    }
    let far = Window::new(-3 * radius, 3 * radius)?;
    let mut member = vec![false; far.len() as usize];
    for x in c.enumerate_window(far)? {
        member[(x.to_i64().unwrap() + 3 * radius) as usize] = true;
    }
    let inside = |z: i64| member[(z + 3 * radius) as usize];
    let coverage = Window::new(-radius / 2, radius / 2)?;
    let inspect = Window::new(-radius, radius)?;
    let elements: Vec<i64> = inspect.iter().filter(|&z| inside(z)).collect();

    let judge = |w: &[i64]| -> Option<std::result::Result<Refutation, ()>> {
        if !coverage.iter().all(|z| w.iter().any(|&x| inside(z - x))) {
            return None;
        }
        let has_dependent = |x: i64| {
            w.iter().any(|&y| {
                let z = x + y;
                w.iter().filter(|&&v| inside(z - v)).count() == 1
            })
        };
        let Some(&bad) = elements.iter().find(|&&x| !has_dependent(x)) else {
            return Some(Err(()));
        };
        let obstruction = long_gap_element(w, &inside, far, inspect).filter(|&z| !has_dependent(z));
        Some(Ok(Refutation {
            w: w.to_vec(),
            c: bad,
            long_gap_obstruction: obstruction,
        }))
    };

    // Enumerate subsets lexicographically, parallel over the least element.
    let points: Vec<i64> = inspect.iter().collect();
    let results: Vec<(u64, Vec<Refutation>, Vec<Vec<i64>>)> = (0..points.len())
        .into_par_iter()
        .map(|first| {
            let mut covering = 0u64;
            let mut refs = Vec::new();
            let mut survivors = Vec::new();
            let mut stack = vec![points[first]];
            subsets_from(&points, first + 1, w_size_max, &mut stack, &mut |w| match judge(w) {
                None => {}
                Some(Ok(r)) => {
                    covering += 1;
                    if refs.len() < REFUTATION_SAMPLE {
                        refs.push(r);
                    }
                }
                Some(Err(())) => {
                    covering += 1;
                    survivors.push(w.to_vec());
                }
            });
            (covering, refs, survivors)
        })
        .collect();
    let mut covering_candidates = 0;
    let mut refutations = Vec::new();
    let mut survivors = Vec::new();
    for (n, r, s) in results {
        covering_candidates += n;
        refutations.extend(r);
        survivors.extend(s);
    }
    refutations.sort_by(|a, b| a.w.cmp(&b.w));
    refutations.truncate(REFUTATION_SAMPLE);
    survivors.sort();
    Ok(RefutationEvidence {
        set: crate::expr::print(c),
        w_size_max,
        radius,
        coverage_window: coverage,
        inspect_window: inspect,
        candidates_examined: total,
        covering_candidates,
        survivors,
        refutations,
        caveat: "finite candidates on a finite window only; evidence, not proof".into(),
    })
}

/// Visits `stack ∪ S` for every `S ⊆ points[from..]` with total size at most `k`.
fn subsets_from(points: &[i64], from: usize, k: usize, stack: &mut Vec<i64>, visit: &mut impl FnMut(&[i64])) {
    visit(stack);
    if stack.len() == k {
        return;
    }
    for i in from..points.len() {
        stack.push(points[i]);
        subsets_from(points, i + 1, k, stack, visit);
        stack.pop();
    }
}

/// The element `c₀ + g(W) + 1` for the first long run of non-members
/// `c₀ < c₀'` (consecutive non-members) inside the materialized range.
fn long_gap_element(w: &[i64], inside: &impl Fn(i64) -> bool, far: Window, inspect: Window) -> Option<i64> {
    if w.len() < 2 {
        return None;
    }
    let g = w.windows(2).map(|p| p[1] - p[0]).max().unwrap();
    let spread = w[w.len() - 1] - w[0];
    let mut prev: Option<i64> = None;
    for z in far.iter().filter(|&z| !inside(z)) {
        if let Some(p) = prev {
            let cand = p + g + 1;
            if z - p > g + 2 + spread && inspect.lo <= cand && cand <= inspect.hi {
                return Some(cand);
            }
        }
        prev = Some(z);
    }
    None
}

#[cfg(test)]
mod tests;
