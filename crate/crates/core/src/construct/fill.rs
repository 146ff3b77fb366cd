use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{ConstructionTrace, TraceStep};
use crate::verify::{self, DependenceWitness, Inspect, MacReport, VerifyOptions};
use crate::{Error, Int, IntegerSet, LazySet, Result, Window};

#[derive(Clone, Copy, Debug)]
pub struct ConstructOptions {
    /// Most candidates examined by any single search in a step.
    pub budget: u64,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        ConstructOptions { budget: 1_000_000 }
    }
}

/// Output of [`build_d`]: `C + D ⊇ [−depth, 0]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DConstruction {
    #[serde(serialize_with = "crate::ser::ints", deserialize_with = "crate::ser::de_ints")]
    pub d: Vec<Int>,
    pub trace: ConstructionTrace,
}

/// Output of [`build_w`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WConstruction {
    #[serde(serialize_with = "crate::ser::ints", deserialize_with = "crate::ser::de_ints")]
    pub w: Vec<Int>,
    #[serde(serialize_with = "crate::ser::ints", deserialize_with = "crate::ser::de_ints")]
    pub d: Vec<Int>,
    /// `c_1, …, c_{n+1}` for `n` extension steps.
    #[serde(serialize_with = "crate::ser::ints", deserialize_with = "crate::ser::de_ints")]
    pub c_prefix: Vec<Int>,
    /// `z_i` is represented only as `c_i + (z_i − c_i)`.
    pub witnesses: Vec<DependenceWitness>,
    /// `C + W` contains every integer in `[−fill depth, coverage_bound)`.
    #[serde(serialize_with = "crate::ser::int", deserialize_with = "crate::ser::de_int")]
    pub coverage_bound: Int,
    pub trace: ConstructionTrace,
}

/// A co-minimal pair certified on a window.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoMinimalPair {
    pub c: String,
    /// The pruned partner `W'`.
    #[serde(serialize_with = "crate::ser::ints", deserialize_with = "crate::ser::de_ints")]
    pub w: Vec<Int>,
    /// Size of `W` before pruning.
    pub unpruned_size: usize,
    pub certified_window: Window,
    /// Window on which `W` was pruned; it contains every `z_i`.
    pub support: Window,
    /// `C` is a MAC to `W'` on the window.
    pub c_to_w: MacReport,
    /// `W'` is a MAC to `C` on the window.
    pub w_to_c: MacReport,
    pub trace: ConstructionTrace,
}

/// The lazy set translated so its least element is 1, and the translation.
fn normalize(c: &IntegerSet) -> Result<(LazySet, Int)> {
    let IntegerSet::Lazy(l) = c else {
        return Err(Error::Precondition(
            "the construction needs an infinite generated set".into(),
        ));
    };
    if !l.gap_promise() {
        return Err(Error::Precondition(format!(
            "{} does not promise arbitrarily large gaps",
            l.describe()
        )));
    }
    let shift = Int::one() - l.min()?;
    let shift = if shift.is_negative() { Int::zero() } else { shift };
    Ok((l.translate(&shift), shift))
}

/// Runs of `(C + D) ∩ [0, ∞)`, merged in increasing order on demand. Only
/// the statistics needed by increasing gap queries are kept.
struct SumRuns<'a> {
    c: &'a LazySet,
    d: Vec<Int>,
    heap: BinaryHeap<Reverse<(Int, Int, usize, usize)>>,
    merged: usize,
    first: Option<(Int, Int)>,
    last_end: Option<Int>,
    /// Largest gap between consecutive merged runs.
    max_gap: Int,
}

impl<'a> SumRuns<'a> {
    fn new(c: &'a LazySet, d: &[Int]) -> Result<Self> {
        let mut s = SumRuns {
            c,
            d: d.to_vec(),
            heap: BinaryHeap::new(),
            merged: 0,
            first: None,
            last_end: None,
            max_gap: Int::zero(),
        };
        for (j, x) in d.iter().enumerate() {
            if let Some(k) = c.run_at_or_after(&-x)? {
                s.push(j, k)?;
            }
        }
        Ok(s)
    }

    fn push(&mut self, j: usize, k: usize) -> Result<()> {
        if let Some(r) = self.c.run(k)? {
            let x = &self.d[j];
            self.heap.push(Reverse((&r.start + x, &r.end + x, j, k)));
        }
        Ok(())
    }

    fn advance_below(&mut self, bound: &Int) -> Result<()> {
        while let Some(Reverse((s, _, _, _))) = self.heap.peek() {
            if s >= bound {
                break;
            }
            let Reverse((s, e, j, k)) = self.heap.pop().unwrap();
            self.push(j, k + 1)?;
            let s = s.max(Int::zero());
            match &mut self.last_end {
                Some(last) if s <= &*last + 1 => {
                    if e > *last {
                        *last = e.clone();
                        if self.merged == 1 {
                            self.first.as_mut().unwrap().1 = e;
                        }
                    }
                }
                _ => {
                    if let Some(last) = &self.last_end {
                        let gap = &s - last;
                        if gap > self.max_gap {
                            self.max_gap = gap;
                        }
                    }
                    self.merged += 1;
                    if self.merged == 1 {
                        self.first = Some((s, e.clone()));
                    } else {
                        self.first = None;
                    }
                    self.last_end = Some(e);
                }
            }
        }
        Ok(())
    }

    /// Whether `g([0, x) ∩ (C + D)) ≥ need`, the gap being 0 when there
    /// are fewer than two elements. Queries must not decrease.
    fn gap_at_least(&mut self, x: &Int, need: &Int) -> Result<bool> {
        // The gap only grows with `x`.
        if self.merged >= 2 && self.max_gap >= *need {
            return Ok(true);
        }
        self.advance_below(x)?;
        Ok(match self.merged {
            0 => need.is_zero() || need.is_negative(),
            1 => {
                let (s, e) = self.first.as_ref().unwrap();
                let gap = if e.clone().min(x - 1) > *s {
                    Int::one()
                } else {
                    Int::zero()
                };
                gap >= *need
            }
            _ => self.max_gap >= *need,
        })
    }
}

fn member_sum(c: &LazySet, d: &[Int], z: &Int) -> Result<bool> {
    for x in d {
        if c.contains(&(z - x))? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn budget_err(what: &str, budget: u64) -> Error {
    Error::Exhausted(format!(
        "{what}: no candidate within a budget of {budget}; the gap promise may not hold"
    ))
}

/// The chain `h(0) = 0 < h(1) < … < h(upto)` against the current `D`:
/// `h(k)` is the least index past `h(k − 1)` with `c_{h+1} − c_h ≥ k` and
/// `g([0, c_{h+1}) ∩ (C + D)) ≥ k`.
/// `h` is extended in place, so a shorter chain can be continued.
fn h_chain(c: &LazySet, sums: &mut SumRuns, h: &mut Vec<Int>, upto: usize, opts: &ConstructOptions) -> Result<()> {
    if h.is_empty() {
        h.push(Int::zero());
    }
    for k in h.len()..=upto {
        let need = Int::from(k);
        let mut n = &h[k - 1] + 1;
        let mut scanned = 0u64;
        loop {
            scanned += 1;
            if scanned > opts.budget {
                return Err(budget_err(&format!("h({k})"), opts.budget));
            }
            let x = c.element(&n)?;
            let ri = c.run_at_or_after(&x)?.expect("element lies in a run");
            let run = c.run(ri)?.expect("run exists");
            let last = &run.first_index + run.len() - 1;
            if k >= 2 && n < last {
                // Inside a run consecutive differences are 1.
                n = last;
                continue;
            }
            let next = if n < last {
                &x + 1
            } else {
                c.run(ri + 1)?.expect("infinite set").start
            };
            if &next - &x >= need && sums.gap_at_least(&next, &need)? {
                h.push(n);
                break;
            }
            n += 1;
        }
    }
    Ok(())
}

fn to_index(t: &Int, what: &str) -> Result<usize> {
    t.to_usize()
        .filter(|&v| v <= 10_000_000)
        .ok_or_else(|| Error::Budget(format!("{what} = {t} is too large to iterate")))
}

/// `D` with `C' + D ⊇ [−depth, 0]` for the normalized `C'`.
fn fill(c: &LazySet, shift: &Int, depth: usize, opts: &ConstructOptions) -> Result<(Vec<Int>, Vec<TraceStep>)> {
    let c1 = c.min()?;
    let mut d = vec![-&c1];
    let mut steps = Vec::new();
    let mut s0 = TraceStep::new("fill", 0);
    s0.x_i = Some(&d[0] + shift);
    s0.added_sets = vec![&d[0] + shift];
    steps.push(s0);
    for i in 1..=depth {
        let mut y = Int::zero();
        let mut scanned = 0u64;
        while member_sum(c, &d, &y)? {
            y -= 1;
            scanned += 1;
            if scanned > opts.budget {
                return Err(budget_err("y_i", opts.budget));
            }
        }
        if y > -Int::from(i) {
            return Err(Error::Construction(format!("y_{i} = {y} exceeds −{i}")));
        }
        let mut sums = SumRuns::new(c, &d)?;
        let mut h = Vec::new();
        h_chain(c, &mut sums, &mut h, i, opts)?;
        let t = c.element(&(&h[i] + 1))? - &y;
        let tn = to_index(&t, "t_i")?;
        h_chain(c, &mut sums, &mut h, tn, opts)?;
        let x = &y - c.element(&h[tn])?;
        let mut step = TraceStep::new("fill", i);
        step.h_values = vec![(Int::from(i), h[i].clone()), (t.clone(), h[tn].clone())];
        step.y_i = Some(y);
        step.t_i = Some(t);
        step.x_i = Some(&x + shift);
        step.added_sets = vec![&x + shift];
        steps.push(step);
        d.push(x);
    }
    for z in -(depth as i64)..=0 {
        if !member_sum(c, &d, &Int::from(z))? {
            return Err(Error::Construction(format!("{z} is not covered after filling")));
        }
    }
    Ok((d, steps))
}

/// Finite `D ⊆ ℤ_{<0}` (after normalization) with `C + D ⊇ [−depth, 0]`,
/// built so that each added element keeps large gaps in `C + D`.
pub fn build_d(c: &IntegerSet, depth: usize, opts: &ConstructOptions) -> Result<DConstruction> {
    let (cn, shift) = normalize(c)?;
    let (d, steps) = fill(&cn, &shift, depth, opts)?;
    let mut d: Vec<Int> = d.into_iter().map(|x| x + &shift).collect();
    d.sort();
    Ok(DConstruction {
        d,
        trace: ConstructionTrace { shift, steps },
    })
}

struct Extension {
    w: Vec<Int>,
    d: Vec<Int>,
    c_prefix: Vec<Int>,
    z: Vec<Int>,
    bound: Int,
    steps: Vec<TraceStep>,
}

/// Fills to `fill_depth`, then adds extension steps until `done(n, bound)`.
fn extend(
    c: &LazySet,
    shift: &Int,
    fill_depth: usize,
    opts: &ConstructOptions,
    mut done: impl FnMut(usize, &Int) -> bool,
) -> Result<Extension> {
    let (d, mut steps) = fill(c, shift, fill_depth, opts)?;
    let mut w = d.clone();
    let c1 = c.min()?;
    let mut c_prefix = vec![c1.clone()];
    let mut zs: Vec<Int> = Vec::new();
    let mut bound = Int::one();
    let mut i = 0usize;
    while i == 0 || !done(i, &bound) {
        i += 1;
        let ci = c.element(&Int::from(i))?;
        let next = c.element(&Int::from(i + 1))?;
        c_prefix.push(next.clone());
        let mut z = zs.last().map_or(Int::one(), |z| z + 1);
        let mut scanned = 0u64;
        while member_sum(c, &w, &z)? {
            z += 1;
            scanned += 1;
            if scanned > opts.budget {
                return Err(budget_err("z_i", opts.budget));
            }
        }
        let k = c.max_gap_in(&c1, &next)?.expect("two elements");
        let kn = to_index(&k, "k_i")?;
        let mut added = vec![&z - &ci];
        let base = &z - &c1;
        added.extend((1..=kn).map(|j| &base + j));
        let mut step = TraceStep::new("extend", i);
        step.z_i = Some(z.clone());
        step.k_i = Some(k.clone());
        step.added_sets = added.iter().map(|x| x + shift).collect();
        steps.push(step);
        w.extend(added);
        bound = &next - &c1 + &k + &z;
        zs.push(z);
    }
    w.sort();
    w.dedup();
    Ok(Extension {
        w,
        d,
        c_prefix,
        z: zs,
        bound,
        steps,
    })
}

fn finish_extension(c: &LazySet, shift: &Int, ext: Extension) -> Result<WConstruction> {
    let mut witnesses = Vec::new();
    for (i, z) in ext.z.iter().enumerate() {
        let ci = &ext.c_prefix[i];
        let mut reps = 0;
        for x in &ext.w {
            if c.contains(&(z - x))? {
                reps += 1;
            }
        }
        if reps != 1 {
            return Err(Error::Construction(format!(
                "z_{} = {z} has {reps} representations",
                i + 1
            )));
        }
        if let Some(zn) = ext.z.get(i + 1) {
            if *zn <= &ext.c_prefix[i + 1] + z {
                return Err(Error::Construction(format!(
                    "z_{} does not clear c_{} + z_{}",
                    i + 2,
                    i + 2,
                    i + 1
                )));
            }
        }
        witnesses.push(DependenceWitness {
            c: ci - shift,
            z: z.clone(),
            unique_rep: vec![ci - shift, z - ci + shift],
        });
    }
    let up = |v: Vec<Int>| -> Vec<Int> {
        let mut v: Vec<Int> = v.into_iter().map(|x| x + shift).collect();
        v.sort();
        v
    };
    Ok(WConstruction {
        w: up(ext.w),
        d: up(ext.d),
        c_prefix: ext.c_prefix.into_iter().map(|x| x - shift).collect(),
        witnesses,
        coverage_bound: ext.bound,
        trace: ConstructionTrace {
            shift: shift.clone(),
            steps: ext.steps,
        },
    })
}

/// `W` with `C + W ⊇ [−depth, bound)` in which each `z_i` (`i ≤ depth`) is
/// represented only as `c_i + (z_i − c_i)`.
pub fn build_w(c: &IntegerSet, depth: usize, opts: &ConstructOptions) -> Result<WConstruction> {
    let (cn, shift) = normalize(c)?;
    let ext = extend(&cn, &shift, depth, opts, |n, _| n >= depth)?;
    finish_extension(&cn, &shift, ext)
}

/// Builds `W`, prunes it against `C` on a support window containing every
/// `z_i`, and certifies both MAC directions on `window`.
pub fn build_cominimal(c: &IntegerSet, window: Window, opts: &ConstructOptions) -> Result<CoMinimalPair> {
    let (cn, shift) = normalize(c)?;
    let fill_depth = (-window.lo).max(0) as usize;
    let hi_n = Int::from(window.hi) + &shift;
    let ext = extend(&cn, &shift, fill_depth, opts, |n, bound| {
        // Every element of C up to window.hi must be some c_i with i ≤ n.
        *bound > hi_n && cn.element(&Int::from(n + 1)).map_or(true, |x| x > hi_n)
    })?;
    let built = finish_extension(&cn, &shift, ext)?;
    let top = built
        .witnesses
        .iter()
        .map(|w| w.z.clone())
        .max()
        .unwrap_or_default()
        .max(Int::from(window.hi));
    let top = top
        .to_i64()
        .ok_or_else(|| Error::Budget("dependent elements beyond the i64 range".into()))?;
    let support = Window::new(window.lo, top)?;
    let pruned = verify::prune_window(&built.w, c, support)?;
    let w_set = IntegerSet::Finite(crate::FiniteSet::new(pruned.clone())?);
    let c_to_w = verify::verify_mac(c, &w_set, window, Inspect::Window(window))?;
    let vopts = VerifyOptions {
        max_slack: (top - window.hi + 16).max(VerifyOptions::default().max_slack),
    };
    let w_to_c = verify::verify_mac_with(&w_set, c, window, Inspect::All, &vopts)?;
    if !c_to_w.certified() || !w_to_c.certified() {
        return Err(Error::Construction(format!(
            "certification failed: C→W {:?}, W→C {:?}",
            c_to_w.verdict, w_to_c.verdict
        )));
    }
    Ok(CoMinimalPair {
        c: crate::expr::print(c),
        w: pruned,
        unpruned_size: built.w.len(),
        certified_window: window,
        support,
        c_to_w,
        w_to_c,
        trace: built.trace,
    })
}
