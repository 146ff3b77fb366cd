use std::fmt;
use std::sync::{Arc, Mutex};

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Int, Result};

/// Maximum number of maximal runs a lazy set may materialize.
pub const DEFAULT_RUN_BUDGET: usize = 1 << 20;

/// Produces a strictly increasing sequence of disjoint integer intervals.
pub trait RunSource: Send {
    /// Next interval `[start, end]`, or `None` if the set is finite.
    fn next_run(&mut self) -> Option<(Int, Int)>;
}

/// A maximal interval of consecutive members. `first_index` is the 1-based
/// index of `start` in the increasing enumeration of the set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    pub start: Int,
    pub end: Int,
    pub first_index: Int,
}

impl Run {
    pub fn len(&self) -> Int {
        &self.end - &self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn shifted(&self, t: &Int) -> Run {
        Run {
            start: &self.start + t,
            end: &self.end + t,
            first_index: self.first_index.clone(),
        }
    }
}

struct State {
    source: Box<dyn RunSource>,
    runs: Vec<Run>,
    exhausted: bool,
}

struct Inner {
    name: String,
    gap_promise: bool,
    budget: usize,
    state: Mutex<State>,
}

/// A bounded-below, strictly increasing integer set produced on demand.
///
/// Runs of consecutive members are memoized; queries extend the memo as far
/// as needed and fail if the source stops being increasing or the run budget
/// is exhausted. Clones share the memo.
#[derive(Clone)]
pub struct LazySet {
    inner: Arc<Inner>,
    offset: Int,
}

impl fmt::Debug for LazySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LazySet")
            .field("name", &self.inner.name)
            .field("offset", &self.offset)
            .field("gap_promise", &self.inner.gap_promise)
            .finish()
    }
}

impl LazySet {
    pub fn from_source(name: impl Into<String>, gap_promise: bool, source: Box<dyn RunSource>) -> Self {
        LazySet {
            inner: Arc::new(Inner {
                name: name.into(),
                gap_promise,
                budget: DEFAULT_RUN_BUDGET,
                state: Mutex::new(State {
                    source,
                    runs: Vec::new(),
                    exhausted: false,
                }),
            }),
            offset: Int::zero(),
        }
    }

    /// `{base^k : k ≥ 0}`.
    pub fn powers(base: u32) -> Result<Self> {
        if base < 2 {
            return Err(Error::Precondition("power base must be at least 2".into()));
        }
        let name = if base == 2 {
            "pow2".to_string()
        } else {
            format!("pow({base})")
        };
        let mut next = Int::one();
        Ok(Self::points(name, true, move || {
            let x = next.clone();
            next *= base;
            x
        }))
    }

    /// `{2^k − 1 : k ≥ 1}`.
    pub fn mersenne() -> Self {
        let mut p = Int::from(2);
        Self::points("mersenne", true, move || {
            let x = &p - 1;
            p *= 2;
            x
        })
    }

    /// `x_0 = start`, `x_{n+1} = max(x_n + 1, ⌈λ·x_n⌉)` with `λ = num/den > 1`.
    pub fn lacunary(num: u64, den: u64, start: i64) -> Result<Self> {
        if den == 0 || num <= den {
            return Err(Error::Precondition(format!("lacunary ratio {num}/{den} must exceed 1")));
        }
        if start < 1 {
            return Err(Error::Precondition("lacunary start must be positive".into()));
        }
        let g = num.gcd(&den);
        let (num, den) = (num / g, den / g);
        let ratio = if den == 1 {
            num.to_string()
        } else {
            format!("{num}/{den}")
        };
        let name = format!("lacunary(lambda={ratio},start={start})");
        let mut next = Int::from(start);
        Ok(Self::points(name, true, move || {
            let x = next.clone();
            let scaled = (&x * num).div_ceil(&Int::from(den));
            next = scaled.max(&x + 1);
            x
        }))
    }

    /// `{n² : n ≥ 1}`.
    pub fn squares() -> Self {
        let mut n = Int::one();
        Self::points("squares", true, move || {
            let x = &n * &n;
            n += 1;
            x
        })
    }

    /// `⋃_{k ≥ 0} [4^k, 2·4^k)`.
    pub fn interval_union() -> Self {
        struct Src(Int);
        impl RunSource for Src {
            fn next_run(&mut self) -> Option<(Int, Int)> {
                let s = self.0.clone();
                self.0 *= 4;
                Some((s.clone(), &s * 2 - 1))
            }
        }
        Self::from_source("interval-union:2^2k..2^2k+1", true, Box::new(Src(Int::one())))
    }

    fn points(name: impl Into<String>, gap_promise: bool, f: impl FnMut() -> Int + Send + 'static) -> Self {
        struct Src<F>(F);
        impl<F: FnMut() -> Int + Send> RunSource for Src<F> {
            fn next_run(&mut self) -> Option<(Int, Int)> {
                let x = (self.0)();
                Some((x.clone(), x))
            }
        }
        Self::from_source(name, gap_promise, Box::new(Src(f)))
    }

    pub fn name(&self) -> &str {
        &self.inner.name
    }

    pub fn gap_promise(&self) -> bool {
        self.inner.gap_promise
    }

    pub fn offset(&self) -> &Int {
        &self.offset
    }

    /// Generator name with the offset, as accepted by the expression parser.
    pub fn describe(&self) -> String {
        if self.offset.is_zero() {
            self.inner.name.clone()
        } else {
            format!("{}{:+}", self.inner.name, self.offset)
        }
    }

    pub fn translate(&self, t: &Int) -> LazySet {
        LazySet {
            inner: Arc::clone(&self.inner),
            offset: &self.offset + t,
        }
    }

    /// Pulls runs until `done(runs)` holds or the source ends.
    fn extend_while(&self, mut more: impl FnMut(&[Run]) -> bool) -> Result<()> {
        let mut st = self.inner.state.lock().expect("lazy set lock poisoned");
        // The newest run may still grow, so callers only ever see the runs
        // before it.
        while !st.exhausted && more(&st.runs[..st.runs.len().saturating_sub(1)]) {
            if st.runs.len() >= self.inner.budget {
                return Err(Error::Budget(format!(
                    "{}: more than {} runs needed",
                    self.inner.name, self.inner.budget
                )));
            }
            let Some((s, e)) = st.source.next_run() else {
                st.exhausted = true;
                break;
            };
            if e < s {
                return Err(Error::NonMonotone {
                    name: self.inner.name.clone(),
                    prev: s.to_string(),
                    next: e.to_string(),
                });
            }
            match st.runs.last_mut() {
                Some(last) if s <= last.end => {
                    return Err(Error::NonMonotone {
                        name: self.inner.name.clone(),
                        prev: last.end.to_string(),
                        next: s.to_string(),
                    });
                }
                Some(last) if s == &last.end + 1 => last.end = e,
                Some(last) => {
                    let first_index = &last.first_index + last.len();
                    st.runs.push(Run {
                        start: s,
                        end: e,
                        first_index,
                    });
                }
                None => st.runs.push(Run {
                    start: s,
                    end: e,
                    first_index: Int::one(),
                }),
            }
        }
        Ok(())
    }

    /// Ensures every run starting at or below `v` (raw coordinates) is known,
    /// plus the first run beyond it.
    fn extend_past(&self, v: &Int) -> Result<()> {
        self.extend_while(|runs| runs.last().is_none_or(|r| r.end <= *v))
    }

    fn with_runs<T>(&self, f: impl FnOnce(&[Run], bool) -> T) -> T {
        let st = self.inner.state.lock().expect("lazy set lock poisoned");
        let stable = if st.exhausted {
            st.runs.len()
        } else {
            st.runs.len().saturating_sub(1)
        };
        f(&st.runs[..stable], st.exhausted)
    }

    /// Least element.
    pub fn min(&self) -> Result<Int> {
        self.run(0)?
            .map(|r| r.start)
            .ok_or_else(|| Error::Exhausted(format!("{} is empty", self.inner.name)))
    }

    /// The `k`-th maximal run (0-based), translated.
    pub fn run(&self, k: usize) -> Result<Option<Run>> {
        self.extend_while(|runs| runs.len() <= k)?;
        Ok(self.with_runs(|runs, _| runs.get(k).map(|r| r.shifted(&self.offset))))
    }

    /// Index of the run containing `z`, or of the first run after `z`.
    pub fn run_at_or_after(&self, z: &Int) -> Result<Option<usize>> {
        let raw = z - &self.offset;
        self.extend_past(&raw)?;
        Ok(self.with_runs(|runs, _| {
            let k = runs.partition_point(|r| r.end < raw);
            (k < runs.len()).then_some(k)
        }))
    }

    pub fn contains(&self, z: &Int) -> Result<bool> {
        Ok(match self.run_at_or_after(z)? {
            Some(k) => self.run(k)?.is_some_and(|r| r.start <= *z),
            None => false,
        })
    }

    /// The `n`-th element (1-based) in increasing order.
    pub fn element(&self, n: &Int) -> Result<Int> {
        if n < &Int::one() {
            return Err(Error::Precondition("element index is 1-based".into()));
        }
        self.extend_while(|runs| runs.last().is_none_or(|r| &r.first_index + r.len() <= *n))?;
        self.with_runs(|runs, _| {
            let k = runs.partition_point(|r| &r.first_index + r.len() <= *n);
            runs.get(k)
                .map(|r| &r.start + (n - &r.first_index) + &self.offset)
                .ok_or_else(|| Error::Exhausted(format!("{} has fewer than {n} elements", self.inner.name)))
        })
    }

    /// 1-based index of member `z`, `None` if `z` is not a member.
    pub fn index_of(&self, z: &Int) -> Result<Option<Int>> {
        let Some(k) = self.run_at_or_after(z)? else {
            return Ok(None);
        };
        let r = self.run(k)?.expect("run exists");
        Ok((r.start <= *z).then(|| &r.first_index + (z - &r.start)))
    }

    /// Members of `[lo, hi]`, ascending. Refuses to list more than `limit`.
    pub fn window_limited(&self, lo: &Int, hi: &Int, limit: usize) -> Result<Vec<Int>> {
        let mut out = Vec::new();
        if lo > hi {
            return Ok(out);
        }
        let Some(mut k) = self.run_at_or_after(lo)? else {
            return Ok(out);
        };
        while let Some(r) = self.run(k)? {
            if r.start > *hi {
                break;
            }
            let s = r.start.clone().max(lo.clone());
            let e = r.end.clone().min(hi.clone());
            let n: Int = &e - &s + 1;
            let n = n.to_usize().unwrap_or(usize::MAX);
            if out.len().saturating_add(n) > limit {
                return Err(Error::Budget(format!(
                    "window of {} holds more than {limit} elements",
                    self.inner.name
                )));
            }
            let mut z = s;
            while z <= e {
                out.push(z.clone());
                z += 1;
            }
            k += 1;
        }
        Ok(out)
    }

    pub fn window(&self, lo: &Int, hi: &Int) -> Result<Vec<Int>> {
        self.window_limited(lo, hi, super::MAX_WINDOW_ELEMENTS)
    }

    /// Number of runs materialized so far and whether the source has ended.
    pub fn horizon(&self) -> (usize, bool) {
        self.with_runs(|runs, done| (runs.len(), done))
    }

    /// Largest gap between consecutive members within `[lo, hi]`.
    pub fn max_gap_in(&self, lo: &Int, hi: &Int) -> Result<Option<Int>> {
        let Some(mut k) = self.run_at_or_after(lo)? else {
            return Ok(None);
        };
        let mut prev: Option<Int> = None;
        let mut best: Option<Int> = None;
        while let Some(r) = self.run(k)? {
            if r.start > *hi {
                break;
            }
            let s = r.start.clone().max(lo.clone());
            let e = r.end.clone().min(hi.clone());
            let mut g = if s < e { Some(Int::one()) } else { None };
            if let Some(p) = &prev {
                let d = &s - p;
                g = Some(g.map_or(d.clone(), |x: Int| x.max(d)));
            }
            if let Some(g) = g {
                best = Some(best.map_or(g.clone(), |b| b.max(g)));
            }
            prev = Some(e);
            k += 1;
        }
        Ok(best.filter(|b| b.is_positive()))
    }
}
