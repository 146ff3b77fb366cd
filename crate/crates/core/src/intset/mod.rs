//! Integer set representations.

mod lazy;
pub(crate) mod periodic;

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Int, Result};

pub use lazy::{LazySet, Run, RunSource, DEFAULT_RUN_BUDGET};
pub(crate) use periodic::residue;
pub use periodic::{EpSet, EventualSet};

/// Largest number of elements any single window enumeration may return.
pub const MAX_WINDOW_ELEMENTS: usize = 1 << 24;

/// Inclusive integer interval `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidWindow { lo, hi });
        }
        Ok(Window { lo, hi })
    }

    pub fn len(&self) -> u64 {
        (self.hi - self.lo) as u64 + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, z: &Int) -> bool {
        z.to_i64().is_some_and(|v| self.lo <= v && v <= self.hi)
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }

    /// Grows the window by `slack` on both sides.
    pub fn widen(&self, slack: i64) -> Window {
        Window {
            lo: self.lo.saturating_sub(slack),
            hi: self.hi.saturating_add(slack),
        }
    }

    pub fn lo_int(&self) -> Int {
        Int::from(self.lo)
    }

    pub fn hi_int(&self) -> Int {
        Int::from(self.hi)
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl FromStr for Window {
    type Err = Error;

    /// Parses `lo:hi`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse {
            pos: 0,
            msg: format!("window {s:?}: {msg}"),
        };
        let (lo, hi) = s.split_once(':').ok_or_else(|| bad("expected lo:hi"))?;
        let lo = lo.trim().parse().map_err(|_| bad("bad lower endpoint"))?;
        let hi = hi.trim().parse().map_err(|_| bad("bad upper endpoint"))?;
        Window::new(lo, hi)
    }
}

/// Finite set, stored strictly increasing.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteSet(Vec<Int>);

impl FiniteSet {
    /// Accepts a strictly increasing list.
    pub fn new(elements: Vec<Int>) -> Result<Self> {
        if let Some(w) = elements.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::NonMonotone {
                name: "finite set".into(),
                prev: w[0].to_string(),
                next: w[1].to_string(),
            });
        }
        Ok(FiniteSet(elements))
    }

    pub fn from_unsorted(mut elements: Vec<Int>) -> Self {
        elements.sort();
        elements.dedup();
        FiniteSet(elements)
    }

    pub fn from_i64s(elements: &[i64]) -> Self {
        Self::from_unsorted(elements.iter().map(|&x| Int::from(x)).collect())
    }

    pub fn elements(&self) -> &[Int] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Int> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, z: &Int) -> bool {
        self.0.binary_search(z).is_ok()
    }

    pub fn window(&self, lo: &Int, hi: &Int) -> Vec<Int> {
        let a = self.0.partition_point(|x| x < lo);
        let b = self.0.partition_point(|x| x <= hi);
        self.0[a..b.max(a)].to_vec()
    }
}

/// A possibly infinite set of integers.
#[derive(Clone, Debug)]
pub enum IntegerSet {
    Finite(FiniteSet),
    /// Eventually periodic to the right, bounded below.
    Ep(EpSet),
    /// Eventually periodic in both directions.
    Eventual(EventualSet),
    /// Generated on demand, bounded below.
    Lazy(LazySet),
}

impl From<FiniteSet> for IntegerSet {
    fn from(s: FiniteSet) -> Self {
        IntegerSet::Finite(s)
    }
}

impl From<EpSet> for IntegerSet {
    fn from(s: EpSet) -> Self {
        IntegerSet::Ep(s)
    }
}

impl From<EventualSet> for IntegerSet {
    fn from(s: EventualSet) -> Self {
        IntegerSet::Eventual(s)
    }
}

impl From<LazySet> for IntegerSet {
    fn from(s: LazySet) -> Self {
        IntegerSet::Lazy(s)
    }
}

impl IntegerSet {
    pub fn finite(elements: &[i64]) -> Self {
        IntegerSet::Finite(FiniteSet::from_i64s(elements))
    }

    /// `{0, 1, 2, …}`.
    pub fn naturals() -> Self {
        IntegerSet::Ep(EpSet::canonicalize(1, &[0], &[], &[]).expect("valid"))
    }

    pub fn member(&self, z: &Int) -> Result<bool> {
        Ok(match self {
            IntegerSet::Finite(s) => s.contains(z),
            IntegerSet::Ep(s) => s.contains(z),
            IntegerSet::Eventual(s) => s.contains(z),
            IntegerSet::Lazy(s) => s.contains(z)?,
        })
    }

    pub fn member_i64(&self, z: i64) -> Result<bool> {
        match self {
            IntegerSet::Ep(s) => Ok(s.contains_i64(z)),
            IntegerSet::Eventual(s) => Ok(s.contains_i64(z)),
            _ => self.member(&Int::from(z)),
        }
    }

    /// `S ∩ [w.lo, w.hi]`, ascending.
    pub fn enumerate_window(&self, w: Window) -> Result<Vec<Int>> {
        self.enumerate_range(&w.lo_int(), &w.hi_int())
    }

    pub fn enumerate_range(&self, lo: &Int, hi: &Int) -> Result<Vec<Int>> {
        if lo > hi {
            return Ok(Vec::new());
        }
        match self {
            IntegerSet::Finite(s) => Ok(s.window(lo, hi)),
            IntegerSet::Lazy(s) => s.window(lo, hi),
            IntegerSet::Ep(_) | IntegerSet::Eventual(_) => {
                let n = (hi - lo).to_usize().unwrap_or(usize::MAX);
                if n >= MAX_WINDOW_ELEMENTS {
                    return Err(Error::Budget(format!("window [{lo}, {hi}] too wide")));
                }
                let (l, h) = (lo.to_i64().unwrap(), hi.to_i64().unwrap());
                Ok(match self {
                    IntegerSet::Ep(s) => (l..=h).filter(|&z| s.contains_i64(z)).map(Int::from).collect(),
                    IntegerSet::Eventual(s) => s.window(l, h).into_iter().map(Int::from).collect(),
                    _ => unreachable!(),
                })
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            IntegerSet::Finite(_) => true,
            IntegerSet::Eventual(s) => !s.has_down_tail() && !s.has_up_tail(),
            _ => false,
        }
    }

    /// The least element, `None` if unbounded below or empty.
    pub fn lower_bound(&self) -> Result<Option<Int>> {
        Ok(match self {
            IntegerSet::Finite(s) => s.elements().first().cloned(),
            IntegerSet::Ep(s) => Some(Int::from(s.min_element())),
            IntegerSet::Eventual(s) => s.lower_bound(),
            IntegerSet::Lazy(s) => Some(s.min()?),
        })
    }

    /// Whether the set is bounded below (empty sets count as bounded).
    pub fn bounded_below(&self) -> bool {
        match self {
            IntegerSet::Eventual(s) => !s.has_down_tail(),
            _ => true,
        }
    }

    pub fn upper_bound(&self) -> Option<Int> {
        match self {
            IntegerSet::Finite(s) => s.elements().last().cloned(),
            IntegerSet::Eventual(s) => s.upper_bound(),
            _ => None,
        }
    }

    pub fn gap_promise(&self) -> bool {
        matches!(self, IntegerSet::Lazy(s) if s.gap_promise())
    }

    /// Elements as a plain list, when finite.
    pub fn finite_elements(&self) -> Option<Vec<Int>> {
        match self {
            IntegerSet::Finite(s) => Some(s.elements().to_vec()),
            IntegerSet::Eventual(s) if self.is_finite() => Some(s.middle().to_vec()),
            _ => None,
        }
    }

    pub fn translate(&self, t: &Int) -> Result<IntegerSet> {
        let small = || {
            t.to_i64()
                .ok_or_else(|| Error::Unsupported("translation of a periodic set by a huge amount".into()))
        };
        Ok(match self {
            IntegerSet::Finite(s) => IntegerSet::Finite(FiniteSet(s.elements().iter().map(|x| x + t).collect())),
            IntegerSet::Ep(s) => IntegerSet::Ep(s.translate(small()?)?),
            IntegerSet::Eventual(s) => IntegerSet::Eventual(s.translate(small()?)?),
            IntegerSet::Lazy(s) => IntegerSet::Lazy(s.translate(t)),
        })
    }

    /// `−S`. Lazy sets are unbounded above and need [`IntegerSet::reflect_on`].
    pub fn reflect(&self) -> Result<IntegerSet> {
        Ok(match self {
            IntegerSet::Finite(s) => {
                IntegerSet::Finite(FiniteSet::from_unsorted(s.elements().iter().map(|x| -x).collect()))
            }
            IntegerSet::Ep(s) => IntegerSet::Eventual(s.to_eventual().reflect()?),
            IntegerSet::Eventual(s) => IntegerSet::Eventual(s.reflect()?),
            IntegerSet::Lazy(s) => {
                return Err(Error::Unsupported(format!(
                    "reflecting the unbounded generated set {} needs a window",
                    s.describe()
                )))
            }
        })
    }

    /// `−(S ∩ w)` as a finite set.
    pub fn reflect_on(&self, w: Window) -> Result<IntegerSet> {
        let mut v: Vec<Int> = self.enumerate_window(w)?.into_iter().map(|x| -x).collect();
        v.reverse();
        Ok(IntegerSet::Finite(FiniteSet(v)))
    }

    /// Two-sided eventually periodic view, when the set has one.
    pub fn to_eventual(&self) -> Option<EventualSet> {
        match self {
            IntegerSet::Ep(s) => Some(s.to_eventual()),
            IntegerSet::Eventual(s) => Some(s.clone()),
            IntegerSet::Finite(s) => {
                let v: Option<Vec<i64>> = s.elements().iter().map(|x| x.to_i64()).collect();
                v.map(|v| EventualSet::finite(&v))
            }
            IntegerSet::Lazy(_) => None,
        }
    }

    /// Rewrites an [`IntegerSet::Eventual`] as `Finite` or `Ep` when possible.
    pub fn simplify(self) -> IntegerSet {
        match self {
            IntegerSet::Eventual(s) => {
                if !s.has_down_tail() && !s.has_up_tail() {
                    IntegerSet::Finite(FiniteSet(s.middle().to_vec()))
                } else if let Some(ep) = s.to_ep() {
                    IntegerSet::Ep(ep)
                } else {
                    IntegerSet::Eventual(s)
                }
            }
            other => other,
        }
    }
}

/// Banach densities of an eventually periodic set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityReport {
    #[serde(
        serialize_with = "crate::ser::rational",
        deserialize_with = "crate::ser::de_rational"
    )]
    pub upper_banach: BigRational,
    #[serde(
        serialize_with = "crate::ser::rational",
        deserialize_with = "crate::ser::de_rational"
    )]
    pub lower_banach: BigRational,
    #[serde(
        serialize_with = "crate::ser::rational",
        deserialize_with = "crate::ser::de_rational"
    )]
    pub eventual_density: BigRational,
    /// How the set was read: `"one-sided"` (bounded below, lower density
    /// taken as 0) or `"two-sided-periodic"`.
    pub convention: String,
}

/// Densities of `S`. One-sided reads `S` as bounded below; two-sided reads
/// it as the full periodic set `A_(m) + mℤ`.
pub fn density(s: &EpSet, two_sided: bool) -> DensityReport {
    let tail = BigRational::new(Int::from(s.a_residues().len()), Int::from(s.period()));
    if two_sided {
        DensityReport {
            upper_banach: tail.clone(),
            lower_banach: tail.clone(),
            eventual_density: tail,
            convention: "two-sided-periodic".into(),
        }
    } else {
        DensityReport {
            upper_banach: tail.clone(),
            lower_banach: BigRational::zero(),
            eventual_density: tail,
            convention: "one-sided".into(),
        }
    }
}
