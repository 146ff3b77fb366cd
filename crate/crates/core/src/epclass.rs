//! Necessary and sufficient conditions for an eventually periodic set to
//! arise as a minimal additive complement.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construct::{self, ArisingFamily, PrimeCover};
use crate::cyclic::{rotate, sum_bits};
use crate::intset::periodic::residue_i64;
use crate::verify::MacReport;
use crate::{EpSet, Error, EventualSet, Result, Window};

/// Default ceiling on the modulus for the labeling search (5^m labelings).
pub const DEFAULT_MAX_MODULUS: u32 = 10;

/// Behaviour of `(mℤ + r) ∩ Y` for a complement `Y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Absent,
    /// Infinitely many positive elements only.
    Plus,
    /// Infinitely many negative elements only.
    Minus,
    /// Finitely many, but at least one, element.
    Zero,
    PlusAndMinus,
}

const LABELS: [Label; 5] = [
    Label::Absent,
    Label::Plus,
    Label::Minus,
    Label::Zero,
    Label::PlusAndMinus,
];

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct YPartition {
    pub m: u32,
    pub labels: Vec<Label>,
}

impl YPartition {
    fn mask(&self, pick: impl Fn(Label) -> bool) -> u64 {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| pick(l))
            .fold(0, |b, (r, _)| b | 1 << r)
    }

    pub fn plus(&self) -> u64 {
        self.mask(|l| matches!(l, Label::Plus | Label::PlusAndMinus))
    }

    pub fn minus(&self) -> u64 {
        self.mask(|l| matches!(l, Label::Minus | Label::PlusAndMinus))
    }

    pub fn zero(&self) -> u64 {
        self.mask(|l| l == Label::Zero)
    }

    pub fn all(&self) -> u64 {
        self.mask(|l| l != Label::Absent)
    }

    pub fn residues(mask: u64) -> Vec<u32> {
        (0..64).filter(|r| mask >> r & 1 == 1).collect()
    }
}

/// Residue masks of `A_(m)` and `F_(m)`.
fn class_masks(s: &EpSet) -> (u32, u64, u64) {
    let m = s.period() as u32;
    let a = s.a_residues().iter().fold(0, |b, &r| b | 1u64 << r);
    let f = s.f_residues().iter().fold(0, |b, &r| b | 1u64 << r);
    (m, a, f)
}

fn full(m: u32) -> u64 {
    if m == 64 {
        u64::MAX
    } else {
        (1 << m) - 1
    }
}

/// Residues `y_a` admissible for `a` under the second condition.
fn y_candidates(m: u32, a_mask: u64, f_mask: u64, a: u32, p: &YPartition) -> u64 {
    let (plus, minus, zero) = (p.plus(), p.minus(), p.zero());
    let good = sum_bits(f_mask, minus, m);
    let bad = sum_bits(a_mask & !(1 << a), zero, m) | sum_bits(a_mask, minus | plus, m);
    let targets = good & !bad;
    // y with a + y in targets.
    rotate(targets, m - a % m, m) & zero
}

/// Whether a labeling satisfies the three necessary conditions.
fn satisfies(m: u32, a_mask: u64, f_mask: u64, p: &YPartition) -> bool {
    let (plus, minus, all) = (p.plus(), p.minus(), p.all());
    let fm = full(m);
    if sum_bits(a_mask, all, m) | sum_bits(f_mask, plus, m) != fm {
        return false;
    }
    if sum_bits(a_mask | f_mask, minus, m) != fm {
        return false;
    }
    if YPartition::residues(a_mask)
        .into_iter()
        .any(|a| y_candidates(m, a_mask, f_mask, a, p) == 0)
    {
        return false;
    }
    let a_minus = sum_bits(a_mask, minus, m);
    YPartition::residues(f_mask)
        .into_iter()
        .all(|f| rotate(all, f, m) & !a_minus != 0)
}

fn labeling(m: u32, mut code: u64) -> YPartition {
    let mut labels = vec![Label::Absent; m as usize];
    for r in (0..m as usize).rev() {
        labels[r] = LABELS[(code % 5) as usize];
        code /= 5;
    }
    YPartition { m, labels }
}

fn check_cap(m: u32, max_modulus: u32) -> Result<()> {
    if m > max_modulus {
        return Err(Error::ModulusTooLarge { m, max: max_modulus });
    }
    Ok(())
}

/// Pairs `(a, y_a)`: the least admissible `y_a` for each residue `a`.
pub type ClassOffsets = Vec<(u32, u32)>;

/// The least labeling (residue 0 most significant) satisfying the three
/// necessary conditions, with its class offsets.
pub fn find_y_partition(s: &EpSet, max_modulus: u32) -> Result<Option<(YPartition, ClassOffsets)>> {
    let (m, a_mask, f_mask) = class_masks(s);
    check_cap(m, max_modulus)?;
    let block = 5u64.pow(m - 1);
    let found = (0..5u64)
        .into_par_iter()
        .map(|first| {
            (first * block..(first + 1) * block)
                .map(|code| labeling(m, code))
                .find(|p| satisfies(m, a_mask, f_mask, p))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .next();
    Ok(found.map(|p| {
        let ya = y_map(m, a_mask, f_mask, &p);
        (p, ya)
    }))
}

/// Every labeling satisfying the necessary conditions, in order.
pub fn all_y_partitions(s: &EpSet, max_modulus: u32) -> Result<Vec<YPartition>> {
    let (m, a_mask, f_mask) = class_masks(s);
    check_cap(m, max_modulus)?;
    Ok((0..5u64.pow(m))
        .into_par_iter()
        .map(|code| labeling(m, code))
        .filter(|p| satisfies(m, a_mask, f_mask, p))
        .collect())
}

fn y_map(m: u32, a_mask: u64, f_mask: u64, p: &YPartition) -> Vec<(u32, u32)> {
    YPartition::residues(a_mask)
        .into_iter()
        .map(|a| (a, y_candidates(m, a_mask, f_mask, a, p).trailing_zeros()))
        .collect()
}

/// Whether `p` satisfies the necessary conditions for `s`.
pub fn check_labeling(s: &EpSet, p: &YPartition) -> bool {
    let (m, a_mask, f_mask) = class_masks(s);
    p.m == m && satisfies(m, a_mask, f_mask, p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RuledOutReason {
    DensityCor,
    PrimeBound,
    NoYPartition,
    NoCondition4,
}

/// `2|A_(m)| ≤ m + |F_(m)|`.
pub fn check_density_cor(s: &EpSet) -> bool {
    let (m, a, f) = class_masks(s);
    2 * a.count_ones() <= m + f.count_ones()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PrimeBound {
    NotApplicable,
    Fails,
    /// `tight` means the fourth condition is mandatory.
    Passes {
        tight: bool,
    },
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// `|A|(2|F| + 1) ≤ |F|(m + 1)` for prime `m`, on residue counts.
pub fn check_prime_bound(s: &EpSet) -> PrimeBound {
    let (m, a, f) = class_masks(s);
    if !is_prime(m as u64) {
        return PrimeBound::NotApplicable;
    }
    let (a, f, m) = (a.count_ones() as u64, f.count_ones() as u64, m as u64);
    if a * (2 * f + 1) > f * (m + 1) {
        PrimeBound::Fails
    } else {
        PrimeBound::Passes {
            tight: a * (2 * f + 1) > f * m,
        }
    }
}

/// `{t < ray_end} ∖ missing ∪ extra`, a set that is bounded above and
/// contains a full downward ray.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoBounded {
    pub ray_end: i64,
    pub missing: Vec<i64>,
    pub extra: Vec<i64>,
}

impl CoBounded {
    pub fn new(ray_end: i64, missing: &[i64], extra: &[i64]) -> Self {
        let mut missing: Vec<i64> = missing.iter().copied().filter(|&t| t < ray_end).collect();
        let mut extra: Vec<i64> = extra.iter().copied().filter(|&t| t >= ray_end).collect();
        missing.sort_unstable();
        missing.dedup();
        extra.sort_unstable();
        extra.dedup();
        CoBounded {
            ray_end,
            missing,
            extra,
        }
    }

    pub fn contains(&self, t: i64) -> bool {
        if t < self.ray_end {
            self.missing.binary_search(&t).is_err()
        } else {
            self.extra.binary_search(&t).is_ok()
        }
    }

    /// Everything below this lies in the set.
    pub fn clean_below(&self) -> i64 {
        self.missing.first().copied().unwrap_or(self.ray_end)
    }

    pub fn top(&self) -> i64 {
        self.extra.last().copied().unwrap_or(self.ray_end - 1)
    }

    pub fn to_eventual(&self) -> Result<EventualSet> {
        let lo = self.clean_below();
        EventualSet::from_fn(1, lo, self.top(), |t| self.contains(t))
    }
}

/// `{w < ray_end} ∪ band`, the largest `W` with `F + W ⊆ T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumWitness {
    pub ray_end: i64,
    pub band: Vec<i64>,
}

impl SumWitness {
    pub fn contains(&self, w: i64) -> bool {
        w < self.ray_end || self.band.binary_search(&w).is_ok()
    }

    pub fn to_eventual(&self) -> Result<EventualSet> {
        let hi = self.band.last().copied().unwrap_or(self.ray_end - 1);
        EventualSet::from_fn(1, self.ray_end, hi, |w| self.contains(w))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Representability {
    Representable(SumWitness),
    Impossible { uncovered: i64 },
}

/// Decides whether `T = F + W` for some `W`, by testing the largest
/// candidate `W* = {w : F + w ⊆ T}`.
pub fn is_sumset_representable(f: &[i64], t: &CoBounded) -> Result<Representability> {
    let (Some(&fmin), Some(&fmax)) = (f.iter().min(), f.iter().max()) else {
        return Ok(Representability::Impossible { uncovered: t.top() });
    };
    let clean = t.clean_below();
    let ray_end = clean - fmax;
    // Beyond `top − fmin` the translate F + w leaves T.
    let band: Vec<i64> = (ray_end..=t.top() - fmin)
        .filter(|&w| f.iter().all(|&x| t.contains(x + w)))
        .collect();
    let witness = SumWitness { ray_end, band };
    // The ray part covers everything below `clean`.
    for z in clean..=t.top() {
        if t.contains(z) && !f.iter().any(|&x| witness.contains(z - x)) {
            return Ok(Representability::Impossible { uncovered: z });
        }
    }
    Ok(Representability::Representable(witness))
}

/// Sporadic elements in the single class `F_(m) = {f}`: the representative
/// `min F` and the scaled offsets `(F − min F)/m`.
pub(crate) fn scaled_sporadic(s: &EpSet) -> Result<(i64, Vec<i64>)> {
    let f = s.sporadic();
    if s.f_residues().len() != 1 {
        return Err(Error::Unsupported(
            "the fourth condition is decided only when F lies in one residue class".into(),
        ));
    }
    let f0 = f[0];
    let m = s.period() as i64;
    Ok((f0, f.iter().map(|x| (x - f0) / m).collect()))
}

/// The class target `{u : a₀ + m·u ∉ C}` for the start `a₀` of a progression.
pub(crate) fn class_target(s: &EpSet, a0: i64) -> CoBounded {
    let m = s.period() as i64;
    let missing: Vec<i64> = s
        .prefix()
        .iter()
        .filter(|&&b| (b - a0).rem_euclid(m) == 0)
        .map(|b| (b - a0) / m)
        .collect();
    CoBounded::new(0, &missing, &[])
}

/// Condition four for each class of `A`, in scaled coordinates.
pub fn condition4(s: &EpSet) -> Result<Vec<(u32, Representability)>> {
    let (_, phi) = scaled_sporadic(s)?;
    let m = s.period();
    s.starts()
        .iter()
        .map(|&a0| {
            let r = residue_i64(a0, m) as u32;
            Ok((r, is_sumset_representable(&phi, &class_target(s, a0))?))
        })
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum ClassifierVerdict {
    RuledOut {
        reason: RuledOutReason,
        detail: String,
    },
    NecessaryPass {
        partition: YPartition,
        y_a: Vec<(u32, u32)>,
    },
    ArisesCertified {
        route: String,
        tags: Vec<String>,
        /// Printed complement.
        w: String,
        report: MacReport,
    },
    Unknown {
        partition: Option<YPartition>,
        note: String,
    },
}

impl ClassifierVerdict {
    pub fn is_definitive(&self) -> bool {
        matches!(
            self,
            ClassifierVerdict::RuledOut { .. } | ClassifierVerdict::ArisesCertified { .. }
        )
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ClassifyOptions {
    pub certify: bool,
    pub window: Window,
    pub max_modulus: u32,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            certify: true,
            window: Window { lo: -30, hi: 30 },
            max_modulus: DEFAULT_MAX_MODULUS,
        }
    }
}

/// Result of the necessary-condition search alone.
pub fn check_necessary(s: &EpSet, max_modulus: u32) -> Result<ClassifierVerdict> {
    Ok(match find_y_partition(s, max_modulus)? {
        Some((partition, y_a)) => ClassifierVerdict::NecessaryPass { partition, y_a },
        None => ClassifierVerdict::RuledOut {
            reason: RuledOutReason::NoYPartition,
            detail: "no labeling of the residues satisfies the three necessary conditions".into(),
        },
    })
}

fn in_arising_family(s: &EpSet) -> bool {
    s.period() == 3
        && s.starts() == [0]
        && s.prefix().is_empty()
        && !s.sporadic().is_empty()
        && s.sporadic().iter().all(|&f| f >= 1 && f % 3 == 1)
}

fn in_suff_regime(s: &EpSet) -> bool {
    let m = s.period();
    is_prime(m) && m % 3 == 2 && s.f_residues().len() == 1 && s.a_residues().len() as u64 == (m + 1) / 3
}

fn certified(route: &str, tags: Vec<String>, w: &EventualSet, report: MacReport) -> ClassifierVerdict {
    ClassifierVerdict::ArisesCertified {
        route: route.into(),
        tags,
        w: crate::expr::print(&crate::IntegerSet::Eventual(w.clone()).simplify()),
        report,
    }
}

pub fn classify(s: &EpSet, opts: &ClassifyOptions) -> Result<ClassifierVerdict> {
    let (m, a, f) = class_masks(s);
    if !check_density_cor(s) {
        return Ok(ClassifierVerdict::RuledOut {
            reason: RuledOutReason::DensityCor,
            detail: format!("2·{} > {} + {}", a.count_ones(), m, f.count_ones()),
        });
    }
    let tight = match check_prime_bound(s) {
        PrimeBound::Fails => {
            return Ok(ClassifierVerdict::RuledOut {
                reason: RuledOutReason::PrimeBound,
                detail: format!(
                    "{}·(2·{} + 1) > {}·({} + 1)",
                    a.count_ones(),
                    f.count_ones(),
                    f.count_ones(),
                    m
                ),
            })
        }
        PrimeBound::Passes { tight } => tight,
        PrimeBound::NotApplicable => false,
    };
    let Some((partition, y_a)) = find_y_partition(s, opts.max_modulus)? else {
        return check_necessary(s, opts.max_modulus);
    };
    if tight {
        match condition4(s) {
            Ok(classes) => {
                if let Some((r, Representability::Impossible { uncovered })) = classes
                    .iter()
                    .find(|(_, x)| matches!(x, Representability::Impossible { .. }))
                {
                    return Ok(ClassifierVerdict::RuledOut {
                        reason: RuledOutReason::NoCondition4,
                        detail: format!("class {r}: scaled point {uncovered} is not a sum F + W inside the complement"),
                    });
                }
            }
            Err(Error::Unsupported(note)) => {
                return Ok(ClassifierVerdict::Unknown {
                    partition: Some(partition),
                    note,
                })
            }
            Err(e) => return Err(e),
        }
    }
    if !opts.certify {
        return Ok(ClassifierVerdict::NecessaryPass { partition, y_a });
    }
    if in_arising_family(s) {
        let fam: ArisingFamily = construct::build_arising_family(s.sporadic(), opts.window)?;
        if fam.report.certified() {
            return Ok(certified(
                "arising-family",
                vec!["arises-does-not-have".into()],
                &fam.y,
                fam.report,
            ));
        }
    }
    if in_suff_regime(s) {
        match construct::build_prime_cover(s, &partition, &y_a, opts.window) {
            Ok(PrimeCover { w, report, .. }) if report.certified() => {
                return Ok(certified("sufficiency", Vec::new(), &w, report));
            }
            Ok(_) | Err(Error::Construction(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(ClassifierVerdict::Unknown {
        partition: Some(partition),
        note: "the necessary conditions hold; no certified construction applies".into(),
    })
}

#[cfg(test)]
mod tests;
