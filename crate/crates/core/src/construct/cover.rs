use serde::{Deserialize, Serialize};

use crate::epclass::{self, CoBounded, Representability, YPartition};
use crate::verify::{self, Inspect, MacReport};
use crate::{EpSet, Error, EventualSet, IntegerSet, Result, Window};

/// Output of [`finite_rest_cover`].
#[derive(Clone, Debug)]
pub struct RestCover {
    pub w: EventualSet,
    /// `(f_i, p_i)`: `p_i` lies in `F + W'` but not in `(F ∖ {f_i}) + W'`.
    pub witnesses: Vec<(i64, i64)>,
}

fn naturals_from(start: i64) -> Result<EventualSet> {
    EventualSet::from_fn(1, start, start - 1, |z| z >= start)
}

/// Given `F + W ⊇ ℕ`, returns `W'` with `F + W' = F + W` on which no element
/// of `F` can be dropped. Both facts are checked exactly.
pub fn finite_rest_cover(f: &[i64], w: &EventualSet) -> Result<RestCover> {
    let mut f = f.to_vec();
    f.sort_unstable();
    f.dedup();
    let (Some(&f1), Some(&fk)) = (f.first(), f.last()) else {
        return Err(Error::Precondition("F must be nonempty".into()));
    };
    let sum = w.plus_finite(&f)?;
    let missing = naturals_from(0)?.difference(&sum)?;
    if !missing.is_empty() {
        let first = missing.first_in(0, missing.cuts().1.max(0) + missing.period() as i64);
        return Err(Error::Precondition(format!(
            "F + W does not contain every natural number (first miss {first:?})"
        )));
    }
    // With F translated to start at 0 and W translated back, the excluded
    // points are 2i·span − f_j for j ≠ i.
    let span = fk - f1;
    let mut excluded = Vec::new();
    for i in 1..=f.len() as i64 {
        for (j, fj) in f.iter().enumerate() {
            if j as i64 + 1 != i {
                excluded.push(2 * i * span - fj);
            }
        }
    }
    let w2 = w
        .union(&naturals_from(-f1)?)?
        .difference(&EventualSet::finite(&excluded))?;
    if !w2.plus_finite(&f)?.same_members(&sum)? {
        return Err(Error::Construction("F + W' differs from F + W".into()));
    }
    let mut witnesses = Vec::new();
    for (i, fi) in f.iter().enumerate() {
        let p = 2 * (i as i64 + 1) * span;
        let rest: Vec<i64> = f.iter().copied().filter(|x| x != fi).collect();
        if rest.iter().any(|x| w2.contains_i64(p - x)) {
            return Err(Error::Construction(format!("{p} is still covered without {fi}")));
        }
        witnesses.push((*fi, p));
    }
    Ok(RestCover { w: w2, witnesses })
}

/// `V` with `F + V = T` on which no element of `F` can be dropped.
pub fn minimal_class_cover(f: &[i64], t: &CoBounded) -> Result<EventualSet> {
    let star = match epclass::is_sumset_representable(f, t)? {
        Representability::Representable(w) => w.to_eventual()?,
        Representability::Impossible { uncovered } => {
            return Err(Error::Construction(format!(
                "{uncovered} is not a sum F + W inside the target"
            )))
        }
    };
    if f.len() <= 1 {
        return Ok(star);
    }
    // Reflect so the target contains ℕ, thin, reflect back.
    let s = t.clean_below() - 1;
    let fr: Vec<i64> = f.iter().map(|x| -x).collect();
    let rest = finite_rest_cover(&fr, &star.affine(-1, s)?)?;
    rest.w.affine(-1, s)
}

/// Complement for `3ℕ ∪ F` with `F ⊆ 3ℕ + 1`.
#[derive(Clone, Debug)]
pub struct ArisingFamily {
    pub c: EpSet,
    /// `{0} ∪ (3ℤ + 1) ∪ W'`.
    pub y: EventualSet,
    /// `W' ⊆ 3ℤ + 2` with `F + W' = 3ℤ_{<0}`.
    pub w_prime: EventualSet,
    pub report: MacReport,
}

pub fn build_arising_family(f: &[i64], window: Window) -> Result<ArisingFamily> {
    if f.is_empty() || f.iter().any(|&x| x < 1 || x % 3 != 1) {
        return Err(Error::Precondition("F must be a nonempty subset of 3ℕ + 1".into()));
    }
    let c = EpSet::canonicalize(3, &[0], &[], f)?;
    let (f0, phi) = epclass::scaled_sporadic(&c)?;
    let v = minimal_class_cover(&phi, &epclass::class_target(&c, 0))?;
    let w_prime = v.affine(3, -f0)?;
    let y = EventualSet::finite(&[0])
        .union(&EventualSet::periodic(3, &[1])?)?
        .union(&w_prime)?;
    let report = verify::verify_mac(
        &IntegerSet::Ep(c.clone()),
        &IntegerSet::Eventual(y.clone()),
        window,
        Inspect::Window(window),
    )?;
    Ok(ArisingFamily { c, y, w_prime, report })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassPiece {
    pub a: u32,
    /// The single element of the complement in class `a + y_a`.
    pub y_hat: i64,
}

/// Complement produced in the sufficiency regime.
#[derive(Clone, Debug)]
pub struct PrimeCover {
    pub w: EventualSet,
    pub pieces: Vec<ClassPiece>,
    pub report: MacReport,
}

/// Builds `W = ⋃ {ŷ_a} ∪ ⋃ W_a'` from a labeling and its `y_a` map, then
/// certifies `C` as a MAC to `W` on `window`.
pub fn build_prime_cover(s: &EpSet, partition: &YPartition, y_a: &[(u32, u32)], window: Window) -> Result<PrimeCover> {
    let m = s.period();
    if !epclass::is_prime(m) || m % 3 != 2 {
        return Err(Error::Precondition(format!("modulus {m} is not a prime ≡ 2 mod 3")));
    }
    if s.f_residues().len() != 1 {
        return Err(Error::Precondition("F must occupy exactly one residue class".into()));
    }
    if s.a_residues().len() as u64 != (m + 1) / 3 {
        return Err(Error::Precondition(format!("|A| must be {}", (m + 1) / 3)));
    }
    if !epclass::check_labeling(s, partition) {
        return Err(Error::Precondition(
            "the labeling fails the necessary conditions".into(),
        ));
    }
    let (f0, phi) = epclass::scaled_sporadic(s)?;
    let mi = m as i64;
    let mut w = EventualSet::finite(&[]);
    let mut pieces = Vec::new();
    for &a0 in s.starts() {
        let r = a0.rem_euclid(mi) as u32;
        let y = y_a
            .iter()
            .find(|(a, _)| *a == r)
            .map(|&(_, y)| y as i64)
            .ok_or_else(|| Error::Precondition(format!("no y_a for class {r}")))?;
        let v = minimal_class_cover(&phi, &epclass::class_target(s, a0))?;
        w = w
            .union(&v.affine(mi, y + a0 - f0)?)?
            .union(&EventualSet::finite(&[y]))?;
        pieces.push(ClassPiece { a: r, y_hat: y });
    }
    let report = verify::verify_mac(
        &IntegerSet::Ep(s.clone()),
        &IntegerSet::Eventual(w.clone()),
        window,
        Inspect::Window(window),
    )?;
    Ok(PrimeCover { w, pieces, report })
}
