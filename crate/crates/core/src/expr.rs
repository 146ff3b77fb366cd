//! Text syntax for integer sets.
//!
//! ```text
//! fin:1,3,7                        finite set
//! ep:m=5;A=0,1;B=-3;F=2            (mℕ + A) ∪ B ∪ F, canonicalized
//! per:m=3;R=0,1                    R + mℤ
//! ev:m=2;cut=-4:4;down=0;up=1;mid=-3,2
//!                                  periodic below and above the cut, explicit inside
//! gen:pow2   gen:pow(3)   gen:mersenne   gen:squares
//! gen:lacunary(lambda=3/2,start=2)
//! interval-union:2^2k..2^2k+1      ⋃ [4^k, 2·4^k)
//! ```
//!
//! Generated sets accept a trailing offset such as `gen:pow2+5`. Whitespace
//! is ignored everywhere.

use num_traits::{ToPrimitive, Zero};

use crate::intset::{EpSet, EventualSet, FiniteSet, IntegerSet, LazySet};
use crate::{Error, Int, Result};

const INTERVAL_UNION: &str = "interval-union:2^2k..2^2k+1";

struct Cursor<'a> {
    chars: Vec<char>,
    /// Byte offset in the original text of each retained char.
    origin: Vec<usize>,
    pos: usize,
    text: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        let (origin, chars) = text.char_indices().filter(|(_, c)| !c.is_whitespace()).unzip();
        Cursor {
            chars,
            origin,
            pos: 0,
            text,
        }
    }

    fn offset(&self) -> usize {
        self.origin.get(self.pos).copied().unwrap_or(self.text.len())
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn rest(&self) -> String {
        self.chars[self.pos..].iter().collect()
    }

    fn eat(&mut self, lit: &str) -> bool {
        let n = lit.chars().count();
        let matches =
            self.pos + n <= self.chars.len() && self.chars[self.pos..self.pos + n].iter().copied().eq(lit.chars());
        if matches {
            self.pos += n;
        }
        matches
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        if self.eat(lit) {
            Ok(())
        } else {
            self.err(format!("expected `{lit}`"))
        }
    }

    fn big_integer(&mut self) -> Result<Int> {
        let start = self.pos;
        if matches!(self.peek(), Some('+' | '-')) {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits {
            self.pos = start;
            return self.err("expected an integer");
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.trim_start_matches('+').parse().expect("sign and digits"))
    }

    fn integer(&mut self) -> Result<i64> {
        let start = self.pos;
        let z = self.big_integer()?;
        z.to_i64().map_or_else(
            || {
                self.pos = start;
                self.err("integer out of range")
            },
            Ok,
        )
    }

    fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T>) -> Result<Vec<T>> {
        let mut v = Vec::new();
        if self.at_end() || matches!(self.peek(), Some(';' | ')')) {
            return Ok(v);
        }
        loop {
            v.push(item(self)?);
            if !self.eat(",") {
                return Ok(v);
            }
        }
    }

    fn int_list(&mut self) -> Result<Vec<i64>> {
        self.list(Self::integer)
    }

    fn word(&mut self) -> String {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn finish(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.err(format!("unexpected trailing input `{}`", self.rest()))
        }
    }
}

/// Parses a set expression.
pub fn parse(text: &str) -> Result<IntegerSet> {
    let mut c = Cursor::new(text);
    if c.eat("fin:") {
        let v = c.list(Cursor::big_integer)?;
        c.finish()?;
        return Ok(IntegerSet::Finite(FiniteSet::from_unsorted(v)));
    }
    if c.eat("ep:") {
        return parse_ep(&mut c).map(IntegerSet::Ep);
    }
    if c.eat("per:") {
        let fields = fields(&mut c, &["m", "R"])?;
        let m = positive(&c, fields[0].as_ref(), "m")?;
        let r = fields[1].clone().unwrap_or_default();
        let residues: Vec<u32> = r.iter().map(|&x| x.rem_euclid(m as i64) as u32).collect();
        return Ok(IntegerSet::Eventual(EventualSet::periodic(m, &residues)?).simplify());
    }
    if c.eat("ev:") {
        return parse_ev(&mut c);
    }
    if c.eat(INTERVAL_UNION) {
        let base = LazySet::interval_union();
        return with_offset(&mut c, base);
    }
    if c.eat("gen:") {
        let name = c.word();
        let base = match name.as_str() {
            "pow2" => LazySet::powers(2)?,
            "mersenne" => LazySet::mersenne(),
            "squares" => LazySet::squares(),
            "pow" => {
                c.expect("(")?;
                let b = c.integer()?;
                c.expect(")")?;
                let b = u32::try_from(b).or_else(|_| c.err("bad power base"))?;
                LazySet::powers(b)?
            }
            "lacunary" => parse_lacunary(&mut c)?,
            _ => return c.err(format!("unknown generator `{name}`")),
        };
        return with_offset(&mut c, base);
    }
    c.err("expected one of fin:, ep:, per:, ev:, gen:, interval-union:")
}

fn with_offset(c: &mut Cursor, base: LazySet) -> Result<IntegerSet> {
    let t = if c.at_end() { 0 } else { c.integer()? };
    c.finish()?;
    Ok(IntegerSet::Lazy(base.translate(&Int::from(t))))
}

fn parse_lacunary(c: &mut Cursor) -> Result<LazySet> {
    c.expect("(")?;
    c.expect("lambda=")?;
    let num = c.integer()?;
    let den = if c.eat("/") { c.integer()? } else { 1 };
    let start = if c.eat(",") {
        c.expect("start=")?;
        c.integer()?
    } else {
        1
    };
    c.expect(")")?;
    if num <= 0 || den <= 0 {
        return c.err("lambda must be a positive ratio");
    }
    LazySet::lacunary(num as u64, den as u64, start)
}

/// Reads `key=list;key=list…`, returning the lists in the order of `keys`.
fn fields(c: &mut Cursor, keys: &[&str]) -> Result<Vec<Option<Vec<i64>>>> {
    let mut out = vec![None; keys.len()];
    while !c.at_end() {
        let start = c.pos;
        let key = c.word();
        let Some(slot) = keys.iter().position(|k| *k == key) else {
            c.pos = start;
            return c.err(format!("unknown field `{key}`"));
        };
        if out[slot].is_some() {
            return c.err(format!("field `{key}` given twice"));
        }
        c.expect("=")?;
        out[slot] = Some(c.int_list()?);
        if !c.eat(";") {
            break;
        }
    }
    c.finish()?;
    Ok(out)
}

fn positive(c: &Cursor, v: Option<&Vec<i64>>, key: &str) -> Result<u64> {
    match v.map(|v| v.as_slice()) {
        Some([m]) if *m > 0 => Ok(*m as u64),
        Some([m]) => Err(Error::InvalidPeriod(*m)),
        _ => c.err(format!("field `{key}` needs exactly one positive integer")),
    }
}

fn parse_ep(c: &mut Cursor) -> Result<EpSet> {
    let f = fields(c, &["m", "A", "B", "F"])?;
    let m = match f[0].as_deref() {
        Some([m]) => *m,
        _ => return c.err("field `m` needs exactly one integer"),
    };
    let a = f[1].clone().ok_or_else(|| Error::Parse {
        pos: c.offset(),
        msg: "missing field `A`".into(),
    })?;
    EpSet::canonicalize(m, &a, f[2].as_deref().unwrap_or(&[]), f[3].as_deref().unwrap_or(&[]))
}

fn parse_ev(c: &mut Cursor) -> Result<IntegerSet> {
    let mut m = None;
    let mut cut = None;
    let mut lists: [Option<Vec<i64>>; 3] = [None, None, None];
    while !c.at_end() {
        let key = c.word();
        c.expect("=")?;
        match key.as_str() {
            "m" => m = Some(c.integer()?),
            "cut" => {
                let lo = c.integer()?;
                c.expect(":")?;
                cut = Some((lo, c.integer()?));
            }
            "down" => lists[0] = Some(c.int_list()?),
            "up" => lists[1] = Some(c.int_list()?),
            "mid" => lists[2] = Some(c.int_list()?),
            _ => return c.err(format!("unknown field `{key}`")),
        }
        if !c.eat(";") {
            break;
        }
    }
    c.finish()?;
    let m = match m {
        Some(m) if m > 0 => m as u64,
        Some(m) => return Err(Error::InvalidPeriod(m)),
        None => return c.err("missing field `m`"),
    };
    let (lo, hi) = cut.unwrap_or((0, -1));
    let [down, up, mid] = lists.map(Option::unwrap_or_default);
    let has = |v: &Vec<i64>, z: i64| v.iter().any(|&r| r.rem_euclid(m as i64) == z.rem_euclid(m as i64));
    let s = EventualSet::from_fn(m, lo, hi, |z| {
        if z < lo {
            has(&down, z)
        } else if z > hi {
            has(&up, z)
        } else {
            mid.contains(&z)
        }
    })?;
    Ok(IntegerSet::Eventual(s).simplify())
}

fn join<T: ToString>(v: impl IntoIterator<Item = T>) -> String {
    v.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Canonical text for `s`; [`parse`] reads it back to the same set.
pub fn print(s: &IntegerSet) -> String {
    match s {
        IntegerSet::Finite(f) => format!("fin:{}", join(f.elements())),
        IntegerSet::Ep(e) => {
            let mut out = format!("ep:m={};A={}", e.period(), join(e.starts()));
            if !e.prefix().is_empty() {
                out += &format!(";B={}", join(e.prefix()));
            }
            if !e.sporadic().is_empty() {
                out += &format!(";F={}", join(e.sporadic()));
            }
            out
        }
        IntegerSet::Eventual(e) => print_eventual(e),
        IntegerSet::Lazy(l) => {
            let name = l.name();
            let base = if name.starts_with("interval-union") {
                name.to_string()
            } else {
                format!("gen:{name}")
            };
            if l.offset().is_zero() {
                base
            } else {
                format!("{base}{:+}", l.offset())
            }
        }
    }
}

fn print_eventual(e: &EventualSet) -> String {
    let (lo, hi) = e.cuts();
    let residues = |v: &[bool]| join(v.iter().enumerate().filter(|(_, &b)| b).map(|(r, _)| r));
    let m = e.period() as i64;
    let pattern = e.up_residues();
    let periodic = e.down_residues() == pattern
        && (lo - m..=hi + m).all(|z| e.contains_i64(z) == pattern[z.rem_euclid(m) as usize]);
    if periodic {
        return format!("per:m={};R={}", e.period(), residues(e.up_residues()));
    }
    format!(
        "ev:m={};cut={}:{};down={};up={};mid={}",
        e.period(),
        lo,
        hi,
        residues(e.down_residues()),
        residues(e.up_residues()),
        join(e.middle().iter().map(|x| x.to_i64().unwrap_or_default()))
    )
}

/// Same as [`parse`] but yields only the finite form, for options that
/// require a finite set.
pub fn parse_finite(text: &str) -> Result<FiniteSet> {
    match parse(text)? {
        IntegerSet::Finite(f) => Ok(f),
        other => other
            .finite_elements()
            .map(FiniteSet::from_unsorted)
            .ok_or_else(|| Error::Precondition(format!("`{text}` is not a finite set"))),
    }
}
