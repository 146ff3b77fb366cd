//! JSON encoding of big integers: a plain number when it fits in `i64`,
//! a decimal string otherwise. Rationals are strings such as `"3/4"`.

use num_traits::ToPrimitive;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serializer};

use crate::{Int, Rational};

pub fn int<S: Serializer>(z: &Int, s: S) -> Result<S::Ok, S::Error> {
    match z.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.serialize_str(&z.to_string()),
    }
}

pub fn ints<S: Serializer>(v: &[Int], s: S) -> Result<S::Ok, S::Error> {
    struct One<'a>(&'a Int);
    impl serde::Serialize for One<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            int(self.0, s)
        }
    }
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v {
        seq.serialize_element(&One(z))?;
    }
    seq.end()
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Raw {
    Num(i64),
    Text(String),
}

fn raw_to_int<E: serde::de::Error>(r: Raw) -> Result<Int, E> {
    match r {
        Raw::Num(v) => Ok(Int::from(v)),
        Raw::Text(t) => t.parse().map_err(E::custom),
    }
}

pub fn de_int<'de, D: Deserializer<'de>>(d: D) -> Result<Int, D::Error> {
    raw_to_int(Raw::deserialize(d)?)
}

pub fn de_ints<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Int>, D::Error> {
    Vec::<Raw>::deserialize(d)?.into_iter().map(raw_to_int).collect()
}

pub fn rational<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

pub fn de_rational<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
    String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
}
