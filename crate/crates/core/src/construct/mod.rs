//! Constructive complements.
//!
//! * [`build_d`], [`build_w`] and [`build_cominimal`] turn a bounded-below set
//!   with arbitrarily large gaps into a complement `W` in which designated
//!   sums `z_i` are represented uniquely, then prune `W` to a co-minimal
//!   partner on a window.
//! * [`finite_rest_cover`], [`build_arising_family`] and [`build_prime_cover`]
//!   build complements to eventually periodic sets class by class.

mod cover;
mod fill;

use serde::{Deserialize, Serialize};

use crate::Int;

pub use cover::{
    build_arising_family, build_prime_cover, finite_rest_cover, minimal_class_cover, ArisingFamily, ClassPiece,
    PrimeCover, RestCover,
};
pub use fill::{build_cominimal, build_d, build_w, CoMinimalPair, ConstructOptions, DConstruction, WConstruction};

/// One step of a construction. Fields not used by a phase are omitted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    /// `"fill"` for steps that cover the non-positive integers, `"extend"`
    /// for steps that add a uniquely represented sum.
    pub phase: String,
    pub i: usize,
    #[serde(skip_serializing_if = "Option::is_none", with = "opt_int", default)]
    pub y_i: Option<Int>,
    /// Evaluations `(argument, h(argument))` used at this step.
    #[serde(skip_serializing_if = "Vec::is_empty", with = "int_pairs", default)]
    pub h_values: Vec<(Int, Int)>,
    #[serde(skip_serializing_if = "Option::is_none", with = "opt_int", default)]
    pub t_i: Option<Int>,
    #[serde(skip_serializing_if = "Option::is_none", with = "opt_int", default)]
    pub x_i: Option<Int>,
    #[serde(skip_serializing_if = "Option::is_none", with = "opt_int", default)]
    pub z_i: Option<Int>,
    #[serde(skip_serializing_if = "Option::is_none", with = "opt_int", default)]
    pub k_i: Option<Int>,
    #[serde(serialize_with = "crate::ser::ints", deserialize_with = "crate::ser::de_ints")]
    pub added_sets: Vec<Int>,
}

impl TraceStep {
    fn new(phase: &str, i: usize) -> Self {
        TraceStep {
            phase: phase.into(),
            i,
            y_i: None,
            h_values: Vec::new(),
            t_i: None,
            x_i: None,
            z_i: None,
            k_i: None,
            added_sets: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionTrace {
    /// The input was translated by this amount so that its least element is 1;
    /// all reported values are in the original coordinates except the
    /// `y_i`, `t_i` of fill steps, which live in the translated ones.
    #[serde(serialize_with = "crate::ser::int", deserialize_with = "crate::ser::de_int")]
    pub shift: Int,
    pub steps: Vec<TraceStep>,
}

impl ConstructionTrace {
    /// One JSON object per step.
    pub fn to_json_lines(&self) -> String {
        self.steps
            .iter()
            .map(|s| serde_json::to_string(s).expect("trace serializes"))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

mod opt_int {
    use serde::{Deserializer, Serializer};

    use crate::Int;

    pub fn serialize<S: Serializer>(v: &Option<Int>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(z) => crate::ser::int(z, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Int>, D::Error> {
        crate::ser::de_int(d).map(Some)
    }
}

mod int_pairs {
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::Int;

    pub fn serialize<S: Serializer>(v: &[(Int, Int)], s: S) -> Result<S::Ok, S::Error> {
        struct P<'a>(&'a (Int, Int));
        impl serde::Serialize for P<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                crate::ser::ints(&[self.0 .0.clone(), self.0 .1.clone()], s)
            }
        }
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for p in v {
            seq.serialize_element(&P(p))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(Int, Int)>, D::Error> {
        #[derive(Deserialize)]
        struct P(#[serde(deserialize_with = "crate::ser::de_ints")] Vec<Int>);
        let v = Vec::<P>::deserialize(d)?;
        v.into_iter()
            .map(|P(p)| match <[Int; 2]>::try_from(p) {
                Ok([a, b]) => Ok((a, b)),
                Err(_) => Err(serde::de::Error::custom("expected a pair")),
            })
            .collect()
    }
}
