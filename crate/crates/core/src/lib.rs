//! Minkowski sums and minimal additive complements of integer sets.
//!
//! A set `C` is a minimal additive complement (MAC) to `W` when `C + W`
//! covers the ambient group and no proper subset of `C` does. This crate
//! computes with such sets in `ℤ` and `ℤ/mℤ`:
//!
//! * [`intset`] represents finite, eventually periodic and lazily generated
//!   sets, with exact window enumeration and Banach densities.
//! * [`sumset`] holds the windowed and cyclic sumset kernels.
//! * [`verify`] produces dependence certificates and bounded refutations.
//! * [`construct`] runs the co-minimal pair machine and the cover constructions.
//! * [`cyclic`] solves the finite cyclic instances exhaustively.
//! * [`epclass`] classifies eventually periodic sets.
//!
//! Everything that concerns infinite sets is certified on finite windows
//! only; reports say so explicitly.

pub mod construct;
pub mod cyclic;
pub mod epclass;
mod error;
pub mod expr;
pub mod intset;
pub(crate) mod ser;
pub mod sumset;
pub mod verify;

pub use error::{Error, Result};
pub use intset::{EpSet, EventualSet, FiniteSet, IntegerSet, LazySet, Window};
pub use num_bigint::BigInt;

/// Arbitrary-precision integer used for set elements.
pub type Int = BigInt;

/// Exact rational used for densities.
pub type Rational = num_rational::BigRational;
