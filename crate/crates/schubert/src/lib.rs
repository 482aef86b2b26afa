//! Exact equivariant cohomology and K-theory computations for Bott towers,
//! Bott–Samelson varieties and Kac–Moody flag varieties.
//!
//! Simple-root indices, words and mask positions are 1-based throughout the
//! public API, so `Word::from(vec![1, 2, 1])` is `s1 s2 s1`.

pub mod bottsamelson;
pub mod botttower;
mod error;
pub mod flagcoh;
pub mod flagk;
pub mod rootdata;
pub mod structconst;
pub mod symalg;
pub mod verify;
pub mod weyl;

pub use error::{Error, Result};
pub use rootdata::{CartanMatrix, CorootVector, RootVector};
pub use symalg::{Char, CharFraction, Poly, PolyFraction, Rational, VarKind, VarSpace};
pub use weyl::{WeylElement, Word};
