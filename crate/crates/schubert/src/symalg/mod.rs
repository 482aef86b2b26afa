//! Exact symbolic arithmetic: polynomials in simple roots or tower weights,
//! Laurent sums of characters, and the fractions that appear in
//! fixed-point localization sums.

mod character;
mod fraction;
mod parse;
mod poly;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use character::Char;
pub use fraction::{CharFraction, PolyFraction};
pub use poly::Poly;

pub type Rational = BigRational;

pub fn rational(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Which family of symbols a polynomial or character is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    /// Simple roots `a1..ar`.
    Alpha,
    /// Bott-tower weights `l1..lN`.
    Lambda,
    /// Free symbols `t1..tn`, used for identity checks.
    Free,
}

impl VarKind {
    fn prefix(self) -> &'static str {
        match self {
            VarKind::Alpha => "a",
            VarKind::Lambda => "l",
            VarKind::Free => "t",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarSpace {
    pub kind: VarKind,
    pub len: usize,
}

impl VarSpace {
    pub fn alpha(len: usize) -> Self {
        VarSpace { kind: VarKind::Alpha, len }
    }

    pub fn lambda(len: usize) -> Self {
        VarSpace { kind: VarKind::Lambda, len }
    }

    pub fn free(len: usize) -> Self {
        VarSpace { kind: VarKind::Free, len }
    }

    pub fn var_name(&self, i: usize) -> String {
        format!("{}{}", self.kind.prefix(), i + 1)
    }

    pub(crate) fn check(&self, other: &VarSpace) -> crate::Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(crate::Error::VarspaceMismatch(self.to_string(), other.to_string()))
        }
    }
}

impl fmt::Display for VarSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.kind.prefix(), self.len)
    }
}

/// Minimal commutative-ring interface used by generic containers such as
/// Hecke-algebra elements.
pub trait Coefficient: Clone + PartialEq {
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn is_zero(&self) -> bool;
}

impl Coefficient for Poly {
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
}

impl Coefficient for Char {
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero(&self) -> bool {
        Char::is_zero(self)
    }
}

fn write_coefficient(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    coeff: &Rational,
    body: Option<&str>,
) -> fmt::Result {
    use num_traits::{One, Signed};
    let negative = coeff.is_negative();
    match (first, negative) {
        (true, true) => write!(f, "-")?,
        (true, false) => {}
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
    }
    let magnitude = coeff.abs();
    match body {
        None => write!(f, "{magnitude}"),
        Some(body) if magnitude.is_one() => write!(f, "{body}"),
        Some(body) => write!(f, "{magnitude}*{body}"),
    }
}
