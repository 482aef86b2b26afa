use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_integer::Integer;
use num_traits::{One, Zero};

use super::{rational, write_coefficient, Rational, VarSpace};
use crate::{Error, Result};

/// Finite sum `Σ c_μ e^μ` over lattice points μ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Char {
    space: VarSpace,
    terms: BTreeMap<Vec<i64>, Rational>,
}

impl Char {
    pub fn zero(space: VarSpace) -> Self {
        Char { space, terms: BTreeMap::new() }
    }

    pub fn one(space: VarSpace) -> Self {
        Self::constant(space, Rational::one())
    }

    pub fn constant(space: VarSpace, c: Rational) -> Self {
        Self::monomial(space, vec![0; space.len], c)
    }

    pub fn from_int(space: VarSpace, c: i64) -> Self {
        Self::constant(space, rational(c))
    }

    /// The character `e^μ`.
    pub fn exp(space: VarSpace, mu: &[i64]) -> Self {
        Self::monomial(space, mu.to_vec(), Rational::one())
    }

    pub fn monomial(space: VarSpace, mu: Vec<i64>, c: Rational) -> Self {
        assert_eq!(mu.len(), space.len, "exponent length");
        let mut out = Char::zero(space);
        out.add_term(mu, c);
        out
    }

    /// `1 - e^{-β}`.
    pub fn one_minus_exp_neg(space: VarSpace, beta: &[i64]) -> Self {
        let neg: Vec<i64> = beta.iter().map(|x| -x).collect();
        Char::one(space) - Char::exp(space, &neg)
    }

    pub fn space(&self) -> VarSpace {
        self.space
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, mu: &[i64]) -> Rational {
        self.terms.get(mu).cloned().unwrap_or_else(Rational::zero)
    }

    /// Sum of coefficients (the value at `e^μ = 1`).
    pub fn augmentation(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |acc, c| acc + c)
    }

    pub(crate) fn add_term(&mut self, mu: Vec<i64>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mu) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn try_add(&self, other: &Char) -> Result<Char> {
        self.space.check(&other.space)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Char) -> Result<Char> {
        self.space.check(&other.space)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Char) -> Result<Char> {
        self.space.check(&other.space)?;
        let mut out = Char::zero(self.space);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Char {
        if c.is_zero() {
            return Char::zero(self.space);
        }
        Char {
            space: self.space,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    /// Multiplication by `e^μ`.
    pub fn shift(&self, mu: &[i64]) -> Char {
        Char {
            space: self.space,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(mu).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Char {
        (0..n).fold(Char::one(self.space), |acc, _| &acc * self)
    }

    /// The involution `e^μ ↦ e^{-μ}`.
    pub fn star(&self) -> Char {
        Char {
            space: self.space,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().map(|x| -x).collect(), c.clone()))
                .collect(),
        }
    }

    /// Exact quotient by `1 - e^{-β}`.
    ///
    /// Writing `β = g·β₀` with β₀ primitive, the terms split into cosets of
    /// `Zβ₀`; on each coset the division is a one-variable division by
    /// `1 - t^{-g}` with `t = e^{β₀}`.
    pub fn divide_one_minus_exp_neg(&self, beta: &[i64]) -> Result<Char> {
        if beta.len() != self.space.len {
            return Err(Error::RankMismatch { expected: self.space.len, found: beta.len() });
        }
        let g = beta.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        if g == 0 {
            return Err(Error::InexactDivision("division by 1 - e^0".into()));
        }
        let prim: Vec<i64> = beta.iter().map(|x| x / g).collect();
        let pivot = prim.iter().position(|&x| x != 0).unwrap();
        let step = prim[pivot];

        let mut cosets: BTreeMap<Vec<i64>, BTreeMap<i64, Rational>> = BTreeMap::new();
        for (mu, c) in &self.terms {
            let q = mu[pivot].div_euclid(step);
            let rep: Vec<i64> = mu.iter().zip(&prim).map(|(m, p)| m - q * p).collect();
            cosets.entry(rep).or_default().insert(q, c.clone());
        }

        // P = Q·(1 - t^{-g})  ⇒  Q_q = P_q + Q_{q+g}, from the top down.
        let mut out = Char::zero(self.space);
        for (rep, poly) in cosets {
            let lo = *poly.keys().next().unwrap();
            let hi = *poly.keys().next_back().unwrap();
            let mut quotient: BTreeMap<i64, Rational> = BTreeMap::new();
            for q in (lo..=hi).rev() {
                let mut value = poly.get(&q).cloned().unwrap_or_else(Rational::zero);
                if let Some(above) = quotient.get(&(q + g)) {
                    value += above;
                }
                if value.is_zero() {
                    continue;
                }
                if q < lo + g {
                    return Err(Error::InexactDivision(format!(
                        "{self} by 1 - e^{{-{}}}",
                        super::character::render_exponent(self.space, beta).unwrap_or_default()
                    )));
                }
                quotient.insert(q, value);
            }
            for (q, c) in quotient {
                let mu: Vec<i64> = rep.iter().zip(&prim).map(|(r, p)| r + q * p).collect();
                out.add_term(mu, c);
            }
        }
        Ok(out)
    }

    fn display_order(&self) -> Vec<(&Vec<i64>, &Rational)> {
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let da: i64 = a.iter().sum();
            let db: i64 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        terms
    }

    pub fn parse(space: VarSpace, text: &str) -> Result<Char> {
        super::parse::parse_char(space, text)
    }
}

/// `2a1-a2` style rendering of a lattice point; `None` for zero.
pub(crate) fn render_exponent(space: VarSpace, mu: &[i64]) -> Option<String> {
    let mut out = String::new();
    for (k, &x) in mu.iter().enumerate() {
        if x == 0 {
            continue;
        }
        if x < 0 {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        if x.abs() != 1 {
            out.push_str(&x.abs().to_string());
        }
        out.push_str(&space.var_name(k));
    }
    (!out.is_empty()).then_some(out)
}

impl fmt::Display for Char {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (mu, c)) in self.display_order().into_iter().enumerate() {
            let body = render_exponent(self.space, mu).map(|e| format!("e^{{{e}}}"));
            write_coefficient(f, idx == 0, c, body.as_deref())?;
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl $trait<&Char> for &Char {
            type Output = Char;
            fn $method(self, rhs: &Char) -> Char {
                self.$inner(rhs).expect("character variable spaces differ")
            }
        }
        impl $trait<Char> for Char {
            type Output = Char;
            fn $method(self, rhs: Char) -> Char {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Char> for Char {
            type Output = Char;
            fn $method(self, rhs: &Char) -> Char {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl AddAssign<&Char> for Char {
    fn add_assign(&mut self, rhs: &Char) {
        self.space.check(&rhs.space).expect("character variable spaces differ");
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), c.clone());
        }
    }
}

impl SubAssign<&Char> for Char {
    fn sub_assign(&mut self, rhs: &Char) {
        self.space.check(&rhs.space).expect("character variable spaces differ");
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), -c.clone());
        }
    }
}

impl Neg for &Char {
    type Output = Char;
    fn neg(self) -> Char {
        self.scale(&-Rational::one())
    }
}

impl Neg for Char {
    type Output = Char;
    fn neg(self) -> Char {
        -&self
    }
}
