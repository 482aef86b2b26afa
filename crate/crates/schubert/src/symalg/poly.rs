use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};

use super::{rational, write_coefficient, Rational, VarSpace};
use crate::{Error, Result};

/// Sparse multivariate polynomial with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    space: VarSpace,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Poly {
    pub fn zero(space: VarSpace) -> Self {
        Poly { space, terms: BTreeMap::new() }
    }

    pub fn one(space: VarSpace) -> Self {
        Self::constant(space, Rational::one())
    }

    pub fn constant(space: VarSpace, c: Rational) -> Self {
        let mut p = Self::zero(space);
        p.add_term(vec![0; space.len], c);
        p
    }

    pub fn from_int(space: VarSpace, c: i64) -> Self {
        Self::constant(space, rational(c))
    }

    /// The variable with 1-based index `i`.
    pub fn var(space: VarSpace, i: usize) -> Self {
        assert!(i >= 1 && i <= space.len, "variable index {i} out of range");
        let mut exps = vec![0; space.len];
        exps[i - 1] = 1;
        let mut p = Self::zero(space);
        p.add_term(exps, Rational::one());
        p
    }

    /// `Σ coeffs[k] · x_{k+1}`.
    pub fn linear(space: VarSpace, coeffs: &[i64]) -> Self {
        assert_eq!(coeffs.len(), space.len, "linear form length");
        let mut p = Self::zero(space);
        for (k, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                let mut exps = vec![0; space.len];
                exps[k] = 1;
                p.add_term(exps, rational(c));
            }
        }
        p
    }

    pub fn monomial(space: VarSpace, exps: Vec<u32>, c: Rational) -> Self {
        assert_eq!(exps.len(), space.len, "monomial length");
        let mut p = Self::zero(space);
        p.add_term(exps, c);
        p
    }

    pub fn space(&self) -> VarSpace {
        self.space
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().all(|(e, c)| e.iter().all(|&x| x == 0) && c.is_one())
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|x| x == d),
        }
    }

    /// Constant term, i.e. evaluation at the origin.
    pub fn eval_zero(&self) -> Rational {
        self.coefficient(&vec![0; self.space.len])
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Coefficients of a homogeneous degree-one polynomial.
    pub fn linear_coefficients(&self) -> Option<Vec<Rational>> {
        let mut out = vec![Rational::zero(); self.space.len];
        for (e, c) in &self.terms {
            let deg: u32 = e.iter().sum();
            if deg != 1 {
                return None;
            }
            let k = e.iter().position(|&x| x == 1)?;
            out[k] = c.clone();
        }
        Some(out)
    }

    pub(crate) fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
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

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.space.check(&other.space)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.space.check(&other.space)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.space.check(&other.space)?;
        let mut out = Poly::zero(self.space);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.space);
        }
        Poly {
            space: self.space,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut result = Poly::one(self.space);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Replaces variable `k` by `images[k]`; all images share `target`.
    pub fn substitute(&self, target: VarSpace, images: &[Poly]) -> Result<Poly> {
        if images.len() != self.space.len {
            return Err(Error::RankMismatch { expected: self.space.len, found: images.len() });
        }
        for img in images {
            target.check(&img.space)?;
        }
        let mut out = Poly::zero(target);
        for (e, c) in &self.terms {
            let mut term = Poly::constant(target, c.clone());
            for (k, &x) in e.iter().enumerate() {
                if x > 0 {
                    term = &term * &images[k].pow(x);
                }
            }
            out += &term;
        }
        Ok(out)
    }

    /// Exact quotient by a nonzero polynomial.
    ///
    /// Runs the division algorithm for the lexicographic order in which the
    /// highest-index variable is most significant; for a linear divisor this
    /// eliminates its largest-index variable.
    pub fn div_exact(&self, divisor: &Poly) -> Result<Poly> {
        self.space.check(&divisor.space)?;
        if divisor.is_zero() {
            return Err(Error::InexactDivision("division by zero".into()));
        }
        let rev = |e: &Vec<u32>| e.iter().rev().copied().collect::<Vec<u32>>();
        let d: BTreeMap<Vec<u32>, Rational> =
            divisor.terms.iter().map(|(e, c)| (rev(e), c.clone())).collect();
        let (lead_e, lead_c) = d.iter().next_back().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let mut rem: BTreeMap<Vec<u32>, Rational> =
            self.terms.iter().map(|(e, c)| (rev(e), c.clone())).collect();
        let mut quot = Poly::zero(self.space);
        while let Some((e, c)) = rem.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            if e.iter().zip(&lead_e).any(|(a, b)| a < b) {
                return Err(Error::InexactDivision(format!("{self} by {divisor}")));
            }
            let shift: Vec<u32> = e.iter().zip(&lead_e).map(|(a, b)| a - b).collect();
            let factor = c / &lead_c;
            for (de, dc) in &d {
                let key: Vec<u32> = de.iter().zip(&shift).map(|(a, b)| a + b).collect();
                let entry = rem.entry(key.clone()).or_insert_with(Rational::zero);
                *entry -= dc * &factor;
                if entry.is_zero() {
                    rem.remove(&key);
                }
            }
            quot.add_term(shift.into_iter().rev().collect(), factor);
        }
        Ok(quot)
    }

    /// Exact quotient by a homogeneous linear form.
    pub fn divide_linear(&self, linear: &Poly) -> Result<Poly> {
        if linear.is_zero() || linear.degree() != Some(1) || !linear.is_homogeneous() {
            return Err(Error::InexactDivision(format!("{linear} is not a nonzero linear form")));
        }
        self.div_exact(linear)
    }

    /// Terms in display order: descending degree, then descending lex.
    fn display_order(&self) -> Vec<(&Vec<u32>, &Rational)> {
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        terms
    }

    pub fn parse(space: VarSpace, text: &str) -> Result<Poly> {
        super::parse::parse_poly(space, text)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.display_order().into_iter().enumerate() {
            let factors: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(k, &x)| {
                    let name = self.space.var_name(k);
                    if x == 1 {
                        name
                    } else {
                        format!("{name}^{x}")
                    }
                })
                .collect();
            let body = factors.join("*");
            write_coefficient(f, idx == 0, c, (!body.is_empty()).then_some(body.as_str()))?;
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl $trait<&Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                self.$inner(rhs).expect("polynomial variable spaces differ")
            }
        }
        impl $trait<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        self.space.check(&rhs.space).expect("polynomial variable spaces differ");
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        self.space.check(&rhs.space).expect("polynomial variable spaces differ");
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), -c.clone());
        }
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rational::one())
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}
