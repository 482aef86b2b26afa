use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{Char, Poly, Rational, VarSpace};
use crate::{Error, Result};

/// `numerator / Π (1 - e^{-β})` with the factors kept symbolically.
///
/// Factors are normalized so that the first nonzero coordinate of β is
/// positive, using `1/(1 - e^{β}) = -e^{-β}/(1 - e^{-β})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharFraction {
    numerator: Char,
    denominator: BTreeMap<Vec<i64>, u32>,
}

impl CharFraction {
    pub fn new(numerator: Char) -> Self {
        CharFraction { numerator, denominator: BTreeMap::new() }
    }

    pub fn zero(space: VarSpace) -> Self {
        Self::new(Char::zero(space))
    }

    /// `numerator / Π_{β ∈ factors} (1 - e^{-β})`.
    pub fn with_factors(numerator: Char, factors: &[Vec<i64>]) -> Result<Self> {
        let mut out = Self::new(numerator);
        for beta in factors {
            out.divide_by(beta)?;
        }
        Ok(out)
    }

    pub fn numerator(&self) -> &Char {
        &self.numerator
    }

    pub fn denominator_factors(&self) -> impl Iterator<Item = (&Vec<i64>, &u32)> {
        self.denominator.iter()
    }

    /// Appends a factor `1 - e^{-β}` to the denominator.
    pub fn divide_by(&mut self, beta: &[i64]) -> Result<()> {
        if beta.len() != self.numerator.space().len {
            return Err(Error::RankMismatch {
                expected: self.numerator.space().len,
                found: beta.len(),
            });
        }
        let lead = beta.iter().find(|&&x| x != 0).copied();
        match lead {
            None => Err(Error::InexactDivision("denominator factor 1 - e^0".into())),
            Some(x) if x > 0 => {
                *self.denominator.entry(beta.to_vec()).or_insert(0) += 1;
                Ok(())
            }
            Some(_) => {
                let gamma: Vec<i64> = beta.iter().map(|x| -x).collect();
                let space = self.numerator.space();
                self.numerator = -(&self.numerator * &Char::exp(space, beta));
                *self.denominator.entry(gamma).or_insert(0) += 1;
                Ok(())
            }
        }
    }

    fn expanded_to(&self, target: &BTreeMap<Vec<i64>, u32>) -> Char {
        let space = self.numerator.space();
        let mut num = self.numerator.clone();
        for (beta, &m) in target {
            let have = self.denominator.get(beta).copied().unwrap_or(0);
            for _ in have..m {
                num = &num * &Char::one_minus_exp_neg(space, beta);
            }
        }
        num
    }

    pub fn try_add(&self, other: &CharFraction) -> Result<CharFraction> {
        self.numerator.space().check(&other.numerator.space())?;
        let mut common = self.denominator.clone();
        for (beta, &m) in &other.denominator {
            let e = common.entry(beta.clone()).or_insert(0);
            *e = (*e).max(m);
        }
        let numerator = self.expanded_to(&common) + other.expanded_to(&common);
        Ok(CharFraction { numerator, denominator: common })
    }

    /// Exact division of the numerator by every denominator factor.
    pub fn finalize(&self) -> Result<Char> {
        let mut out = self.numerator.clone();
        for (beta, &m) in &self.denominator {
            for _ in 0..m {
                out = out.divide_one_minus_exp_neg(beta)?;
            }
        }
        Ok(out)
    }
}

/// `numerator / Π ℓ` for homogeneous linear forms ℓ, normalized to leading
/// coefficient one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyFraction {
    numerator: Poly,
    denominator: BTreeMap<Vec<Rational>, u32>,
}

impl PolyFraction {
    pub fn new(numerator: Poly) -> Self {
        PolyFraction { numerator, denominator: BTreeMap::new() }
    }

    pub fn zero(space: VarSpace) -> Self {
        Self::new(Poly::zero(space))
    }

    pub fn numerator(&self) -> &Poly {
        &self.numerator
    }

    pub fn divide_by(&mut self, linear: &Poly) -> Result<()> {
        self.numerator.space().check(&linear.space())?;
        let coeffs = linear
            .linear_coefficients()
            .filter(|c| c.iter().any(|x| !x.is_zero()))
            .ok_or_else(|| Error::InexactDivision(format!("{linear} is not a linear form")))?;
        let lead = coeffs.iter().find(|x| !x.is_zero()).unwrap().clone();
        let normalized: Vec<Rational> = coeffs.iter().map(|x| x / &lead).collect();
        self.numerator = self.numerator.scale(&(Rational::one() / lead));
        *self.denominator.entry(normalized).or_insert(0) += 1;
        Ok(())
    }

    fn form(&self, coeffs: &[Rational]) -> Poly {
        let space = self.numerator.space();
        let mut p = Poly::zero(space);
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                p += &Poly::var(space, k + 1).scale(c);
            }
        }
        p
    }

    fn expanded_to(&self, target: &BTreeMap<Vec<Rational>, u32>) -> Poly {
        let mut num = self.numerator.clone();
        for (coeffs, &m) in target {
            let have = self.denominator.get(coeffs).copied().unwrap_or(0);
            if m > have {
                num = &num * &self.form(coeffs).pow(m - have);
            }
        }
        num
    }

    pub fn try_add(&self, other: &PolyFraction) -> Result<PolyFraction> {
        self.numerator.space().check(&other.numerator.space())?;
        let mut common = self.denominator.clone();
        for (coeffs, &m) in &other.denominator {
            let e = common.entry(coeffs.clone()).or_insert(0);
            *e = (*e).max(m);
        }
        let numerator = self.expanded_to(&common) + other.expanded_to(&common);
        Ok(PolyFraction { numerator, denominator: common })
    }

    pub fn finalize(&self) -> Result<Poly> {
        let mut out = self.numerator.clone();
        for (coeffs, &m) in &self.denominator {
            let form = self.form(coeffs);
            for _ in 0..m {
                out = out.divide_linear(&form)?;
            }
        }
        Ok(out)
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn opposite_factors_cancel() {
        let sp = VarSpace::alpha(1);
        let a = CharFraction::with_factors(Char::one(sp), &[vec![1]]).unwrap();
        let b = CharFraction::with_factors(Char::exp(sp, &[1]), &[vec![-1]]).unwrap();
        assert!(a.try_add(&b).unwrap().finalize().unwrap().is_zero());
    }

    #[test]
    fn trivial_finalizations() {
        let sp = VarSpace::alpha(2);
        let c = Char::exp(sp, &[1, -2]);
        assert_eq!(CharFraction::new(c.clone()).finalize().unwrap(), c);
        let f = CharFraction::with_factors(Char::one_minus_exp_neg(sp, &[1, 0]), &[vec![1, 0]])
            .unwrap();
        assert_eq!(f.finalize().unwrap(), Char::one(sp));
    }

    #[test]
    fn two_point_euler_sum() {
        let sp = VarSpace::lambda(1);
        let a = CharFraction::with_factors(Char::one(sp), &[vec![1]]).unwrap();
        let b = CharFraction::with_factors(Char::one(sp), &[vec![-1]]).unwrap();
        assert_eq!(a.try_add(&b).unwrap().finalize().unwrap(), Char::one(sp));
    }

    #[test]
    fn two_point_integral() {
        let sp = VarSpace::lambda(1);
        let l = Poly::var(sp, 1);
        let mut a = PolyFraction::new(Poly::one(sp));
        a.divide_by(&l).unwrap();
        let mut b = PolyFraction::new(Poly::one(sp));
        b.divide_by(&-&l).unwrap();
        assert!(a.try_add(&b).unwrap().finalize().unwrap().is_zero());
        assert!(a.finalize().is_err());
    }
}
