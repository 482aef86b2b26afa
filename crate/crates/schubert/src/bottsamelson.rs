//! Bott–Samelson combinatorics for a word of simple roots.

use crate::botttower::{expand_in_basis, fibre_euler, fibre_integral, BottTowerSpec, CharTable, EpsilonMask, PolyTable};
use crate::rootdata::{CartanMatrix, RootVector};
use crate::symalg::{Char, CharFraction, Poly, PolyFraction, VarSpace};
use crate::weyl::{bruhat_leq, demazure_step, WeylElement, Word};
use crate::{Error, Result};

/// A word `μ_1, …, μ_N` of simple-root indices over a Cartan matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BSWord {
    cm: CartanMatrix,
    word: Word,
}

impl BSWord {
    pub fn new(cm: &CartanMatrix, word: &Word) -> Result<Self> {
        word.validate(cm)?;
        if word.len() > crate::botttower::MAX_MASK_LEN {
            return Err(Error::Domain(format!("word of length {} is too long", word.len())));
        }
        Ok(BSWord { cm: cm.clone(), word: word.clone() })
    }

    pub fn cartan(&self) -> &CartanMatrix {
        &self.cm
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn space(&self) -> VarSpace {
        VarSpace::alpha(self.cm.rank())
    }

    /// Simple-root index `μ_i` (1-based `i`).
    pub fn letter(&self, i: usize) -> usize {
        self.word.0[i - 1]
    }

    fn check_mask(&self, eps: &EpsilonMask) -> Result<()> {
        if eps.len() == self.len() {
            Ok(())
        } else {
            Err(Error::MaskLength { expected: self.len(), found: eps.len() })
        }
    }

    /// The Bott-tower list `b_{i,j} = α_{μ_j}(h_{μ_i})`.
    pub fn induced_list(&self) -> BottTowerSpec {
        let n = self.len();
        let mut spec = BottTowerSpec::new(n);
        for i in 1..=n {
            for j in i + 1..=n {
                spec.set(i, j, self.cm.entry(self.letter(i), self.letter(j))).unwrap();
            }
        }
        spec
    }

    /// `v_i^j(ε)`: ordered product of `s_{μ_k}` over `i ≤ k ≤ j`, `k ∈ π_+(ε)`.
    pub fn v_range(&self, eps: &EpsilonMask, i: usize, j: usize) -> Result<WeylElement> {
        self.check_mask(eps)?;
        let mut w = WeylElement::identity(&self.cm);
        for k in i..=j.min(self.len()) {
            if eps.contains(k) {
                w = w.mul_simple(self.letter(k));
            }
        }
        Ok(w)
    }

    /// `v_i(ε) = v_1^i(ε)`.
    pub fn v_eps(&self, eps: &EpsilonMask, i: usize) -> Result<WeylElement> {
        self.v_range(eps, 1, i)
    }

    /// `v(ε) = v_N(ε)`.
    pub fn v_full(&self, eps: &EpsilonMask) -> Result<WeylElement> {
        self.v_range(eps, 1, self.len())
    }

    /// `α_i(ε) = v_i(ε) α_{μ_i}` for all `i` at once.
    pub fn alphas(&self, eps: &EpsilonMask) -> Result<Vec<RootVector>> {
        self.check_mask(eps)?;
        let mut w = WeylElement::identity(&self.cm);
        let mut out = Vec::with_capacity(self.len());
        for i in 1..=self.len() {
            if eps.contains(i) {
                w = w.mul_simple(self.letter(i));
            }
            out.push(w.image_of_simple(self.letter(i)));
        }
        Ok(out)
    }

    pub fn alpha_eps(&self, eps: &EpsilonMask, i: usize) -> Result<RootVector> {
        if i < 1 || i > self.len() {
            return Err(Error::IndexOutOfRange { index: i, rank: self.len() });
        }
        Ok(self.alphas(eps)?.swap_remove(i - 1))
    }

    /// Pushes a λ-coefficient vector through `λ_k ↦ α_{μ_k}`.
    pub fn tau(&self, lambda: &[i64]) -> RootVector {
        let mut out = vec![0; self.cm.rank()];
        for (k, &c) in lambda.iter().enumerate() {
            out[self.letter(k + 1) - 1] += c;
        }
        RootVector(out)
    }

    /// Whether `α_i(ε) = -τ(λ_i(ε))` for the induced list.
    pub fn tau_consistency(&self, eps: &EpsilonMask, i: usize) -> Result<bool> {
        let lambda = self.induced_list().lambda_coeffs(eps);
        Ok(self.alpha_eps(eps, i)? == self.tau(&lambda[i - 1]).neg())
    }

    fn root_poly(&self, beta: &RootVector) -> Poly {
        Poly::linear(self.space(), &beta.0)
    }

    /// `σ^T_ε(ε') = (-1)^{l(ε)} Π_{i∈π_+(ε)} α_i(ε')` for `ε ≤ ε'`.
    pub fn sigma_t(&self, eps: &EpsilonMask, at: &EpsilonMask) -> Result<Poly> {
        self.check_mask(eps)?;
        let sp = self.space();
        if !eps.leq(at) {
            return Ok(Poly::zero(sp));
        }
        let alphas = self.alphas(at)?;
        Ok(eps
            .positions()
            .iter()
            .fold(Poly::one(sp), |acc, &i| &acc * &-self.root_poly(&alphas[i - 1])))
    }

    /// `μ^T_ε(ε') = Π_{i∈π_+(ε')} e^{α_i(ε')} Π_{i∈π_+(ε)} (e^{-α_i(ε')} - 1)`.
    pub fn mu_t(&self, eps: &EpsilonMask, at: &EpsilonMask) -> Result<Char> {
        self.check_mask(eps)?;
        let sp = self.space();
        if !eps.leq(at) {
            return Ok(Char::zero(sp));
        }
        let alphas = self.alphas(at)?;
        let mut shift = vec![0i64; self.cm.rank()];
        for i in at.positions() {
            for (s, a) in shift.iter_mut().zip(&alphas[i - 1].0) {
                *s += a;
            }
        }
        let mut out = Char::exp(sp, &shift);
        for i in eps.positions() {
            out = &out * &(Char::exp(sp, &alphas[i - 1].neg().0) - Char::one(sp));
        }
        Ok(out)
    }

    pub fn sigma_table(&self, eps: &EpsilonMask) -> Result<PolyTable> {
        EpsilonMask::all(self.len()).into_iter().map(|at| Ok((at, self.sigma_t(eps, &at)?))).collect()
    }

    pub fn mu_table(&self, eps: &EpsilonMask) -> Result<CharTable> {
        EpsilonMask::all(self.len()).into_iter().map(|at| Ok((at, self.mu_t(eps, &at)?))).collect()
    }

    /// Masks `ε` with `l(ε) = l(w)` and `v(ε) = w`, i.e. reduced subwords for `w`.
    pub fn pullback_xi(&self, w: &WeylElement) -> Vec<EpsilonMask> {
        let mut out = Vec::new();
        let target = w.length();
        if target <= self.len() {
            self.reduced_subwords(1, WeylElement::identity(&self.cm), EpsilonMask::empty(self.len()), target, w, &mut out);
        }
        out.sort();
        out
    }

    fn reduced_subwords(
        &self,
        pos: usize,
        cur: WeylElement,
        mask: EpsilonMask,
        target: usize,
        w: &WeylElement,
        out: &mut Vec<EpsilonMask>,
    ) {
        if cur.length() == target {
            if cur == *w {
                out.push(mask);
            }
            return;
        }
        if self.len() + 1 - pos < target - cur.length() {
            return;
        }
        let letter = self.letter(pos);
        if !cur.is_right_descent(letter) {
            self.reduced_subwords(pos + 1, cur.mul_simple(letter), mask.with(pos), target, w, out);
        }
        self.reduced_subwords(pos + 1, cur, mask, target, w, out);
    }

    /// Masks whose Demazure product is `w`.
    pub fn pullback_psi(&self, w: &WeylElement) -> Vec<EpsilonMask> {
        let mut out = Vec::new();
        self.demazure_subwords(1, WeylElement::identity(&self.cm), EpsilonMask::empty(self.len()), w, &mut out);
        out.sort();
        out
    }

    fn demazure_subwords(
        &self,
        pos: usize,
        cur: WeylElement,
        mask: EpsilonMask,
        w: &WeylElement,
        out: &mut Vec<EpsilonMask>,
    ) {
        if pos > self.len() {
            if cur == *w {
                out.push(mask);
            }
            return;
        }
        let next = demazure_step(&cur, self.letter(pos));
        if bruhat_leq(&next, w) {
            self.demazure_subwords(pos + 1, next, mask.with(pos), w, out);
        }
        self.demazure_subwords(pos + 1, cur, mask, w, out);
    }

    fn negated_alphas(&self, at: &EpsilonMask) -> Result<Vec<Vec<i64>>> {
        Ok(self.alphas(at)?.into_iter().map(|a| a.neg().0).collect())
    }

    /// `Σ_{ε' ≤ ε} f(ε') / Π_{i∈π_+(ε)} (-α_i(ε'))`.
    pub fn integrate_t(&self, table: &PolyTable, eps: &EpsilonMask) -> Result<Poly> {
        self.check_mask(eps)?;
        let lookup = |at: &EpsilonMask| table.get(at).cloned().ok_or_else(|| Error::MissingFixedPoint(at.to_string()));
        if let Some(p) = fibre_integral(eps, lookup, |at| self.negated_alphas(at), self.space())? {
            return Ok(p);
        }
        let mut total = PolyFraction::zero(self.space());
        for at in eps.submasks() {
            let value = table.get(&at).ok_or_else(|| Error::MissingFixedPoint(at.to_string()))?;
            if value.is_zero() {
                continue;
            }
            let alphas = self.alphas(&at)?;
            let mut term = PolyFraction::new(value.clone());
            for i in eps.positions() {
                term.divide_by(&-self.root_poly(&alphas[i - 1]))?;
            }
            total = total.try_add(&term)?;
        }
        total.finalize()
    }

    /// `Σ_{ε' ≤ ε} F(ε') / Π_{i∈π_+(ε)} (1 - e^{α_i(ε')})`.
    pub fn euler_char_t(&self, table: &CharTable, eps: &EpsilonMask) -> Result<Char> {
        self.check_mask(eps)?;
        let lookup = |at: &EpsilonMask| table.get(at).cloned().ok_or_else(|| Error::MissingFixedPoint(at.to_string()));
        if let Some(c) = fibre_euler(eps, lookup, |at| self.negated_alphas(at), self.space())? {
            return Ok(c);
        }
        let mut total = CharFraction::zero(self.space());
        for at in eps.submasks() {
            let value = table.get(&at).ok_or_else(|| Error::MissingFixedPoint(at.to_string()))?;
            if value.is_zero() {
                continue;
            }
            let alphas = self.alphas(&at)?;
            let factors: Vec<Vec<i64>> = eps.positions().iter().map(|&i| alphas[i - 1].neg().0).collect();
            total = total.try_add(&CharFraction::with_factors(value.clone(), &factors)?)?;
        }
        total.finalize()
    }

    /// Coefficients of `σ̂^T_{ε1} σ̂^T_{ε2}` by triangular solve.
    pub fn product(&self, eps1: &EpsilonMask, eps2: &EpsilonMask) -> Result<PolyTable> {
        self.expand(|at| Ok(&self.sigma_t(eps1, at)? * &self.sigma_t(eps2, at)?))
    }

    /// Expands a fixed-point function in the `σ̂^T` basis.
    pub fn expand(&self, target: impl Fn(&EpsilonMask) -> Result<Poly>) -> Result<PolyTable> {
        expand_in_basis(
            &EpsilonMask::all(self.len()),
            |e, at| self.sigma_t(e, at),
            |at| {
                let alphas = self.alphas(at)?;
                Ok(at.positions().iter().map(|&i| -self.root_poly(&alphas[i - 1])).collect())
            },
            target,
        )
    }

    /// `α^i_j(ε)(μ_j^∨)` with `α^i_j(ε) = v^i_{j+1}(ε) α_{μ_i}`.
    pub fn product_coefficient(&self, eps: &EpsilonMask, j: usize, i: usize) -> Result<i64> {
        let root = self.v_range(eps, j + 1, i)?.image_of_simple(self.letter(i));
        self.cm.pairing(&root, &self.cm.simple_coroot(self.letter(j)))
    }

    /// `σ̂^T_{(i)} σ̂^T_ε` by the multiplication rule.
    pub fn generator_product(&self, i: usize, eps: &EpsilonMask) -> Result<PolyTable> {
        self.check_mask(eps)?;
        let sp = self.space();
        let mut out = PolyTable::new();
        if !eps.contains(i) {
            out.insert(eps.with(i), Poly::one(sp));
            return Ok(out);
        }
        out.insert(*eps, -self.root_poly(&self.alpha_eps(eps, i)?));
        for j in (1..i).filter(|&j| !eps.contains(j)) {
            let c = self.product_coefficient(eps, j, i)?;
            if c != 0 {
                out.insert(eps.with(j), Poly::from_int(sp, c));
            }
        }
        Ok(out)
    }

    pub fn product_by_rules(&self, eps1: &EpsilonMask, eps2: &EpsilonMask) -> Result<PolyTable> {
        let sp = self.space();
        let mut current = PolyTable::from([(*eps2, Poly::one(sp))]);
        for i in eps1.positions() {
            let mut next = PolyTable::new();
            for (eps, c) in &current {
                for (target, d) in self.generator_product(i, eps)? {
                    let entry = next.entry(target).or_insert_with(|| Poly::zero(sp));
                    *entry += &(c * &d);
                }
            }
            next.retain(|_, p| !p.is_zero());
            current = next;
        }
        Ok(current)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::botttower::chain_coeff;

    fn bs(name: &str, word: &[usize]) -> BSWord {
        BSWord::new(&CartanMatrix::from_type_name(name).unwrap(), &Word(word.to_vec())).unwrap()
    }

    fn m(s: &str) -> EpsilonMask {
        s.parse().unwrap()
    }

    fn w(b: &BSWord, word: &[usize]) -> WeylElement {
        WeylElement::from_word(b.cartan(), &Word(word.to_vec())).unwrap()
    }

    #[test]
    fn cell_elements() {
        let b = bs("A2", &[1, 2, 1]);
        assert!(b.v_eps(&m("000"), 3).unwrap().is_identity());
        assert_eq!(b.v_eps(&m("111"), 3).unwrap(), w(&b, &[1, 2, 1]));
        assert_eq!(b.v_eps(&m("011"), 3).unwrap(), w(&b, &[2, 1]));
        assert_eq!(b.alpha_eps(&m("000"), 1).unwrap(), RootVector(vec![1, 0]));
        assert_eq!(b.alpha_eps(&m("111"), 3).unwrap(), RootVector(vec![0, -1]));
        assert_eq!(b.alpha_eps(&m("101"), 3).unwrap(), RootVector(vec![1, 0]));
    }

    #[test]
    fn tau_checks() {
        for (name, word) in [("A2", vec![1, 2, 1]), ("B2", vec![1, 2, 1, 2])] {
            let b = bs(name, &word);
            for eps in EpsilonMask::all(b.len()) {
                for i in 1..=b.len() {
                    assert!(b.tau_consistency(&eps, i).unwrap(), "{name} {eps} {i}");
                }
            }
        }
    }

    #[test]
    fn sigma_examples() {
        let b = bs("A2", &[1, 2, 1]);
        let sp = b.space();
        for at in EpsilonMask::all(3) {
            assert!(b.sigma_t(&m("000"), &at).unwrap().is_one());
        }
        assert_eq!(b.sigma_t(&m("100"), &m("111")).unwrap(), Poly::var(sp, 1));
        let b = bs("B2", &[1, 2, 1, 2]);
        let total = b.sigma_t(&m("1000"), &m("1111")).unwrap() + b.sigma_t(&m("0010"), &m("1111")).unwrap();
        assert_eq!(total.to_string(), "2*a1 + a2");
    }

    #[test]
    fn mu_examples() {
        let b = bs("A1", &[1]);
        let sp = b.space();
        assert_eq!(b.mu_t(&m("0"), &m("0")).unwrap(), Char::one(sp));
        assert_eq!(b.mu_t(&m("1"), &m("1")).unwrap(), Char::one_minus_exp_neg(sp, &[1]));
        assert!(b.mu_t(&m("1"), &m("0")).unwrap().is_zero());
    }

    #[test]
    fn pullback_sets() {
        let show = |v: Vec<EpsilonMask>| -> Vec<String> { v.iter().map(|e| e.to_string()).collect() };
        let b = bs("B2", &[1, 2, 1, 2]);
        let mut got = show(b.pullback_xi(&w(&b, &[1])));
        got.sort();
        assert_eq!(got, ["0010", "1000"]);
        let mut got = show(b.pullback_xi(&w(&b, &[1, 2])));
        got.sort();
        assert_eq!(got, ["0011", "1001", "1100"]);
        assert_eq!(show(b.pullback_xi(&w(&b, &[]))), ["0000"]);
        let b = bs("A2", &[1, 2, 1]);
        assert_eq!(show(b.pullback_psi(&w(&b, &[]))), ["000"]);
        let mut got = show(b.pullback_psi(&w(&b, &[1])));
        got.sort();
        assert_eq!(got, ["001", "100", "101"]);
        assert_eq!(show(b.pullback_psi(&w(&b, &[1, 2, 1]))), ["111"]);
    }

    #[test]
    fn localization_through_tau() {
        let b = bs("B2", &[1, 2, 1, 2]);
        let sp = b.space();
        for eps in EpsilonMask::all(4) {
            let table = b.sigma_table(&eps).unwrap();
            for target in EpsilonMask::all(4) {
                let expect = Poly::from_int(sp, (eps == target) as i64);
                assert_eq!(b.integrate_t(&table, &target).unwrap(), expect);
            }
        }
    }

    #[test]
    fn product_rule_matches_solve() {
        let b = bs("B2", &[1, 2, 1, 2]);
        let spec = b.induced_list();
        for eps in EpsilonMask::all(4) {
            for i in 2..=4 {
                for j in 1..i {
                    if eps.contains(i) && !eps.contains(j) {
                        assert_eq!(b.product_coefficient(&eps, j, i).unwrap(), chain_coeff(&spec, &eps, j, i).unwrap());
                    }
                }
            }
        }
        for e1 in EpsilonMask::all(4) {
            for e2 in EpsilonMask::all(4) {
                assert_eq!(b.product(&e1, &e2).unwrap(), b.product_by_rules(&e1, &e2).unwrap(), "{e1} {e2}");
            }
        }
    }
}
