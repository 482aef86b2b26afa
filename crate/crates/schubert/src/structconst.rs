//! The square-free algebra `𝒜_D = A[x_1,…,x_N]/(Q_1,…,Q_N)`, its coefficient
//! functionals `T^ε`, and equivariant structure constants `p_{u,v}^w`.

use std::collections::{BTreeMap, HashMap};

use crate::bottsamelson::BSWord;
use crate::botttower::EpsilonMask;
use crate::flagcoh::CohRestriction;
use crate::rootdata::CartanMatrix;
use crate::symalg::{Poly, VarSpace};
use crate::weyl::{bruhat_leq, WeylElement, Word};
use crate::{Error, Result};

/// Square-free expansion `Σ_ε c_ε x^ε`.
pub type ADElement = BTreeMap<EpsilonMask, Poly>;

/// The relations `x_k² = d_{k,k} x_k + Σ_{l<k} d_{l,k} x_l x_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct DList {
    n: usize,
    space: VarSpace,
    diagonal: Vec<Poly>,
    off: BTreeMap<(usize, usize), Poly>,
}

impl DList {
    /// `diagonal[k-1] = d_{k,k}`; `off` holds `d_{l,k}` for `l < k`, missing entries are 0.
    pub fn new(diagonal: Vec<Poly>, off: BTreeMap<(usize, usize), Poly>) -> Result<Self> {
        let n = diagonal.len();
        let space = diagonal.first().map(Poly::space).unwrap_or(VarSpace::alpha(0));
        for d in &diagonal {
            space.check(&d.space())?;
            if d.degree().unwrap_or(0) > 1 {
                return Err(Error::Domain(format!("d_kk = {d} has degree > 1")));
            }
        }
        for (&(l, k), d) in &off {
            space.check(&d.space())?;
            if !(1 <= l && l < k && k <= n) {
                return Err(Error::Domain(format!("d_({l},{k}) outside 1 <= l < k <= {n}")));
            }
            if d.degree().unwrap_or(0) > 0 {
                return Err(Error::Domain(format!("d_({l},{k}) = {d} is not constant")));
            }
        }
        let off = off.into_iter().filter(|(_, d)| !d.is_zero()).collect();
        Ok(DList { n, space, diagonal, off })
    }

    /// `d_{k,k} = α_{μ_k}` and `d_{l,k} = −α_{μ_k}(h_{μ_l})`.
    pub fn bott_samelson(bs: &BSWord) -> Self {
        let space = bs.space();
        let cm = bs.cartan();
        let diagonal = (1..=bs.len()).map(|k| Poly::var(space, bs.letter(k))).collect();
        let mut off = BTreeMap::new();
        for k in 1..=bs.len() {
            for l in 1..k {
                let c = -cm.entry(bs.letter(l), bs.letter(k));
                if c != 0 {
                    off.insert((l, k), Poly::from_int(space, c));
                }
            }
        }
        DList { n: bs.len(), space, diagonal, off }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn space(&self) -> VarSpace {
        self.space
    }

    /// `d_{l,k}` for `l ≤ k`.
    pub fn get(&self, l: usize, k: usize) -> Poly {
        if l == k {
            return self.diagonal[k - 1].clone();
        }
        self.off.get(&(l, k)).cloned().unwrap_or_else(|| Poly::zero(self.space))
    }

    /// `d_{k,k} + Σ_{l<k, l∈support} d_{l,k} x_l`.
    fn reduction(&self, k: usize, support: Option<&EpsilonMask>) -> RawPoly {
        let mut out = RawPoly::constant(self.n, self.get(k, k));
        for l in 1..k {
            if support.is_none_or(|e| e.contains(l)) {
                if let Some(d) = self.off.get(&(l, k)) {
                    out = out + RawPoly::var(self.n, self.space, l).scale(d);
                }
            }
        }
        out
    }
}

/// A polynomial in `x_1,…,x_N` with `Poly` coefficients, before reduction.
#[derive(Clone, Debug, PartialEq)]
pub struct RawPoly {
    n: usize,
    terms: BTreeMap<Vec<u32>, Poly>,
}

impl RawPoly {
    pub fn zero(n: usize) -> Self {
        RawPoly { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Poly) -> Self {
        let mut out = RawPoly::zero(n);
        out.add_term(vec![0; n], c);
        out
    }

    pub fn var(n: usize, space: VarSpace, k: usize) -> Self {
        let mut exps = vec![0; n];
        exps[k - 1] = 1;
        RawPoly::monomial(exps, Poly::one(space))
    }

    pub fn monomial(exps: Vec<u32>, c: Poly) -> Self {
        let mut out = RawPoly::zero(exps.len());
        out.add_term(exps, c);
        out
    }

    /// `x^ε`.
    pub fn from_mask(space: VarSpace, eps: &EpsilonMask) -> Self {
        let exps = (1..=eps.len()).map(|i| eps.contains(i) as u32).collect();
        RawPoly::monomial(exps, Poly::one(space))
    }

    /// `Σ_{ε ∈ masks} x^ε`.
    pub fn mask_sum(n: usize, space: VarSpace, masks: &[EpsilonMask]) -> Self {
        masks.iter().fold(RawPoly::zero(n), |acc, e| acc + RawPoly::from_mask(space, e))
    }

    /// Number of variables `x_1..x_n`.
    pub fn vars(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Poly)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, exps: Vec<u32>, c: Poly) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(old) => {
                *old += &c;
                if old.is_zero() {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn scale(&self, c: &Poly) -> RawPoly {
        let mut out = RawPoly::zero(self.n);
        for (e, p) in &self.terms {
            out.add_term(e.clone(), p * c);
        }
        out
    }

    pub fn mul(&self, other: &RawPoly) -> RawPoly {
        let mut out = RawPoly::zero(self.n);
        for (e1, p1) in &self.terms {
            for (e2, p2) in &other.terms {
                let exps = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(exps, p1 * p2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32, space: VarSpace) -> RawPoly {
        let mut out = RawPoly::constant(self.n, Poly::one(space));
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }
}

impl std::ops::Add for RawPoly {
    type Output = RawPoly;
    fn add(mut self, other: RawPoly) -> RawPoly {
        for (e, p) in other.terms {
            self.add_term(e, p);
        }
        self
    }
}

fn mask_of(exps: &[u32]) -> EpsilonMask {
    let positions: Vec<usize> = (1..=exps.len()).filter(|&i| exps[i - 1] > 0).collect();
    EpsilonMask::from_positions(exps.len(), &positions)
}

/// Rewrites `p` into the square-free basis, highest squared variable first.
pub fn normal_form(dlist: &DList, p: &RawPoly) -> ADElement {
    let space = dlist.space();
    let mut pending = p.clone();
    let mut done = ADElement::new();
    let mut powers: HashMap<(usize, u32), RawPoly> = HashMap::new();
    while !pending.is_zero() {
        let mut next = RawPoly::zero(dlist.len());
        for (exps, c) in pending.terms {
            match (1..=exps.len()).rev().find(|&k| exps[k - 1] >= 2) {
                None => {
                    let entry = done.entry(mask_of(&exps)).or_insert_with(|| Poly::zero(space));
                    *entry += &c;
                }
                Some(k) => {
                    let s = exps[k - 1];
                    let factor = powers
                        .entry((k, s - 1))
                        .or_insert_with(|| dlist.reduction(k, None).pow(s - 1, space))
                        .clone();
                    let mut rest = exps.clone();
                    rest[k - 1] = 1;
                    next = next + RawPoly::monomial(rest, c).mul(&factor);
                }
            }
        }
        pending = next;
    }
    done.retain(|_, c| !c.is_zero());
    done
}

/// `T^ε(p)`, the `x^ε` coefficient of the reduction of `p`.
pub fn t_eps(dlist: &DList, p: &RawPoly, eps: &EpsilonMask) -> Poly {
    let space = dlist.space();
    let mut current = p.clone();
    let mut eps = *eps;
    loop {
        let top = match eps.top() {
            None => {
                return current
                    .terms
                    .get(&vec![0; dlist.len()])
                    .cloned()
                    .unwrap_or_else(|| Poly::zero(space));
            }
            Some(t) => t,
        };
        let reduction = dlist.reduction(top, Some(&eps));
        let mut powers: HashMap<u32, RawPoly> = HashMap::new();
        let mut next = RawPoly::zero(dlist.len());
        for (exps, c) in current.terms {
            let outside = (1..=exps.len()).any(|i| exps[i - 1] > 0 && !eps.contains(i));
            let s = exps[top - 1];
            if outside || s == 0 {
                continue;
            }
            let factor = powers.entry(s - 1).or_insert_with(|| reduction.pow(s - 1, space));
            let mut rest = exps;
            rest[top - 1] = 0;
            next = next + RawPoly::monomial(rest, c).mul(factor);
        }
        current = next;
        eps = eps.without(top);
    }
}

/// `p_{u,v}^w = T^{(1,…,1)}[(Σ_{ε} x^ε)(Σ_{ε'} x^{ε'})]` for a reduced word of `w`.
/// A non-reduced word gives the top-cell coefficient of a degenerate Bott–Samelson
/// map, which is 0.
pub fn struct_const(cm: &CartanMatrix, u: &WeylElement, v: &WeylElement, w_word: &Word) -> Result<Poly> {
    let bs = BSWord::new(cm, w_word)?;
    let dlist = DList::bott_samelson(&bs);
    let (n, space) = (bs.len(), bs.space());
    let left = RawPoly::mask_sum(n, space, &bs.pullback_xi(u));
    let right = RawPoly::mask_sum(n, space, &bs.pullback_xi(v));
    Ok(t_eps(&dlist, &left.mul(&right), &EpsilonMask::full(n)))
}

/// All `p_{u,v}^w` with `w` at most the product of `dominating_word`, obtained by
/// expanding `ξ^u ξ^v` on the Bott–Samelson fixed points of that word.
pub fn product_in_basis(
    cm: &CartanMatrix,
    u: &WeylElement,
    v: &WeylElement,
    dominating_word: &Word,
) -> Result<BTreeMap<WeylElement, Poly>> {
    let bs = BSWord::new(cm, dominating_word)?;
    let top = WeylElement::from_word(cm, dominating_word)?;
    if top.length() != dominating_word.len() {
        return Err(Error::NotDominated(format!("word {dominating_word} is not reduced")));
    }
    for x in [u, v] {
        if !bruhat_leq(x, &top) {
            return Err(Error::NotDominated(format!("{x} is not below {top}")));
        }
    }
    let xi = CohRestriction::new(cm);
    let table = bs.expand(|at| {
        let point = bs.v_full(at)?;
        Ok(&xi.get(u, &point)? * &xi.get(v, &point)?)
    })?;
    let mut out: BTreeMap<WeylElement, Poly> = BTreeMap::new();
    for (eps, c) in table {
        if c.is_zero() {
            continue;
        }
        let w = bs.v_full(&eps)?;
        if w.length() != eps.ones() {
            return Err(Error::Domain(format!("nonzero coefficient on non-reduced mask {eps}")));
        }
        match out.get(&w) {
            Some(prev) if *prev != c => {
                return Err(Error::Domain(format!("inconsistent coefficients for {w}")));
            }
            _ => {
                out.insert(w, c);
            }
        }
    }
    Ok(out)
}

/// Nonnegativity in the monomials of the simple roots.
pub fn is_graham_positive(p: &Poly) -> bool {
    p.has_nonnegative_coefficients()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flagcoh::kk_structconst;
    use crate::weyl::{all_elements, longest_element};

    fn cm(name: &str) -> CartanMatrix {
        CartanMatrix::from_type_name(name).unwrap()
    }

    fn el(cm: &CartanMatrix, word: &[usize]) -> WeylElement {
        WeylElement::from_word(cm, &Word(word.to_vec())).unwrap()
    }

    fn a2_dlist() -> DList {
        DList::bott_samelson(&BSWord::new(&cm("A2"), &Word(vec![1, 2, 1])).unwrap())
    }

    fn render(elem: &ADElement) -> BTreeMap<String, String> {
        elem.iter().map(|(e, c)| (e.to_string(), c.to_string())).collect()
    }

    #[test]
    fn normal_form_examples() {
        let d = a2_dlist();
        let sp = d.space();
        let x1sq = RawPoly::monomial(vec![2, 0, 0], Poly::one(sp));
        let nf = normal_form(&d, &x1sq);
        assert_eq!(render(&nf), BTreeMap::from([("100".into(), "a1".into())]));
        let x3sq = RawPoly::monomial(vec![0, 0, 2], Poly::one(sp));
        let nf = normal_form(&d, &x3sq);
        let expect = BTreeMap::from([
            ("001".to_string(), "a1".to_string()),
            ("011".to_string(), "1".to_string()),
            ("101".to_string(), "-2".to_string()),
        ]);
        assert_eq!(render(&nf), expect);
        let sf = RawPoly::monomial(vec![1, 1, 0], Poly::var(sp, 2));
        assert_eq!(render(&normal_form(&d, &sf)), BTreeMap::from([("110".into(), "a2".into())]));
    }

    #[test]
    fn t_eps_rules() {
        let sp = VarSpace::free(2);
        let (d1, d2) = (Poly::var(sp, 1), Poly::var(sp, 2));
        let d = DList::new(vec![d1.clone(), d2.clone()], BTreeMap::from([((1, 2), Poly::one(sp))])).unwrap();
        let full = EpsilonMask::full(2);
        for s in 1..4 {
            for t in 1..4 {
                let p = RawPoly::monomial(vec![s, t], Poly::one(sp));
                let expect = &d1.pow(s - 1) * &(&d1 + &d2).pow(t - 1);
                assert_eq!(t_eps(&d, &p, &full), expect);
                assert_eq!(normal_form(&d, &p).get(&full).cloned().unwrap_or(Poly::zero(sp)), expect);
            }
            let p = RawPoly::monomial(vec![s, 0], Poly::one(sp));
            assert_eq!(t_eps(&d, &p, &EpsilonMask::unit(2, 1)), d1.pow(s - 1));
            assert!(t_eps(&d, &p, &full).is_zero());
        }
    }

    #[test]
    fn golden_structure_constants() {
        let a5 = cm("A5");
        let p = struct_const(&a5, &el(&a5, &[5, 2]), &el(&a5, &[4, 5, 3, 4]), &Word(vec![4, 5, 2, 3, 4])).unwrap();
        assert_eq!(p.to_string(), "a4 + a5");
        let g2 = cm("G2");
        let p = struct_const(&g2, &el(&g2, &[2, 1, 2]), &el(&g2, &[1, 2, 1]), &Word(vec![1, 2, 1, 2])).unwrap();
        assert_eq!(p.to_string(), "2*a1^2 + 5*a1*a2 + 3*a2^2");
        let a6 = cm("A6");
        let p = struct_const(&a6, &el(&a6, &[1, 3, 5, 6]), &el(&a6, &[2, 5, 6]), &Word(vec![1, 2, 3, 4, 5, 6]))
            .unwrap();
        assert_eq!(p.to_string(), "a1 + a2 + a3 + a4 + 2*a5 + a6");
        let a2 = cm("A2");
        assert!(struct_const(&a2, &el(&a2, &[2]), &el(&a2, &[1, 2]), &Word(vec![2, 1, 2])).unwrap().is_zero());
    }

    #[test]
    fn golden_products() {
        let b2 = cm("B2");
        let w0 = longest_element(&b2).unwrap().reduced_word();
        let prod = product_in_basis(&b2, &el(&b2, &[1, 2]), &el(&b2, &[2, 1]), &w0).unwrap();
        assert_eq!(prod.len(), 3);
        assert_eq!(prod[&el(&b2, &[1, 2, 1])].to_string(), "2*a1 + a2");
        assert_eq!(prod[&el(&b2, &[2, 1, 2])].to_string(), "a1 + a2");
        assert!(prod[&el(&b2, &[1, 2, 1, 2])].is_one());

        let a3 = cm("A3");
        let prod =
            product_in_basis(&a3, &el(&a3, &[3, 2, 1]), &el(&a3, &[3, 2]), &Word(vec![3, 2, 1, 3, 2, 3])).unwrap();
        assert_eq!(prod.len(), 3);
        assert_eq!(prod[&el(&a3, &[3, 2, 1])].to_string(), "a2*a3 + a3^2");
        assert_eq!(prod[&el(&a3, &[3, 2, 1, 2])].to_string(), "a3");
        assert!(prod[&el(&a3, &[3, 2, 1, 3, 2])].is_one());

        let v = el(&a3, &[2, 1, 3]);
        let prod = product_in_basis(&a3, &el(&a3, &[]), &v, &Word(vec![3, 2, 1, 3, 2, 3])).unwrap();
        assert_eq!(prod.len(), 1);
        assert!(prod[&v].is_one());
    }

    #[test]
    fn not_dominated() {
        let a2 = cm("A2");
        let r = product_in_basis(&a2, &el(&a2, &[1, 2]), &el(&a2, &[1]), &Word(vec![2, 1]));
        assert!(matches!(r, Err(Error::NotDominated(_))));
    }

    #[test]
    fn agrees_with_kostant_kumar_and_products() {
        for name in ["A2", "B2"] {
            let c = cm(name);
            let elements = all_elements(&c).unwrap();
            let w0 = longest_element(&c).unwrap().reduced_word();
            for u in &elements {
                for v in &elements {
                    let prod = product_in_basis(&c, u, v, &w0).unwrap();
                    for w in &elements {
                        let p = struct_const(&c, u, v, &w.reduced_word()).unwrap();
                        assert_eq!(p, kk_structconst(&c, u, v, &w.reduced_word()).unwrap());
                        assert_eq!(prod.get(w).cloned().unwrap_or(Poly::zero(p.space())), p);
                        assert!(is_graham_positive(&p));
                        if !(bruhat_leq(u, w) && bruhat_leq(v, w)) {
                            assert!(p.is_zero());
                        }
                    }
                }
            }
        }
    }
}
