//! Equivariant cohomology of the flag variety through fixed-point
//! restrictions: Billey's formula, divided differences, Pieri–Chevalley and
//! the Kostant–Kumar structure-constant formula.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use crate::bottsamelson::BSWord;
use crate::rootdata::CartanMatrix;
use crate::symalg::{Poly, VarSpace};
use crate::weyl::{bruhat_covers_up, word_roots, WeylElement, Word};
use crate::Result;

pub type WeylPolyTable = HashMap<WeylElement, Poly>;

/// `ξ^w(v) = Σ β_{j_1} ⋯ β_{j_m}` over subsequences of `v_word` of length
/// `l(w)` whose product is `w`.
pub fn billey(cm: &CartanMatrix, w: &WeylElement, v_word: &Word) -> Result<Poly> {
    let space = VarSpace::alpha(cm.rank());
    let betas: Vec<Poly> = word_roots(cm, v_word)?.iter().map(|b| Poly::linear(space, &b.0)).collect();
    let letters = v_word.indices();
    let target = w.length();
    let mut total = Poly::zero(space);
    // Stack of (next position, partial product, accumulated monomial).
    let mut stack = vec![(0usize, WeylElement::identity(cm), Poly::one(space))];
    while let Some((pos, cur, acc)) = stack.pop() {
        if cur.length() == target {
            if cur == *w {
                total += &acc;
            }
            continue;
        }
        if letters.len() - pos < target - cur.length() {
            continue;
        }
        let letter = letters[pos];
        stack.push((pos + 1, cur.clone(), acc.clone()));
        if !cur.is_right_descent(letter) {
            stack.push((pos + 1, cur.mul_simple(letter), &acc * &betas[pos]));
        }
    }
    Ok(total)
}

/// Billey's formula read through the Bott–Samelson pullback:
/// `Σ_{ε ∈ pullback_xi(w)} σ^T_ε(1,…,1)`.
pub fn billey_via_bs(cm: &CartanMatrix, w: &WeylElement, v_word: &Word) -> Result<Poly> {
    let bs = BSWord::new(cm, v_word)?;
    let full = crate::botttower::EpsilonMask::full(bs.len());
    let mut total = Poly::zero(bs.space());
    for eps in bs.pullback_xi(w) {
        total += &bs.sigma_t(&eps, &full)?;
    }
    Ok(total)
}

/// Memoized `(w, v) ↦ ξ^w(v)`, evaluated on the canonical reduced word of `v`.
pub struct CohRestriction {
    cm: CartanMatrix,
    memo: Mutex<HashMap<(WeylElement, WeylElement), Poly>>,
}

impl CohRestriction {
    pub fn new(cm: &CartanMatrix) -> Self {
        CohRestriction { cm: cm.clone(), memo: Mutex::new(HashMap::new()) }
    }

    pub fn get(&self, w: &WeylElement, v: &WeylElement) -> Result<Poly> {
        let key = (w.clone(), v.clone());
        if let Some(p) = self.memo.lock().unwrap().get(&key) {
            return Ok(p.clone());
        }
        let value = billey(&self.cm, w, &v.reduced_word())?;
        self.memo.lock().unwrap().insert(key, value.clone());
        Ok(value)
    }
}

/// `A_i(f)(u) = (f(u s_i) - f(u)) / u(α_i)` on every `u` of `domain`.
pub fn demazure_a(i: usize, f: &WeylPolyTable, domain: &[WeylElement]) -> Result<WeylPolyTable> {
    let mut out = WeylPolyTable::new();
    for u in domain {
        let lookup = |x: &WeylElement| {
            f.get(x).cloned().ok_or_else(|| crate::Error::MissingFixedPoint(x.to_string()))
        };
        let value = divided_difference(u, i, lookup(&u.mul_simple(i))?, lookup(u)?)?;
        out.insert(u.clone(), value);
    }
    Ok(out)
}

fn divided_difference(u: &WeylElement, i: usize, shifted: Poly, here: Poly) -> Result<Poly> {
    let root = Poly::linear(VarSpace::alpha(u.rank()), &u.image_of_simple(i).0);
    (shifted - here).divide_linear(&root)
}

/// One factor of an operator string acting on fixed-point functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operator {
    /// `A_i`.
    Divided(usize),
    /// `f ↦ f(· s_i)`.
    Right(usize),
}

/// `(op_1 ∘ ⋯ ∘ op_n)(f)(at)`, evaluating `f` only where needed.
pub fn apply_operators(
    ops: &[Operator],
    f: &dyn Fn(&WeylElement) -> Result<Poly>,
    at: &WeylElement,
) -> Result<Poly> {
    fn go(
        ops: &[Operator],
        k: usize,
        u: &WeylElement,
        f: &dyn Fn(&WeylElement) -> Result<Poly>,
        memo: &mut HashMap<(usize, WeylElement), Poly>,
    ) -> Result<Poly> {
        if k == ops.len() {
            return f(u);
        }
        if let Some(p) = memo.get(&(k, u.clone())) {
            return Ok(p.clone());
        }
        let value = match ops[k] {
            Operator::Right(i) => go(ops, k + 1, &u.mul_simple(i), f, memo)?,
            Operator::Divided(i) => {
                let shifted = go(ops, k + 1, &u.mul_simple(i), f, memo)?;
                let here = go(ops, k + 1, u, f, memo)?;
                divided_difference(u, i, shifted, here)?
            }
        };
        memo.insert((k, u.clone()), value.clone());
        Ok(value)
    }
    go(ops, 0, at, f, &mut HashMap::new())
}

/// Kostant–Kumar: sum over reduced subwords of `w_word` spelling `u` of the
/// operator string with `A_{i_j}` replaced by `s_{i_j}` on the chosen
/// positions, applied to `ξ^v` and evaluated at the identity.
pub fn kk_structconst(cm: &CartanMatrix, u: &WeylElement, v: &WeylElement, w_word: &Word) -> Result<Poly> {
    kk_structconst_with(&CohRestriction::new(cm), u, v, w_word)
}

pub fn kk_structconst_with(
    xi: &CohRestriction,
    u: &WeylElement,
    v: &WeylElement,
    w_word: &Word,
) -> Result<Poly> {
    let cm = u.cartan();
    let bs = BSWord::new(cm, w_word)?;
    let letters = w_word.indices();
    let space = VarSpace::alpha(cm.rank());
    let identity = WeylElement::identity(cm);
    let f = |x: &WeylElement| xi.get(v, x);
    let mut total = Poly::zero(space);
    for eps in bs.pullback_xi(u) {
        let ops: Vec<Operator> = letters
            .iter()
            .enumerate()
            .map(|(k, &i)| if eps.contains(k + 1) { Operator::Right(i) } else { Operator::Divided(i) })
            .collect();
        total += &apply_operators(&ops, &f, &identity)?;
    }
    Ok(total)
}

/// `ξ^{s_i} ξ^v = ξ^{s_i}(v) ξ^v + Σ_{v→w} ⟨ρ_i, β^∨(v,w)⟩ ξ^w`, nonzero entries only.
pub fn pieri_chevalley(
    cm: &CartanMatrix,
    i: usize,
    v: &WeylElement,
    bound: Option<i64>,
) -> Result<BTreeMap<WeylElement, Poly>> {
    cm.check_index(i)?;
    let space = VarSpace::alpha(cm.rank());
    let mut out = BTreeMap::new();
    let diagonal = billey(cm, &WeylElement::simple(cm, i), &v.reduced_word())?;
    if !diagonal.is_zero() {
        out.insert(v.clone(), diagonal);
    }
    for (w, _, coroot) in bruhat_covers_up(v, bound)? {
        let c = coroot.0[i - 1];
        if c != 0 {
            out.insert(w, Poly::from_int(space, c));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::{all_elements, bruhat_leq, inversion_set};

    fn cm(name: &str) -> CartanMatrix {
        CartanMatrix::from_type_name(name).unwrap()
    }

    fn el(cm: &CartanMatrix, word: &[usize]) -> WeylElement {
        WeylElement::from_word(cm, &Word(word.to_vec())).unwrap()
    }

    #[test]
    fn golden_billey() {
        let a4 = cm("A4");
        let p = billey(&a4, &el(&a4, &[3, 2]), &Word(vec![2, 3, 2, 1, 2])).unwrap();
        assert_eq!(p.to_string(), "a1*a2 + a1*a3 + a2^2 + 2*a2*a3 + a3^2");
        assert_eq!(billey_via_bs(&a4, &el(&a4, &[3, 2]), &Word(vec![2, 3, 2, 1, 2])).unwrap(), p);
        let b2 = cm("B2");
        let p = billey(&b2, &el(&b2, &[1]), &Word(vec![1, 2, 1, 2])).unwrap();
        assert_eq!(p.to_string(), "2*a1 + a2");
        assert!(billey(&b2, &el(&b2, &[]), &Word(vec![1, 2])).unwrap().is_one());
    }

    #[test]
    fn billey_support_degree_and_diagonal() {
        for name in ["A2", "B2", "G2"] {
            let c = cm(name);
            for w in all_elements(&c).unwrap() {
                for v in all_elements(&c).unwrap() {
                    let p = billey(&c, &w, &v.reduced_word()).unwrap();
                    assert_eq!(p, billey_via_bs(&c, &w, &v.reduced_word()).unwrap());
                    if !bruhat_leq(&w, &v) {
                        assert!(p.is_zero());
                        continue;
                    }
                    assert!(p.is_homogeneous());
                    assert_eq!(p.degree(), Some(w.length() as u32));
                }
                let sp = VarSpace::alpha(c.rank());
                let diag = inversion_set(&w.inverse())
                    .iter()
                    .fold(Poly::one(sp), |acc, b| &acc * &Poly::linear(sp, &b.0));
                assert_eq!(billey(&c, &w, &w.reduced_word()).unwrap(), diag);
            }
        }
    }

    #[test]
    fn divided_differences() {
        let a2 = cm("A2");
        let elements = all_elements(&a2).unwrap();
        let xi = CohRestriction::new(&a2);
        for w in &elements {
            let table: WeylPolyTable = elements.iter().map(|x| (x.clone(), xi.get(w, x).unwrap())).collect();
            for i in 1..=2 {
                let image = demazure_a(i, &table, &elements).unwrap();
                let ws = w.mul_simple(i);
                for x in &elements {
                    let expect = if ws.length() < w.length() {
                        xi.get(&ws, x).unwrap()
                    } else {
                        Poly::zero(VarSpace::alpha(2))
                    };
                    assert_eq!(image[x], expect);
                }
            }
        }
        let a1 = cm("A1");
        let all = all_elements(&a1).unwrap();
        let xi1 = CohRestriction::new(&a1);
        let table: WeylPolyTable =
            all.iter().map(|x| (x.clone(), xi1.get(&el(&a1, &[1]), x).unwrap())).collect();
        let image = demazure_a(1, &table, &all).unwrap();
        assert!(image.values().all(|p| p.is_one()));
    }

    #[test]
    fn kostant_kumar_examples() {
        let a2 = cm("A2");
        let p = kk_structconst(&a2, &el(&a2, &[2]), &el(&a2, &[1, 2]), &Word(vec![2, 1, 2])).unwrap();
        assert!(p.is_zero());
        let v = el(&a2, &[1, 2]);
        assert!(kk_structconst(&a2, &el(&a2, &[]), &v, &v.reduced_word()).unwrap().is_one());
        let b2 = cm("B2");
        let p = kk_structconst(&b2, &el(&b2, &[1, 2]), &el(&b2, &[2, 1]), &Word(vec![1, 2, 1])).unwrap();
        assert_eq!(p.to_string(), "2*a1 + a2");
    }

    #[test]
    fn pieri_at_identity() {
        let a2 = cm("A2");
        let p = pieri_chevalley(&a2, 1, &el(&a2, &[]), None).unwrap();
        assert_eq!(p.len(), 1);
        assert!(p[&el(&a2, &[1])].is_one());
        let p = pieri_chevalley(&a2, 1, &el(&a2, &[1]), None).unwrap();
        assert_eq!(p[&el(&a2, &[1])], Poly::var(VarSpace::alpha(2), 1));
    }
}
