//! Weyl-group arithmetic: words, lengths, Bruhat order, the Demazure
//! product, inversion sets and Bruhat covers.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use crate::rootdata::{CartanMatrix, CorootVector, RootVector};
use crate::{Error, Result};

/// A word in the simple reflections, 1-based, possibly non-reduced.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn new(indices: Vec<usize>) -> Self {
        Word(indices)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn validate(&self, cm: &CartanMatrix) -> Result<()> {
        self.0.iter().try_for_each(|&i| cm.check_index(i))
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).copied().collect())
    }
}

impl From<Vec<usize>> for Word {
    fn from(v: Vec<usize>) -> Self {
        Word(v)
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        let s = s.trim();
        if s.is_empty() || s == "e" {
            return Ok(Word::empty());
        }
        s.split(',')
            .map(|part| {
                let part = part.trim();
                match part.parse::<usize>() {
                    Ok(i) if i >= 1 => Ok(i),
                    _ => Err(Error::Parse(format!("bad word entry `{part}`"))),
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// A Weyl group element, stored as its action on the root lattice
/// (column `j` is the image of `α_j`) together with its action on coroots.
#[derive(Clone, Debug)]
pub struct WeylElement {
    cm: CartanMatrix,
    roots: Vec<i64>,
    coroots: Vec<i64>,
    len: usize,
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.roots == other.roots
    }
}

impl Eq for WeylElement {}

impl Hash for WeylElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.roots.hash(state);
    }
}

impl PartialOrd for WeylElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by length, then by the action matrix; deterministic but not
/// Bruhat order.
impl Ord for WeylElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| self.roots.cmp(&other.roots))
    }
}

impl WeylElement {
    pub fn identity(cm: &CartanMatrix) -> Self {
        let r = cm.rank();
        let mut id = vec![0; r * r];
        for j in 0..r {
            id[j * r + j] = 1;
        }
        WeylElement { cm: cm.clone(), roots: id.clone(), coroots: id, len: 0 }
    }

    pub fn simple(cm: &CartanMatrix, i: usize) -> Self {
        Self::identity(cm).mul_simple(i)
    }

    pub fn from_word(cm: &CartanMatrix, word: &Word) -> Result<Self> {
        word.validate(cm)?;
        Ok(word.0.iter().fold(Self::identity(cm), |w, &i| w.mul_simple(i)))
    }

    pub fn cartan(&self) -> &CartanMatrix {
        &self.cm
    }

    pub fn rank(&self) -> usize {
        self.cm.rank()
    }

    pub fn length(&self) -> usize {
        self.len
    }

    pub fn is_identity(&self) -> bool {
        self.len == 0
    }

    fn column(&self, j: usize) -> &[i64] {
        let r = self.rank();
        &self.roots[j * r..(j + 1) * r]
    }

    /// Column `j` of the root action, i.e. `w(α_j)` (1-based `j`).
    pub fn image_of_simple(&self, j: usize) -> RootVector {
        RootVector(self.column(j - 1).to_vec())
    }

    /// `i` is a right descent iff `w(α_i)` is a negative root.
    pub fn is_right_descent(&self, i: usize) -> bool {
        self.column(i - 1).iter().all(|&x| x <= 0)
    }

    /// The product `w s_i`.
    pub fn mul_simple(&self, i: usize) -> Self {
        let r = self.rank();
        let i0 = i - 1;
        let descent = self.is_right_descent(i);
        let col_i: Vec<i64> = self.roots[i0 * r..(i0 + 1) * r].to_vec();
        let co_i: Vec<i64> = self.coroots[i0 * r..(i0 + 1) * r].to_vec();
        let mut roots = self.roots.clone();
        let mut coroots = self.coroots.clone();
        for j in 0..r {
            let a = self.cm.entry(i, j + 1);
            if a != 0 {
                for k in 0..r {
                    roots[j * r + k] -= a * col_i[k];
                }
            }
            let b = self.cm.entry(j + 1, i);
            if b != 0 {
                for k in 0..r {
                    coroots[j * r + k] -= b * co_i[k];
                }
            }
        }
        // saturating: elements built by `with_computed_length` start at 0
        let len = if descent { self.len.saturating_sub(1) } else { self.len + 1 };
        WeylElement { cm: self.cm.clone(), roots, coroots, len }
    }

    /// The product `s_i w`.
    pub fn left_mul_simple(&self, i: usize) -> Self {
        let r = self.rank();
        let mut roots = self.roots.clone();
        let mut coroots = self.coroots.clone();
        for j in 0..r {
            self.cm.reflect_root(i - 1, &mut roots[j * r..(j + 1) * r]);
            self.cm.reflect_coroot(i - 1, &mut coroots[j * r..(j + 1) * r]);
        }
        WeylElement { cm: self.cm.clone(), roots, coroots, len: 0 }.with_computed_length()
    }

    fn with_computed_length(mut self) -> Self {
        self.len = self.reduced_word().len();
        self
    }

    pub fn mul(&self, other: &WeylElement) -> Self {
        other.reduced_word().0.iter().fold(self.clone(), |w, &i| w.mul_simple(i))
    }

    pub fn inverse(&self) -> Self {
        self.reduced_word().0.iter().rev().fold(Self::identity(&self.cm), |w, &i| w.mul_simple(i))
    }

    pub fn apply(&self, beta: &RootVector) -> Result<RootVector> {
        let r = self.rank();
        if beta.0.len() != r {
            return Err(Error::RankMismatch { expected: r, found: beta.0.len() });
        }
        Ok(RootVector(apply_columns(&self.roots, r, &beta.0)))
    }

    pub fn apply_coroot(&self, h: &CorootVector) -> Result<CorootVector> {
        let r = self.rank();
        if h.0.len() != r {
            return Err(Error::RankMismatch { expected: r, found: h.0.len() });
        }
        Ok(CorootVector(apply_columns(&self.coroots, r, &h.0)))
    }

    /// Greedy reduction by the smallest right descent at each step.
    pub fn reduced_word(&self) -> Word {
        let mut word = Vec::with_capacity(self.len);
        let mut w = self.clone();
        while let Some(i) = (1..=w.rank()).find(|&i| w.is_right_descent(i)) {
            word.push(i);
            w = w.mul_simple(i);
        }
        word.reverse();
        Word(word)
    }

    pub fn right_descents(&self) -> Vec<usize> {
        (1..=self.rank()).filter(|&i| self.is_right_descent(i)).collect()
    }

    /// Every reduced word, in lexicographic order.
    pub fn reduced_words(&self) -> Vec<Word> {
        fn go(w: &WeylElement, memo: &mut HashMap<WeylElement, Vec<Vec<usize>>>) -> Vec<Vec<usize>> {
            if w.is_identity() {
                return vec![Vec::new()];
            }
            if let Some(v) = memo.get(w) {
                return v.clone();
            }
            let mut out = Vec::new();
            for i in w.right_descents() {
                for mut prefix in go(&w.mul_simple(i), memo) {
                    prefix.push(i);
                    out.push(prefix);
                }
            }
            memo.insert(w.clone(), out.clone());
            out
        }
        let mut words: Vec<Word> = go(self, &mut HashMap::new()).into_iter().map(Word).collect();
        words.sort();
        words
    }

    /// Reflection `s_β` given a real root and its coroot.
    pub fn reflection(cm: &CartanMatrix, beta: &RootVector, coroot: &CorootVector) -> Self {
        let r = cm.rank();
        let mut roots = vec![0; r * r];
        let mut coroots = vec![0; r * r];
        for j in 0..r {
            let mut e = vec![0; r];
            e[j] = 1;
            let p = cm.pairing_unchecked(&e, &coroot.0);
            let q = cm.pairing_unchecked(&beta.0, &e);
            for k in 0..r {
                roots[j * r + k] = e[k] - p * beta.0[k];
                coroots[j * r + k] = e[k] - q * coroot.0[k];
            }
        }
        WeylElement { cm: cm.clone(), roots, coroots, len: 0 }.with_computed_length()
    }
}

fn apply_columns(mat: &[i64], r: usize, v: &[i64]) -> Vec<i64> {
    let mut out = vec![0; r];
    for (j, &x) in v.iter().enumerate() {
        if x != 0 {
            for k in 0..r {
                out[k] += x * mat[j * r + k];
            }
        }
    }
    out
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "1");
        }
        for i in self.reduced_word().0 {
            write!(f, "s{i}")?;
        }
        Ok(())
    }
}

/// Bruhat order by the descent criterion: for a right descent `s` of `v`,
/// `u ≤ v` iff `us ≤ vs` (when `us < u`) or `u ≤ vs` (otherwise).
pub fn bruhat_leq(u: &WeylElement, v: &WeylElement) -> bool {
    let mut u = u.clone();
    let mut v = v.clone();
    loop {
        if u.length() > v.length() {
            return false;
        }
        if v.is_identity() {
            return u.is_identity();
        }
        let i = (1..=v.rank()).find(|&i| v.is_right_descent(i)).unwrap();
        if u.is_right_descent(i) {
            u = u.mul_simple(i);
        }
        v = v.mul_simple(i);
    }
}

/// The element whose monoid image is `s̲_{i_1} ⋯ s̲_{i_N}`.
pub fn demazure_product(cm: &CartanMatrix, word: &Word) -> Result<WeylElement> {
    word.validate(cm)?;
    Ok(word.0.iter().fold(WeylElement::identity(cm), |w, &i| demazure_step(&w, i)))
}

pub(crate) fn demazure_step(w: &WeylElement, i: usize) -> WeylElement {
    if w.is_right_descent(i) {
        w.clone()
    } else {
        w.mul_simple(i)
    }
}

/// `β_j = s_{i_1} ⋯ s_{i_{j-1}} α_{i_j}` for every position of the word.
pub fn word_roots(cm: &CartanMatrix, word: &Word) -> Result<Vec<RootVector>> {
    word.validate(cm)?;
    let mut prefix = WeylElement::identity(cm);
    let mut out = Vec::with_capacity(word.len());
    for &i in &word.0 {
        out.push(prefix.image_of_simple(i));
        prefix = prefix.mul_simple(i);
    }
    Ok(out)
}

/// `Δ(w) = { β > 0 : wβ < 0 }`, read off the reduced word of `w^{-1}`.
pub fn inversion_set(w: &WeylElement) -> Vec<RootVector> {
    word_roots(w.cartan(), &w.reduced_word().reversed()).expect("valid reduced word")
}

/// Covers `v → w = v s_β` with `l(w) = l(v) + 1`. Without a height bound
/// the Cartan matrix must be of finite type.
pub fn bruhat_covers_up(
    v: &WeylElement,
    bound: Option<i64>,
) -> Result<Vec<(WeylElement, RootVector, CorootVector)>> {
    let cm = v.cartan();
    let roots = match bound {
        None => cm.positive_roots()?,
        Some(h) => cm.positive_roots_up_to_height(h),
    };
    let mut out = Vec::new();
    for (beta, coroot) in roots {
        let w = v.mul(&WeylElement::reflection(cm, &beta, &coroot));
        if w.length() == v.length() + 1 {
            out.push((w, beta, coroot));
        }
    }
    out.sort_by_cached_key(|a| a.0.reduced_word());
    Ok(out)
}

/// All elements of a finite Weyl group, ordered by length then reduced word.
pub fn all_elements(cm: &CartanMatrix) -> Result<Vec<WeylElement>> {
    let top = cm.positive_roots()?.len();
    Ok(elements_up_to_length(cm, top))
}

/// All elements of length at most `max_len` (valid for any GCM).
pub fn elements_up_to_length(cm: &CartanMatrix, max_len: usize) -> Vec<WeylElement> {
    let mut seen: HashSet<WeylElement> = HashSet::new();
    let id = WeylElement::identity(cm);
    seen.insert(id.clone());
    let mut layer = vec![id];
    let mut out = layer.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for i in 1..=cm.rank() {
                if !w.is_right_descent(i) {
                    let x = w.mul_simple(i);
                    if seen.insert(x.clone()) {
                        next.push(x);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    let mut keyed: Vec<(usize, Word, WeylElement)> =
        out.into_iter().map(|w| (w.length(), w.reduced_word(), w)).collect();
    keyed.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    keyed.into_iter().map(|(_, _, w)| w).collect()
}

pub fn longest_element(cm: &CartanMatrix) -> Result<WeylElement> {
    let top = cm.positive_roots()?.len();
    let mut w = WeylElement::identity(cm);
    while w.length() < top {
        let i = (1..=cm.rank()).find(|&i| !w.is_right_descent(i)).unwrap();
        w = w.mul_simple(i);
    }
    Ok(w)
}

/// Order of `s_i s_j`, or `None` when it exceeds 6 (infinite for a GCM).
pub fn coxeter_order(cm: &CartanMatrix, i: usize, j: usize) -> Option<usize> {
    let st = WeylElement::simple(cm, i).mul_simple(j);
    let mut power = st.clone();
    for m in 1..=6 {
        if power.is_identity() {
            return Some(m);
        }
        power = power.mul(&st);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cm(name: &str) -> CartanMatrix {
        CartanMatrix::from_type_name(name).unwrap()
    }

    fn w(cm: &CartanMatrix, word: &[usize]) -> WeylElement {
        WeylElement::from_word(cm, &Word(word.to_vec())).unwrap()
    }

    #[test]
    fn actions() {
        let a2 = cm("A2");
        assert_eq!(w(&a2, &[1]).apply(&RootVector(vec![0, 1])).unwrap(), RootVector(vec![1, 1]));
        assert_eq!(w(&a2, &[2]).apply(&RootVector(vec![0, 1])).unwrap(), RootVector(vec![0, -1]));
        assert_eq!(
            w(&a2, &[1, 2, 1]).apply(&RootVector(vec![1, 0])).unwrap(),
            RootVector(vec![0, -1])
        );
        assert_eq!(
            w(&a2, &[1]).apply_coroot(&CorootVector(vec![0, 1])).unwrap(),
            CorootVector(vec![1, 1])
        );
        assert_eq!(
            w(&a2, &[1]).apply_coroot(&CorootVector(vec![1, 0])).unwrap(),
            CorootVector(vec![-1, 0])
        );
        let b2 = cm("B2");
        assert_eq!(
            w(&b2, &[2]).apply_coroot(&CorootVector(vec![1, 0])).unwrap(),
            CorootVector(vec![1, 2])
        );
    }

    #[test]
    fn lengths_and_words() {
        let a2 = cm("A2");
        assert_eq!(w(&a2, &[1, 2, 1]).length(), 3);
        assert!(w(&a2, &[1, 1]).is_identity());
        assert_eq!(w(&a2, &[2, 1, 2]).reduced_word(), Word(vec![1, 2, 1]));
        assert_eq!(w(&a2, &[2, 1, 2]).reduced_words().len(), 2);
        assert_eq!(longest_element(&cm("A3")).unwrap().reduced_words().len(), 16);
    }

    #[test]
    fn bruhat_examples() {
        let a2 = cm("A2");
        assert!(bruhat_leq(&w(&a2, &[]), &w(&a2, &[2, 1])));
        assert!(bruhat_leq(&w(&a2, &[1]), &w(&a2, &[2, 1])));
        assert!(!bruhat_leq(&w(&a2, &[1, 2]), &w(&a2, &[2, 1])));
    }

    #[test]
    fn demazure_examples() {
        let a2 = cm("A2");
        assert_eq!(demazure_product(&a2, &Word(vec![1, 1])).unwrap(), w(&a2, &[1]));
        assert_eq!(demazure_product(&a2, &Word(vec![1, 2, 1, 2])).unwrap(), w(&a2, &[1, 2, 1]));
        assert!(demazure_product(&a2, &Word::empty()).unwrap().is_identity());
    }

    #[test]
    fn inversion_examples() {
        let a2 = cm("A2");
        assert!(inversion_set(&w(&a2, &[])).is_empty());
        assert_eq!(inversion_set(&w(&a2, &[2])), vec![RootVector(vec![0, 1])]);
        let mut inv = inversion_set(&w(&a2, &[1, 2]));
        inv.sort();
        assert_eq!(inv, vec![RootVector(vec![0, 1]), RootVector(vec![1, 1])]);
        for x in all_elements(&cm("B3")).unwrap() {
            let inv = inversion_set(&x);
            assert_eq!(inv.len(), x.length());
            for beta in inv {
                assert!(beta.is_positive());
                assert!(x.apply(&beta).unwrap().is_negative());
            }
        }
    }

    #[test]
    fn cover_examples() {
        let a2 = cm("A2");
        let covers = bruhat_covers_up(&w(&a2, &[]), None).unwrap();
        let got: Vec<_> = covers.iter().map(|(x, b, h)| (x.reduced_word(), b.clone(), h.clone())).collect();
        assert_eq!(
            got,
            vec![
                (Word(vec![1]), RootVector(vec![1, 0]), CorootVector(vec![1, 0])),
                (Word(vec![2]), RootVector(vec![0, 1]), CorootVector(vec![0, 1])),
            ]
        );
        let covers = bruhat_covers_up(&w(&a2, &[1, 2]), None).unwrap();
        assert_eq!(covers.len(), 1);
        assert_eq!(covers[0].0, w(&a2, &[1, 2, 1]));
        assert!(bruhat_covers_up(&w(&cm("A1"), &[1]), None).unwrap().is_empty());
    }

    #[test]
    fn group_orders() {
        for (name, order) in [("A1", 2), ("A2", 6), ("B2", 8), ("G2", 12), ("A3", 24), ("B3", 48), ("F4", 1152)] {
            assert_eq!(all_elements(&cm(name)).unwrap().len(), order, "{name}");
        }
        assert_eq!(coxeter_order(&cm("G2"), 1, 2), Some(6));
        assert_eq!(coxeter_order(&cm("B2"), 1, 2), Some(4));
        assert_eq!(coxeter_order(&cm("A1xA1"), 1, 2), Some(2));
        let affine = CartanMatrix::new(vec![vec![2, -2], vec![-2, 2]]).unwrap();
        assert_eq!(coxeter_order(&affine, 1, 2), None);
    }

    #[test]
    fn word_parsing() {
        assert_eq!("1,2,1".parse::<Word>().unwrap(), Word(vec![1, 2, 1]));
        assert_eq!("".parse::<Word>().unwrap(), Word::empty());
        assert!("1,0".parse::<Word>().is_err());
        assert_eq!(Word(vec![3, 2]).to_string(), "3,2");
    }
}
