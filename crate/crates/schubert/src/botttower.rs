//! Bott towers: masks, chain coefficients, fixed-point weights, the
//! restriction bases in cohomology and K-theory, products, and the
//! localization sums used as oracles.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Deserialize;

use crate::symalg::{Char, CharFraction, Poly, PolyFraction, VarSpace};
use crate::{Error, Result};

/// An element of `{0,1}^N`; position `i` (1-based) is bit `i - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EpsilonMask {
    bits: u64,
    len: usize,
}

pub const MAX_MASK_LEN: usize = 63;

impl EpsilonMask {
    pub fn from_bits(len: usize, bits: u64) -> Self {
        assert!(len <= MAX_MASK_LEN, "mask length {len} too large");
        assert!(bits >> len == 0, "bits beyond mask length");
        EpsilonMask { bits, len }
    }

    pub fn empty(len: usize) -> Self {
        Self::from_bits(len, 0)
    }

    pub fn full(len: usize) -> Self {
        Self::from_bits(len, (1u64 << len) - 1)
    }

    /// The mask `(i)` with a single one at position `i`.
    pub fn unit(len: usize, i: usize) -> Self {
        Self::empty(len).with(i)
    }

    pub fn from_positions(len: usize, positions: &[usize]) -> Self {
        positions.iter().fold(Self::empty(len), |m, &i| m.with(i))
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    /// `l(ε)`, the number of ones.
    pub fn ones(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Whether `i ∈ π_+(ε)`.
    pub fn contains(&self, i: usize) -> bool {
        self.bits >> (i - 1) & 1 == 1
    }

    pub fn with(&self, i: usize) -> Self {
        assert!(i >= 1 && i <= self.len, "mask position {i} out of range");
        EpsilonMask { bits: self.bits | 1 << (i - 1), len: self.len }
    }

    pub fn without(&self, i: usize) -> Self {
        EpsilonMask { bits: self.bits & !(1 << (i - 1)), len: self.len }
    }

    /// Group addition in `(Z/2)^N`.
    pub fn add(&self, other: &EpsilonMask) -> Self {
        EpsilonMask { bits: self.bits ^ other.bits, len: self.len }
    }

    /// `π_+(ε)`, increasing.
    pub fn positions(&self) -> Vec<usize> {
        (1..=self.len).filter(|&i| self.contains(i)).collect()
    }

    /// Largest position in `π_+(ε)`.
    pub fn top(&self) -> Option<usize> {
        (self.bits != 0).then(|| 64 - self.bits.leading_zeros() as usize)
    }

    /// `ε ≤ ε'` iff `π_+(ε) ⊂ π_+(ε')`.
    pub fn leq(&self, other: &EpsilonMask) -> bool {
        self.bits & !other.bits == 0
    }

    /// All masks below `self`, in basis order.
    pub fn submasks(&self) -> Vec<EpsilonMask> {
        let mut out = Vec::with_capacity(1 << self.ones());
        let mut sub = self.bits;
        loop {
            out.push(EpsilonMask { bits: sub, len: self.len });
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & self.bits;
        }
        out.sort();
        out
    }

    /// All `2^len` masks in basis order.
    pub fn all(len: usize) -> Vec<EpsilonMask> {
        Self::full(len).submasks()
    }
}

/// Basis order: by `l(ε)`, then lexicographically on the bit string.
impl Ord for EpsilonMask {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len
            .cmp(&other.len)
            .then_with(|| self.ones().cmp(&other.ones()))
            .then_with(|| self.bits.reverse_bits().cmp(&other.bits.reverse_bits()))
    }
}

impl PartialOrd for EpsilonMask {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for EpsilonMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.len {
            write!(f, "{}", if self.contains(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl FromStr for EpsilonMask {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.len() > MAX_MASK_LEN {
            return Err(Error::Parse(format!("mask `{s}` is too long")));
        }
        let mut bits = 0u64;
        for (k, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => bits |= 1 << k,
                _ => return Err(Error::Parse(format!("bad mask `{s}`"))),
            }
        }
        Ok(EpsilonMask { bits, len: s.len() })
    }
}

pub type PolyTable = BTreeMap<EpsilonMask, Poly>;
pub type CharTable = BTreeMap<EpsilonMask, Char>;

/// The integer list `C = {c_{i,j}}` of a Bott tower of height `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BottTowerSpec {
    n: usize,
    c: BTreeMap<(usize, usize), i64>,
}

#[derive(Deserialize)]
struct BottJson {
    #[serde(rename = "N")]
    n: usize,
    c: Vec<(usize, usize, i64)>,
}

impl BottTowerSpec {
    pub fn new(n: usize) -> Self {
        assert!(n <= MAX_MASK_LEN, "tower height {n} too large");
        BottTowerSpec { n, c: BTreeMap::new() }
    }

    pub fn from_entries(n: usize, entries: &[(usize, usize, i64)]) -> Result<Self> {
        let mut spec = Self::new(n);
        for &(i, j, v) in entries {
            spec.set(i, j, v)?;
        }
        Ok(spec)
    }

    /// Reads `{"N": n, "c": [[i, j, value], ...]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let parsed: BottJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if parsed.n == 0 || parsed.n > MAX_MASK_LEN {
            return Err(Error::Domain(format!("tower height {} out of range", parsed.n)));
        }
        Self::from_entries(parsed.n, &parsed.c)
    }

    pub fn set(&mut self, i: usize, j: usize, value: i64) -> Result<()> {
        if !(1 <= i && i < j && j <= self.n) {
            return Err(Error::Domain(format!("list index ({i},{j}) outside 1 ≤ i < j ≤ {}", self.n)));
        }
        if value == 0 {
            self.c.remove(&(i, j));
        } else {
            self.c.insert((i, j), value);
        }
        Ok(())
    }

    pub fn height(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.c.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn space(&self) -> VarSpace {
        VarSpace::lambda(self.n)
    }

    fn check_mask(&self, eps: &EpsilonMask) -> Result<()> {
        if eps.len() == self.n {
            Ok(())
        } else {
            Err(Error::MaskLength { expected: self.n, found: eps.len() })
        }
    }

    /// `c_{k,j}(ε)` for every `j > k`, by dynamic programming over chains
    /// whose intermediate indices lie in `π_+(ε)`.
    fn chains_from(&self, eps: &EpsilonMask, k: usize) -> Vec<i64> {
        let mut f = vec![0i64; self.n + 1];
        f[k] = 1;
        for j in k + 1..=self.n {
            f[j] = (k..j)
                .filter(|&p| p == k || eps.contains(p))
                .map(|p| -f[p] * self.get(p, j))
                .sum();
        }
        f[k] = 0;
        f
    }

    /// Coefficient vectors of `λ_1(ε), …, λ_N(ε)` in the basis `λ_1..λ_N`.
    pub fn lambda_coeffs(&self, eps: &EpsilonMask) -> Vec<Vec<i64>> {
        let n = self.n;
        let mut weights: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v
            })
            .collect();
        for j in eps.positions() {
            let chains = self.chains_from(eps, j);
            for i in j + 1..=n {
                weights[i - 1][j - 1] = chains[i];
            }
        }
        for i in 1..=n {
            if !eps.contains(i) {
                weights[i - 1].iter_mut().for_each(|x| *x = -*x);
            }
        }
        weights
    }
}

/// `c_{k,l}(ε) = Σ (-1)^m c_{i_0,i_1} ⋯ c_{i_{m-1},i_m}` over chains
/// `k = i_0 < ⋯ < i_m = l` with intermediate indices in `π_+(ε)`.
pub fn chain_coeff(spec: &BottTowerSpec, eps: &EpsilonMask, k: usize, l: usize) -> Result<i64> {
    spec.check_mask(eps)?;
    if !(1 <= k && k < l && l <= spec.n) {
        return Err(Error::Domain(format!("chain ({k},{l}) outside 1 ≤ k < l ≤ {}", spec.n)));
    }
    Ok(spec.chains_from(eps, k)[l])
}

/// `λ_i(ε) = (-1)^{ε_i+1}(λ_i + Σ_{j<i, j∈π_+(ε)} c_{j,i}(ε) λ_j)`.
pub fn lambda_weight(spec: &BottTowerSpec, eps: &EpsilonMask, i: usize) -> Result<Poly> {
    spec.check_mask(eps)?;
    if i < 1 || i > spec.n {
        return Err(Error::IndexOutOfRange { index: i, rank: spec.n });
    }
    Ok(Poly::linear(spec.space(), &spec.lambda_coeffs(eps)[i - 1]))
}

pub fn sigma_d(spec: &BottTowerSpec, eps: &EpsilonMask, at: &EpsilonMask) -> Result<Poly> {
    spec.check_mask(eps)?;
    spec.check_mask(at)?;
    let space = spec.space();
    if !eps.leq(at) {
        return Ok(Poly::zero(space));
    }
    let weights = spec.lambda_coeffs(at);
    Ok(eps
        .positions()
        .iter()
        .fold(Poly::one(space), |acc, &i| &acc * &Poly::linear(space, &weights[i - 1])))
}

pub fn mu_d(spec: &BottTowerSpec, eps: &EpsilonMask, at: &EpsilonMask) -> Result<Char> {
    spec.check_mask(eps)?;
    spec.check_mask(at)?;
    let space = spec.space();
    if !eps.leq(at) {
        return Ok(Char::zero(space));
    }
    let weights = spec.lambda_coeffs(at);
    let mut shift = vec![0i64; spec.n];
    for i in at.positions() {
        for (s, w) in shift.iter_mut().zip(&weights[i - 1]) {
            *s -= w;
        }
    }
    let mut out = Char::exp(space, &shift);
    for i in eps.positions() {
        out = &out * &(Char::exp(space, &weights[i - 1]) - Char::one(space));
    }
    Ok(out)
}

pub fn sigma_table(spec: &BottTowerSpec, eps: &EpsilonMask) -> Result<PolyTable> {
    EpsilonMask::all(spec.n).into_iter().map(|at| Ok((at, sigma_d(spec, eps, &at)?))).collect()
}

pub fn mu_table(spec: &BottTowerSpec, eps: &EpsilonMask) -> Result<CharTable> {
    EpsilonMask::all(spec.n).into_iter().map(|at| Ok((at, mu_d(spec, eps, &at)?))).collect()
}

/// `Σ_{a ≤ ε} f(a) / Π_{i∈π_+(ε)} w_i(a)` computed one fibre at a time from the
/// top position down. Needs `w_i(a)` to depend only on positions `≤ i` of `a` and
/// to change sign when position `i` flips; returns `None` when that fails or a
/// fibre quotient is not exact.
pub(crate) fn fibre_integral(
    eps: &EpsilonMask,
    value: impl Fn(&EpsilonMask) -> Result<Poly>,
    weights: impl Fn(&EpsilonMask) -> Result<Vec<Vec<i64>>>,
    space: VarSpace,
) -> Result<Option<Poly>> {
    fibre_sum(eps, value, weights, |here, there, w| {
        (here - there).divide_linear(&Poly::linear(space, w)).ok()
    })
}

/// The K-theory analogue of [`fibre_integral`] for `Π (1 - e^{-w_i(a)})`.
pub(crate) fn fibre_euler(
    eps: &EpsilonMask,
    value: impl Fn(&EpsilonMask) -> Result<Char>,
    weights: impl Fn(&EpsilonMask) -> Result<Vec<Vec<i64>>>,
    space: VarSpace,
) -> Result<Option<Char>> {
    fibre_sum(eps, value, weights, |here, there, w| {
        let neg: Vec<i64> = w.iter().map(|x| -x).collect();
        (here - &(there * &Char::exp(space, &neg))).divide_one_minus_exp_neg(w).ok()
    })
}

fn fibre_sum<T: Clone>(
    eps: &EpsilonMask,
    value: impl Fn(&EpsilonMask) -> Result<T>,
    weights: impl Fn(&EpsilonMask) -> Result<Vec<Vec<i64>>>,
    combine: impl Fn(&T, &T, &[i64]) -> Option<T>,
) -> Result<Option<T>> {
    let points = eps.submasks();
    let mut current: BTreeMap<EpsilonMask, T> = BTreeMap::new();
    let mut cached: BTreeMap<EpsilonMask, Vec<Vec<i64>>> = BTreeMap::new();
    for at in &points {
        current.insert(*at, value(at)?);
        cached.insert(*at, weights(at)?);
    }
    for p in eps.positions().into_iter().rev() {
        let mut next = BTreeMap::new();
        for (at, here) in &current {
            if at.contains(p) {
                continue;
            }
            let flipped = at.with(p);
            let w = &cached[at][p - 1];
            if cached[&flipped][p - 1].iter().zip(w).any(|(a, b)| *a != -b) {
                return Ok(None);
            }
            match combine(here, &current[&flipped], w) {
                Some(t) => next.insert(*at, t),
                None => return Ok(None),
            };
        }
        current = next;
    }
    Ok(current.into_values().next())
}

/// `Σ_{ε' ≤ ε} f(ε') / Π_{i∈π_+(ε)} λ_i(ε')`, which must be a polynomial.
pub fn integrate(spec: &BottTowerSpec, table: &PolyTable, eps: &EpsilonMask) -> Result<Poly> {
    spec.check_mask(eps)?;
    let space = spec.space();
    let lookup = |at: &EpsilonMask| table.get(at).cloned().ok_or_else(|| Error::MissingFixedPoint(at.to_string()));
    if let Some(p) = fibre_integral(eps, lookup, |at| Ok(spec.lambda_coeffs(at)), space)? {
        return Ok(p);
    }
    integrate_by_fractions(spec, table, eps)
}

/// [`integrate`] as one sum of fractions over all fixed points.
pub(crate) fn integrate_by_fractions(spec: &BottTowerSpec, table: &PolyTable, eps: &EpsilonMask) -> Result<Poly> {
    let space = spec.space();
    let mut total = PolyFraction::zero(space);
    for at in eps.submasks() {
        let value = table.get(&at).ok_or_else(|| Error::MissingFixedPoint(at.to_string()))?;
        if value.is_zero() {
            continue;
        }
        let weights = spec.lambda_coeffs(&at);
        let mut term = PolyFraction::new(value.clone());
        for i in eps.positions() {
            term.divide_by(&Poly::linear(space, &weights[i - 1]))?;
        }
        total = total.try_add(&term)?;
    }
    total.finalize()
}

/// `Σ_{ε' ≤ ε} f(ε') / Π_{i∈π_+(ε)} (1 - e^{-λ_i(ε')})`.
pub fn euler_char(spec: &BottTowerSpec, table: &CharTable, eps: &EpsilonMask) -> Result<Char> {
    spec.check_mask(eps)?;
    let space = spec.space();
    let lookup = |at: &EpsilonMask| table.get(at).cloned().ok_or_else(|| Error::MissingFixedPoint(at.to_string()));
    if let Some(c) = fibre_euler(eps, lookup, |at| Ok(spec.lambda_coeffs(at)), space)? {
        return Ok(c);
    }
    euler_char_by_fractions(spec, table, eps)
}

/// [`euler_char`] as one sum of fractions over all fixed points.
pub(crate) fn euler_char_by_fractions(spec: &BottTowerSpec, table: &CharTable, eps: &EpsilonMask) -> Result<Char> {
    let space = spec.space();
    let mut total = CharFraction::zero(space);
    for at in eps.submasks() {
        let value = table.get(&at).ok_or_else(|| Error::MissingFixedPoint(at.to_string()))?;
        if value.is_zero() {
            continue;
        }
        let weights = spec.lambda_coeffs(&at);
        let factors: Vec<Vec<i64>> = eps.positions().iter().map(|&i| weights[i - 1].clone()).collect();
        total = total.try_add(&CharFraction::with_factors(value.clone(), &factors)?)?;
    }
    total.finalize()
}

/// Solves `target(ε') = Σ_{ε ≤ ε'} c_ε basis(ε, ε')` for the `c_ε`, going
/// up in basis order; `diagonal(ε)` lists the linear factors of
/// `basis(ε, ε)`.
pub fn expand_in_basis(
    masks: &[EpsilonMask],
    basis: impl Fn(&EpsilonMask, &EpsilonMask) -> Result<Poly>,
    diagonal: impl Fn(&EpsilonMask) -> Result<Vec<Poly>>,
    target: impl Fn(&EpsilonMask) -> Result<Poly>,
) -> Result<PolyTable> {
    let mut order = masks.to_vec();
    order.sort();
    let mut coeffs = PolyTable::new();
    for at in &order {
        let mut residual = target(at)?;
        for (eps, c) in &coeffs {
            if eps.leq(at) {
                residual -= &(c * &basis(eps, at)?);
            }
        }
        if residual.is_zero() {
            continue;
        }
        for factor in diagonal(at)? {
            residual = residual.divide_linear(&factor)?;
        }
        coeffs.insert(*at, residual);
    }
    Ok(coeffs)
}

/// Coefficients of `σ̂_{ε1} σ̂_{ε2}` in the `σ̂` basis, by triangular
/// solve against the restriction matrix.
pub fn hd_product(spec: &BottTowerSpec, eps1: &EpsilonMask, eps2: &EpsilonMask) -> Result<PolyTable> {
    spec.check_mask(eps1)?;
    spec.check_mask(eps2)?;
    let space = spec.space();
    expand_in_basis(
        &EpsilonMask::all(spec.n),
        |e, at| sigma_d(spec, e, at),
        |at| {
            let w = spec.lambda_coeffs(at);
            Ok(at.positions().iter().map(|&i| Poly::linear(space, &w[i - 1])).collect())
        },
        |at| Ok(&sigma_d(spec, eps1, at)? * &sigma_d(spec, eps2, at)?),
    )
}

/// `σ̂_i σ̂_ε` by the multiplication rule: `σ̂_{ε+(i)}` when `i ∉ π_+(ε)`,
/// otherwise `λ_i(ε) σ̂_ε + Σ_{j<i, j∉π_+(ε)} c_{j,i}(ε) σ̂_{ε+(j)}`.
pub fn generator_product(spec: &BottTowerSpec, i: usize, eps: &EpsilonMask) -> Result<PolyTable> {
    spec.check_mask(eps)?;
    let space = spec.space();
    let mut out = PolyTable::new();
    if !eps.contains(i) {
        out.insert(eps.with(i), Poly::one(space));
        return Ok(out);
    }
    out.insert(*eps, lambda_weight(spec, eps, i)?);
    for j in (1..i).filter(|&j| !eps.contains(j)) {
        let c = chain_coeff(spec, eps, j, i)?;
        if c != 0 {
            out.insert(eps.with(j), Poly::from_int(space, c));
        }
    }
    Ok(out)
}

/// `σ̂_{ε1} σ̂_{ε2}` by iterating [`generator_product`] over `π_+(ε1)`.
pub fn product_by_rules(spec: &BottTowerSpec, eps1: &EpsilonMask, eps2: &EpsilonMask) -> Result<PolyTable> {
    let space = spec.space();
    let mut current = PolyTable::from([(*eps2, Poly::one(space))]);
    for i in eps1.positions() {
        let mut next = PolyTable::new();
        for (eps, c) in &current {
            for (target, d) in generator_product(spec, i, eps)? {
                let entry = next.entry(target).or_insert_with(|| Poly::zero(space));
                *entry += &(c * &d);
            }
        }
        next.retain(|_, p| !p.is_zero());
        current = next;
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> EpsilonMask {
        s.parse().unwrap()
    }

    fn a2_list() -> BottTowerSpec {
        BottTowerSpec::from_entries(3, &[(1, 2, -1), (1, 3, 2), (2, 3, -1)]).unwrap()
    }

    fn hirzebruch() -> BottTowerSpec {
        BottTowerSpec::from_entries(2, &[(1, 2, -1)]).unwrap()
    }

    fn l(n: usize, i: usize) -> Poly {
        Poly::var(VarSpace::lambda(n), i)
    }

    #[test]
    fn mask_basics() {
        let e = m("101");
        assert_eq!(e.to_string(), "101");
        assert_eq!(e.positions(), vec![1, 3]);
        assert_eq!(e.top(), Some(3));
        assert!(m("100").leq(&e) && !m("010").leq(&e));
        let order: Vec<String> = EpsilonMask::all(2).iter().map(|x| x.to_string()).collect();
        assert_eq!(order, ["00", "01", "10", "11"]);
    }

    #[test]
    fn chain_coefficients() {
        let spec = a2_list();
        assert_eq!(chain_coeff(&spec, &m("111"), 1, 3).unwrap(), -1);
        assert_eq!(chain_coeff(&spec, &m("101"), 1, 3).unwrap(), -2);
        for e in EpsilonMask::all(3) {
            assert_eq!(chain_coeff(&spec, &e, 1, 2).unwrap(), 1);
            assert_eq!(chain_coeff(&spec, &e, 2, 3).unwrap(), 1);
        }
    }

    #[test]
    fn weights() {
        let spec = a2_list();
        assert_eq!(lambda_weight(&spec, &m("111"), 3).unwrap(), l(3, 3) - l(3, 1) + l(3, 2));
        assert_eq!(lambda_weight(&spec, &m("001"), 3).unwrap(), l(3, 3));
        assert_eq!(lambda_weight(&hirzebruch(), &m("11"), 2).unwrap(), l(2, 2) + l(2, 1));
        let one = BottTowerSpec::new(1);
        assert_eq!(lambda_weight(&one, &m("0"), 1).unwrap(), -l(1, 1));
        assert_eq!(lambda_weight(&one, &m("1"), 1).unwrap(), l(1, 1));
    }

    #[test]
    fn sigma_values() {
        let spec = hirzebruch();
        for at in EpsilonMask::all(2) {
            assert!(sigma_d(&spec, &m("00"), &at).unwrap().is_one());
        }
        assert_eq!(sigma_d(&spec, &m("01"), &m("11")).unwrap(), l(2, 1) + l(2, 2));
        assert!(sigma_d(&spec, &m("01"), &m("10")).unwrap().is_zero());
    }

    #[test]
    fn hirzebruch_k_matrix() {
        let spec = hirzebruch();
        let sp = spec.space();
        let e = |mu: &[i64]| Char::exp(sp, mu);
        let one = Char::one(sp);
        let cols = [m("00"), m("10"), m("01"), m("11")];
        let expected = [
            [one.clone(), e(&[-1, 0]), e(&[0, -1]), e(&[-2, -1])],
            [Char::zero(sp), &one - &e(&[-1, 0]), Char::zero(sp), &e(&[-1, -1]) * &(&one - &e(&[-1, 0]))],
            [Char::zero(sp), Char::zero(sp), &one - &e(&[0, -1]), &e(&[-1, 0]) * &(&one - &e(&[-1, -1]))],
            [
                Char::zero(sp),
                Char::zero(sp),
                Char::zero(sp),
                &(&one - &e(&[-1, 0])) * &(&one - &e(&[-1, -1])),
            ],
        ];
        for (row, eps) in cols.iter().enumerate() {
            for (col, at) in cols.iter().enumerate() {
                assert_eq!(mu_d(&spec, eps, at).unwrap(), expected[row][col], "row {row} col {col}");
            }
        }
    }

    #[test]
    fn localization_deltas() {
        let spec = a2_list();
        for eps in EpsilonMask::all(3) {
            let table = sigma_table(&spec, &eps).unwrap();
            let ktable = mu_table(&spec, &eps).unwrap();
            for target in EpsilonMask::all(3) {
                let expect = if eps == target { 1 } else { 0 };
                assert_eq!(integrate(&spec, &table, &target).unwrap(), Poly::from_int(spec.space(), expect));
                assert_eq!(euler_char(&spec, &ktable, &target).unwrap(), Char::from_int(spec.space(), expect));
            }
        }
    }

    #[test]
    fn fibre_and_fraction_sums_agree() {
        for spec in [a2_list(), hirzebruch(), BottTowerSpec::from_entries(3, &[(1, 2, 2), (1, 3, -3), (2, 3, 1)]).unwrap()] {
            let n = spec.height();
            for eps in EpsilonMask::all(n) {
                let table = sigma_table(&spec, &eps).unwrap();
                let ktable = mu_table(&spec, &eps).unwrap();
                for target in EpsilonMask::all(n) {
                    assert_eq!(
                        integrate(&spec, &table, &target).unwrap(),
                        integrate_by_fractions(&spec, &table, &target).unwrap()
                    );
                    assert_eq!(
                        euler_char(&spec, &ktable, &target).unwrap(),
                        euler_char_by_fractions(&spec, &ktable, &target).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn non_class_tables_fall_back() {
        let spec = hirzebruch();
        let sp = spec.space();
        let mut table = PolyTable::new();
        for at in EpsilonMask::all(2) {
            table.insert(at, Poly::zero(sp));
        }
        table.insert(m("00"), l(2, 1) * l(2, 1));
        let full = m("11");
        assert!(integrate(&spec, &table, &full).is_err());
        assert!(integrate_by_fractions(&spec, &table, &full).is_err());
    }

    #[test]
    fn constant_tables() {
        let spec = a2_list();
        let ones: PolyTable = EpsilonMask::all(3).into_iter().map(|e| (e, Poly::one(spec.space()))).collect();
        let kones: CharTable = EpsilonMask::all(3).into_iter().map(|e| (e, Char::one(spec.space()))).collect();
        for i in 1..=3 {
            let unit = EpsilonMask::unit(3, i);
            assert!(integrate(&spec, &ones, &unit).unwrap().is_zero());
            assert_eq!(euler_char(&spec, &kones, &unit).unwrap(), Char::one(spec.space()));
        }
        assert_eq!(euler_char(&spec, &kones, &m("000")).unwrap(), Char::one(spec.space()));
    }

    #[test]
    fn products() {
        let spec = hirzebruch();
        let sp = spec.space();
        let p = hd_product(&spec, &m("10"), &m("01")).unwrap();
        assert_eq!(p, PolyTable::from([(m("11"), Poly::one(sp))]));
        let p = hd_product(&spec, &m("10"), &m("10")).unwrap();
        assert_eq!(p, PolyTable::from([(m("10"), l(2, 1))]));
        let p = hd_product(&spec, &m("01"), &m("01")).unwrap();
        assert_eq!(p, PolyTable::from([(m("01"), l(2, 2)), (m("11"), Poly::one(sp))]));
        let spec = a2_list();
        for e1 in EpsilonMask::all(3) {
            for e2 in EpsilonMask::all(3) {
                assert_eq!(hd_product(&spec, &e1, &e2).unwrap(), product_by_rules(&spec, &e1, &e2).unwrap());
            }
        }
    }
}
