//! Generalized Cartan matrices, roots, coroots and positive-root enumeration.
//!
//! Convention: `a[i][j] = α_j(h_i)`, so the simple reflection is
//! `s_i(λ) = λ - λ(h_i) α_i`.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::Deserialize;

use crate::{Error, Result};

pub const DEFAULT_ROOT_GUARD: usize = 10_000;

#[derive(Debug, PartialEq, Eq, Hash)]
struct CartanData {
    rank: usize,
    entries: Vec<Vec<i64>>,
}

/// A generalized Cartan matrix; cheap to clone.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CartanMatrix(Arc<CartanData>);

#[derive(Deserialize)]
struct CartanJson {
    rank: usize,
    matrix: Vec<Vec<i64>>,
}

impl CartanMatrix {
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self> {
        let rank = entries.len();
        if rank == 0 {
            return Err(Error::InvalidCartan("empty matrix".into()));
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != rank {
                return Err(Error::InvalidCartan(format!("row {} has length {}", i + 1, row.len())));
            }
            if row[i] != 2 {
                return Err(Error::InvalidCartan(format!("diagonal entry {} is not 2", i + 1)));
            }
            for (j, &x) in row.iter().enumerate() {
                if i == j {
                    continue;
                }
                if x > 0 {
                    return Err(Error::InvalidCartan(format!("a[{}][{}] > 0", i + 1, j + 1)));
                }
                if (x == 0) != (entries[j][i] == 0) {
                    return Err(Error::InvalidCartan(format!(
                        "a[{}][{}] and a[{}][{}] vanish asymmetrically",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        Ok(CartanMatrix(Arc::new(CartanData { rank, entries })))
    }

    /// Standard matrices. B2 lists the short root first so that
    /// `α_2(h_1) = -2`; G2 has `α_1(h_2) = -3`.
    pub fn builtin(family: &str, rank: usize) -> Result<Self> {
        let invalid = || Error::InvalidRank { family: family.to_string(), rank };
        let mut m = vec![vec![0i64; rank]; rank];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 2;
        }
        let chain = |m: &mut Vec<Vec<i64>>, upto: usize| {
            for i in 0..upto.saturating_sub(1) {
                m[i][i + 1] = -1;
                m[i + 1][i] = -1;
            }
        };
        match family {
            "A" => {
                if rank < 1 {
                    return Err(invalid());
                }
                chain(&mut m, rank);
            }
            "B" => {
                if rank < 2 {
                    return Err(invalid());
                }
                chain(&mut m, rank);
                if rank == 2 {
                    m[0][1] = -2;
                } else {
                    m[rank - 1][rank - 2] = -2;
                }
            }
            "C" => {
                if rank < 2 {
                    return Err(invalid());
                }
                chain(&mut m, rank);
                m[rank - 2][rank - 1] = -2;
            }
            "D" => {
                if rank < 3 {
                    return Err(invalid());
                }
                chain(&mut m, rank - 1);
                m[rank - 3][rank - 1] = -1;
                m[rank - 1][rank - 3] = -1;
            }
            "G" => {
                if rank != 2 {
                    return Err(invalid());
                }
                m = vec![vec![2, -1], vec![-3, 2]];
            }
            "F" => {
                if rank != 4 {
                    return Err(invalid());
                }
                m = vec![vec![2, -1, 0, 0], vec![-1, 2, -1, 0], vec![0, -2, 2, -1], vec![0, 0, -1, 2]];
            }
            _ => return Err(Error::UnknownFamily(family.to_string())),
        }
        Self::new(m)
    }

    /// Parses names such as `A2`, `B2`, `G2`, `F4`, `D4`, or products
    /// such as `A1xA1` (block diagonal).
    pub fn from_type_name(name: &str) -> Result<Self> {
        let blocks: Vec<&str> = name.split(['x', 'X']).collect();
        let mut mats = Vec::new();
        for block in blocks {
            let block = block.trim();
            let split = block
                .find(|c: char| c.is_ascii_digit())
                .ok_or_else(|| Error::UnknownFamily(block.to_string()))?;
            let (family, rank) = block.split_at(split);
            let rank: usize = rank.parse().map_err(|_| Error::UnknownFamily(block.to_string()))?;
            mats.push(Self::builtin(&family.to_ascii_uppercase(), rank)?);
        }
        let total: usize = mats.iter().map(|m| m.rank()).sum();
        let mut entries = vec![vec![0i64; total]; total];
        let mut offset = 0;
        for m in &mats {
            for i in 0..m.rank() {
                for j in 0..m.rank() {
                    entries[offset + i][offset + j] = m.0.entries[i][j];
                }
            }
            offset += m.rank();
        }
        Self::new(entries)
    }

    /// Reads `{"rank": r, "matrix": [[...], ...]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let parsed: CartanJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if parsed.matrix.len() != parsed.rank {
            return Err(Error::RankMismatch { expected: parsed.rank, found: parsed.matrix.len() });
        }
        Self::new(parsed.matrix)
    }

    pub fn rank(&self) -> usize {
        self.0.rank
    }

    /// `a[i][j] = α_j(h_i)` with 1-based indices.
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.0.entries[i - 1][j - 1]
    }


    pub fn rows(&self) -> &[Vec<i64>] {
        &self.0.entries
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i >= 1 && i <= self.rank() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: i, rank: self.rank() })
        }
    }

    pub fn simple_root(&self, i: usize) -> RootVector {
        let mut v = vec![0; self.rank()];
        v[i - 1] = 1;
        RootVector(v)
    }

    pub fn simple_coroot(&self, i: usize) -> CorootVector {
        let mut v = vec![0; self.rank()];
        v[i - 1] = 1;
        CorootVector(v)
    }

    /// `λ(h) = Σ_{i,j} λ_j h_i a_ij`.
    pub fn pairing(&self, lambda: &RootVector, h: &CorootVector) -> Result<i64> {
        let r = self.rank();
        for n in [lambda.0.len(), h.0.len()] {
            if n != r {
                return Err(Error::RankMismatch { expected: r, found: n });
            }
        }
        Ok(self.pairing_unchecked(&lambda.0, &h.0))
    }

    pub(crate) fn pairing_unchecked(&self, lambda: &[i64], h: &[i64]) -> i64 {
        let mut total = 0;
        for (i, &hi) in h.iter().enumerate() {
            if hi == 0 {
                continue;
            }
            for (j, &lj) in lambda.iter().enumerate() {
                total += lj * hi * self.0.entries[i][j];
            }
        }
        total
    }

    /// `s_i(λ)` on root-lattice coordinates.
    pub(crate) fn reflect_root(&self, i: usize, lambda: &mut [i64]) {
        let coef: i64 = lambda.iter().enumerate().map(|(j, &x)| x * self.0.entries[i][j]).sum();
        lambda[i] -= coef;
    }

    /// `s_i(h) = h - α_i(h) h_i` on coroot coordinates.
    pub(crate) fn reflect_coroot(&self, i: usize, h: &mut [i64]) {
        let coef: i64 = h.iter().enumerate().map(|(k, &x)| x * self.0.entries[k][i]).sum();
        h[i] -= coef;
    }

    /// Positive real roots with coroots for a finite-type matrix.
    pub fn positive_roots(&self) -> Result<Vec<(RootVector, CorootVector)>> {
        self.positive_roots_with_guard(DEFAULT_ROOT_GUARD)
    }

    pub fn positive_roots_with_guard(&self, guard: usize) -> Result<Vec<(RootVector, CorootVector)>> {
        self.enumerate_roots(None, Some(guard))
    }

    /// All positive real roots of height at most `max_height`, for any GCM.
    pub fn positive_roots_up_to_height(&self, max_height: i64) -> Vec<(RootVector, CorootVector)> {
        self.enumerate_roots(Some(max_height), None).expect("height-bounded enumeration")
    }

    fn enumerate_roots(
        &self,
        max_height: Option<i64>,
        guard: Option<usize>,
    ) -> Result<Vec<(RootVector, CorootVector)>> {
        let r = self.rank();
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for i in 0..r {
            let mut root = vec![0; r];
            root[i] = 1;
            seen.insert(root.clone());
            queue.push_back((root.clone(), root));
        }
        while let Some((root, coroot)) = queue.pop_front() {
            if let Some(g) = guard {
                if seen.len() > g {
                    return Err(Error::GuardExceeded(g));
                }
            }
            for i in 0..r {
                let mut next = root.clone();
                self.reflect_root(i, &mut next);
                if next.iter().any(|&x| x < 0) {
                    continue;
                }
                if max_height.is_some_and(|h| next.iter().sum::<i64>() > h) {
                    continue;
                }
                if seen.insert(next.clone()) {
                    let mut next_co = coroot.clone();
                    self.reflect_coroot(i, &mut next_co);
                    queue.push_back((next, next_co));
                }
            }
            out.push((RootVector(root), CorootVector(coroot)));
        }
        if let Some(g) = guard {
            if seen.len() > g {
                return Err(Error::GuardExceeded(g));
            }
        }
        out.sort_by(|(a, _), (b, _)| a.height().cmp(&b.height()).then_with(|| b.0.cmp(&a.0)));
        Ok(out)
    }
}

/// Integer coordinates in the simple-root basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootVector(pub Vec<i64>);

/// Integer coordinates in the simple-coroot basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CorootVector(pub Vec<i64>);

impl RootVector {
    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&x| x >= 0) && self.0.iter().any(|&x| x > 0)
    }

    pub fn is_negative(&self) -> bool {
        self.0.iter().all(|&x| x <= 0) && self.0.iter().any(|&x| x < 0)
    }

    pub fn neg(&self) -> RootVector {
        RootVector(self.0.iter().map(|x| -x).collect())
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }
}

impl CorootVector {
    pub fn coords(&self) -> &[i64] {
        &self.0
    }
}

fn write_combination(f: &mut fmt::Formatter<'_>, coords: &[i64], name: char) -> fmt::Result {
    let mut any = false;
    for (k, &x) in coords.iter().enumerate() {
        if x == 0 {
            continue;
        }
        if x < 0 {
            write!(f, "-")?;
        } else if any {
            write!(f, "+")?;
        }
        if x.abs() != 1 {
            write!(f, "{}", x.abs())?;
        }
        write!(f, "{name}{}", k + 1)?;
        any = true;
    }
    if !any {
        write!(f, "0")?;
    }
    Ok(())
}

/// Rows separated by `;`, as in `[2,-1;-1,2]`.
impl fmt::Display for CartanMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "[{}]", rows.join(";"))
    }
}

impl fmt::Display for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_combination(f, &self.0, 'a')
    }
}

impl fmt::Display for CorootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_combination(f, &self.0, 'h')
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_matrices() {
        assert_eq!(CartanMatrix::builtin("A", 2).unwrap().rows(), &[vec![2, -1], vec![-1, 2]]);
        assert_eq!(CartanMatrix::builtin("G", 2).unwrap().rows(), &[vec![2, -1], vec![-3, 2]]);
        assert_eq!(CartanMatrix::builtin("B", 2).unwrap().rows(), &[vec![2, -2], vec![-1, 2]]);
        assert_eq!(CartanMatrix::from_type_name("G2").unwrap().rank(), 2);
        assert!(CartanMatrix::builtin("Q", 2).is_err());
        assert!(CartanMatrix::builtin("G", 3).is_err());
        assert_eq!(
            CartanMatrix::from_type_name("A1xA1").unwrap().rows(),
            &[vec![2, 0], vec![0, 2]]
        );
    }

    #[test]
    fn validation() {
        assert!(CartanMatrix::new(vec![vec![2, 1], vec![-1, 2]]).is_err());
        assert!(CartanMatrix::new(vec![vec![2, 0], vec![-1, 2]]).is_err());
        assert!(CartanMatrix::from_json(r#"{"rank": 2, "matrix": [[2,-2],[-2,2]]}"#).is_ok());
    }

    #[test]
    fn pairings() {
        let cm = CartanMatrix::builtin("A", 2).unwrap();
        let a = |v: Vec<i64>| RootVector(v);
        let h = |v: Vec<i64>| CorootVector(v);
        assert_eq!(cm.pairing(&a(vec![0, 1]), &h(vec![1, 0])).unwrap(), -1);
        assert_eq!(cm.pairing(&a(vec![1, 0]), &h(vec![1, 0])).unwrap(), 2);
        assert_eq!(cm.pairing(&a(vec![1, 1]), &h(vec![1, 0])).unwrap(), 1);
        assert!(cm.pairing(&a(vec![1]), &h(vec![1, 0])).is_err());
    }

    #[test]
    fn root_lists() {
        let show = |name: &str| -> Vec<String> {
            CartanMatrix::from_type_name(name)
                .unwrap()
                .positive_roots()
                .unwrap()
                .iter()
                .map(|(r, _)| r.to_string())
                .collect()
        };
        assert_eq!(show("A2"), ["a1", "a2", "a1+a2"]);
        assert_eq!(show("B2"), ["a1", "a2", "a1+a2", "2a1+a2"]);
        assert_eq!(show("A1"), ["a1"]);
        assert_eq!(show("G2").len(), 6);
        assert_eq!(show("F4").len(), 24);
        assert_eq!(show("D4").len(), 12);
        assert_eq!(show("B3").len(), 9);
        assert_eq!(show("C3").len(), 9);
    }

    #[test]
    fn coroots_pair_to_two() {
        for name in ["A3", "B3", "C3", "G2", "F4", "D4"] {
            let cm = CartanMatrix::from_type_name(name).unwrap();
            for (r, h) in cm.positive_roots().unwrap() {
                assert_eq!(cm.pairing(&r, &h).unwrap(), 2, "{name} {r}");
            }
        }
    }

    #[test]
    fn affine_type_trips_the_guard() {
        let cm = CartanMatrix::new(vec![vec![2, -2], vec![-2, 2]]).unwrap();
        assert!(matches!(cm.positive_roots_with_guard(100), Err(Error::GuardExceeded(100))));
        let bounded = cm.positive_roots_up_to_height(5);
        assert_eq!(bounded.len(), 6);
    }
}
