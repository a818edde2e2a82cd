//! The index set of Schubert classes of IG(2, 2n+1).
//!
//! A class is indexed by a pair `(λ₁, λ₂)` with
//!
//! * `2n-1 ≥ λ₁ ≥ λ₂ ≥ -1`,
//! * `λ₁ > n-2` implies `λ₁ > λ₂`,
//! * `λ₂ = -1` implies `λ₁ = 2n-1`.
//!
//! Membership is a total predicate on arbitrary integer pairs. Other modules
//! treat a pair outside the index set as the zero class.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The rank `n` of IG(2, 2n+1). Indexing works for `n ≥ 2`; ring operations
/// need `n ≥ 3` (see [`Rank::require_ring`]).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Rank(u32);

impl Rank {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::UnsupportedRank { n, min: 2 });
        }
        Ok(Rank(n))
    }

    /// A rank on which the quantum ring is available.
    pub fn ring(n: u32) -> Result<Self> {
        Rank::new(n)?.require_ring()
    }

    pub fn require_ring(self) -> Result<Self> {
        if self.0 < 3 {
            return Err(Error::UnsupportedRank { n: self.0, min: 3 });
        }
        Ok(self)
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub(crate) fn n(self) -> i64 {
        self.0 as i64
    }

    /// Degree of the quantum parameter, `2n`.
    #[inline]
    pub fn q_degree(self) -> i64 {
        2 * self.n()
    }

    /// Complex dimension of the variety, `4n-3`; also the top class degree.
    #[inline]
    pub fn dimension(self) -> i64 {
        4 * self.n() - 3
    }

    /// The point class `(2n-1, 2n-2)`.
    pub fn top_class(self) -> PartitionIndex {
        PartitionIndex::new(2 * self.n() - 1, 2 * self.n() - 2)
    }
}

impl TryFrom<u32> for Rank {
    type Error = Error;
    fn try_from(n: u32) -> Result<Self> {
        Rank::new(n)
    }
}

impl From<Rank> for u32 {
    fn from(r: Rank) -> u32 {
        r.0
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A pair `(λ₁, λ₂)`. Not necessarily a member of the index set; check with
/// [`PartitionIndex::is_valid`].
///
/// Ordering is the basis order: by degree, then by `λ₁` descending.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct PartitionIndex {
    pub lambda1: i64,
    pub lambda2: i64,
}

impl PartitionIndex {
    pub const UNIT: PartitionIndex = PartitionIndex { lambda1: 0, lambda2: 0 };
    /// The divisor class `τ₁ = τ₍₁,₀₎`.
    pub const TAU1: PartitionIndex = PartitionIndex { lambda1: 1, lambda2: 0 };
    pub const TAU11: PartitionIndex = PartitionIndex { lambda1: 1, lambda2: 1 };

    #[inline]
    pub const fn new(lambda1: i64, lambda2: i64) -> Self {
        PartitionIndex { lambda1, lambda2 }
    }

    /// Shorthand `τ_i = τ₍ᵢ,₀₎`.
    #[inline]
    pub const fn special(i: i64) -> Self {
        PartitionIndex { lambda1: i, lambda2: 0 }
    }

    #[inline]
    pub fn degree(self) -> i64 {
        self.lambda1 + self.lambda2
    }

    pub fn is_valid(self, rank: Rank) -> bool {
        is_valid(rank, self)
    }

    pub fn validate(self, rank: Rank) -> Result<Self> {
        if self.is_valid(rank) {
            Ok(self)
        } else {
            Err(Error::InvalidIndex { index: self, n: rank.get() })
        }
    }
}

impl Ord for PartitionIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.lambda1.cmp(&self.lambda1))
    }
}

impl PartialOrd for PartitionIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<[i64; 2]> for PartitionIndex {
    fn from([a, b]: [i64; 2]) -> Self {
        PartitionIndex::new(a, b)
    }
}

impl From<PartitionIndex> for [i64; 2] {
    fn from(p: PartitionIndex) -> Self {
        [p.lambda1, p.lambda2]
    }
}

impl From<(i64, i64)> for PartitionIndex {
    fn from((a, b): (i64, i64)) -> Self {
        PartitionIndex::new(a, b)
    }
}

impl fmt::Display for PartitionIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.lambda1, self.lambda2)
    }
}

/// Membership in the index set for rank `n`.
pub fn is_valid(rank: Rank, lam: PartitionIndex) -> bool {
    let n = rank.n();
    let (a, b) = (lam.lambda1, lam.lambda2);
    let bounds = 2 * n - 1 >= a && a >= b && b >= -1;
    let strict = a <= n - 2 || a > b;
    let negative = b != -1 || a == 2 * n - 1;
    bounds && strict && negative
}

#[inline]
pub fn degree(lam: PartitionIndex) -> i64 {
    lam.degree()
}

/// All classes for rank `n`, in basis order.
pub fn enumerate_basis(rank: Rank) -> Vec<PartitionIndex> {
    let n = rank.n();
    let mut out = Vec::new();
    for a in (-1..=2 * n - 1).rev() {
        for b in -1..=a {
            let p = PartitionIndex::new(a, b);
            if p.is_valid(rank) {
                out.push(p);
            }
        }
    }
    out.sort();
    out
}

/// The degree-`d` slice of [`enumerate_basis`].
pub fn enumerate_degree(rank: Rank, d: i64) -> Vec<PartitionIndex> {
    if d < 0 || d > rank.dimension() {
        return Vec::new();
    }
    let n = rank.n();
    // λ₁ runs high to low, which is already basis order within a degree.
    (-1..=2 * n - 1)
        .rev()
        .map(|a| PartitionIndex::new(a, d - a))
        .filter(|p| p.is_valid(rank))
        .collect()
}

/// Degree-slice sizes `b_0, …, b_{4n-3}`.
pub fn betti_profile(rank: Rank) -> Vec<usize> {
    (0..=rank.dimension())
        .map(|d| enumerate_degree(rank, d).len())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: u32) -> Rank {
        Rank::new(n).unwrap()
    }

    /// Independent oracle: filter the full grid, then order with an explicit key.
    fn grid_oracle(n: i64) -> Vec<(i64, i64)> {
        let mut v = Vec::new();
        for a in -1..=2 * n - 1 {
            for b in -1..=2 * n - 1 {
                let c1 = 2 * n - 1 >= a && a >= b && b >= -1;
                let c2 = !(a > n - 2) || a > b;
                let c3 = !(b == -1) || a == 2 * n - 1;
                if c1 && c2 && c3 {
                    v.push((a, b));
                }
            }
        }
        v.sort_by_key(|&(a, b)| (a + b, -a));
        v
    }

    #[test]
    fn validity_examples() {
        assert!(is_valid(r(3), PartitionIndex::new(5, -1)));
        assert!(!is_valid(r(3), PartitionIndex::new(2, 2)));
        assert!(is_valid(r(3), PartitionIndex::new(0, 0)));
        assert!(!is_valid(r(2), PartitionIndex::new(1, 1)));
        assert!(!is_valid(r(3), PartitionIndex::new(4, -1)));
        assert!(!is_valid(r(3), PartitionIndex::new(6, 0)));
        assert!(!is_valid(r(3), PartitionIndex::new(1, 2)));
    }

    #[test]
    fn degree_examples() {
        assert_eq!(degree(PartitionIndex::new(5, 4)), 9);
        assert_eq!(degree(PartitionIndex::new(5, -1)), 4);
        assert_eq!(degree(PartitionIndex::new(0, 0)), 0);
    }

    #[test]
    fn rank_bounds() {
        assert!(Rank::new(1).is_err());
        assert!(Rank::new(2).is_ok());
        assert!(Rank::ring(2).is_err());
        assert!(Rank::ring(3).is_ok());
    }

    #[test]
    fn basis_n3() {
        let b = enumerate_basis(r(3));
        assert_eq!(b.len(), 18);
        assert_eq!(betti_profile(r(3)), vec![1, 1, 2, 2, 3, 3, 2, 2, 1, 1]);
        assert_eq!(enumerate_basis(r(2)).len(), 8);
        assert_eq!(enumerate_degree(r(3), 9), vec![PartitionIndex::new(5, 4)]);
    }

    #[test]
    fn degree_slices() {
        let mut d4 = enumerate_degree(r(3), 4);
        d4.sort_by_key(|p| (p.lambda1, p.lambda2));
        assert_eq!(
            d4,
            vec![
                PartitionIndex::new(3, 1),
                PartitionIndex::new(4, 0),
                PartitionIndex::new(5, -1)
            ]
        );
        assert!(enumerate_degree(r(3), 10).is_empty());
        assert!(enumerate_degree(r(3), -1).is_empty());
        assert_eq!(enumerate_degree(r(3), 0), vec![PartitionIndex::UNIT]);
    }

    #[test]
    fn agrees_with_grid_oracle() {
        for n in 2..=8u32 {
            let got: Vec<_> = enumerate_basis(r(n))
                .into_iter()
                .map(|p| (p.lambda1, p.lambda2))
                .collect();
            assert_eq!(got, grid_oracle(n as i64), "n={n}");
        }
    }

    #[test]
    fn structural_properties() {
        for n in 2..=8u32 {
            let rank = r(n);
            let dim = rank.dimension();
            let basis = enumerate_basis(rank);
            assert_eq!(basis.iter().map(|p| p.degree()).max(), Some(dim));
            assert_eq!(enumerate_degree(rank, dim), vec![rank.top_class()]);
            if n >= 3 {
                for d in 0..=dim {
                    assert_eq!(
                        enumerate_degree(rank, d).len(),
                        enumerate_degree(rank, dim - d).len()
                    );
                }
            }
        }
    }
}
