//! Quantum Pieri rules for multiplication by `τ₁` and `τ₍₁,₁₎`.
//!
//! Terms whose index falls outside the index set are dropped. The rule
//! tables never say what such a term means; reading it as zero is the
//! convention that keeps products homogeneous and associative (the ring
//! and identity test suites check this for every supported rank).

use serde::Serialize;

use crate::algebra::{rat, ClassVector};
use crate::error::Result;
use crate::index::{PartitionIndex, Rank};

/// Which row of the `τ₁` rule table applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Tau1Case {
    /// `a+b ≠ 2n-3`, `a ≠ 2n-1`: `τ_{a+1,b} + τ_{a,b+1}`.
    Generic,
    /// `a+b = 2n-3`: `τ_{a,b+1} + 2τ_{a+1,b} + τ_{a+2,b-1}`.
    Middle,
    /// `a = 2n-1`, `0 ≤ b ≤ 2n-3`: `τ_{2n-1,b+1} + q τ_b`.
    TopRow,
    /// `(2n-1, -1)`: `τ_{2n-1}`.
    NegativeEnd,
    /// `(2n-1, 2n-2)`: `q(τ_{2n-1,-1} + τ_{2n-2})`.
    Point,
}

/// Which row of the `τ₍₁,₁₎` rule table applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Tau11Case {
    /// `a+b ∉ {2n-4, 2n-3}`, `a ≠ 2n-1`: `τ_{a+1,b+1}`.
    Generic,
    /// `a+b ∈ {2n-4, 2n-3}`: `τ_{a+2,b} + τ_{a+1,b+1}`.
    Middle,
    /// `a = 2n-1`, `b ≠ 2n-3`: `q τ_{b+1}`.
    TopRow,
    /// `(2n-1, 2n-3)`: `q(τ_{2n-1,-1} + τ_{2n-2})`.
    Corner,
}

fn prepare(rank: Rank, lam: PartitionIndex) -> Result<(i64, i64, i64)> {
    rank.require_ring()?;
    lam.validate(rank)?;
    Ok((rank.n(), lam.lambda1, lam.lambda2))
}

fn push(v: &mut ClassVector, a: i64, b: i64, k: u32, c: i64) {
    v.add_term(PartitionIndex::new(a, b), k, rat(c));
}

pub fn tau1_case(rank: Rank, lam: PartitionIndex) -> Result<Tau1Case> {
    let (n, a, b) = prepare(rank, lam)?;
    Ok(if a == 2 * n - 1 {
        match b {
            -1 => Tau1Case::NegativeEnd,
            b if b == 2 * n - 2 => Tau1Case::Point,
            _ => Tau1Case::TopRow,
        }
    } else if a + b == 2 * n - 3 {
        Tau1Case::Middle
    } else {
        Tau1Case::Generic
    })
}

pub fn tau11_case(rank: Rank, lam: PartitionIndex) -> Result<Tau11Case> {
    let (n, a, b) = prepare(rank, lam)?;
    Ok(if a == 2 * n - 1 {
        if b == 2 * n - 3 {
            Tau11Case::Corner
        } else {
            Tau11Case::TopRow
        }
    } else if a + b == 2 * n - 4 || a + b == 2 * n - 3 {
        Tau11Case::Middle
    } else {
        Tau11Case::Generic
    })
}

/// `τ₁ ⋆ τ_λ`.
pub fn pieri_tau1(rank: Rank, lam: PartitionIndex) -> Result<ClassVector> {
    let case = tau1_case(rank, lam)?;
    let (n, a, b) = (rank.n(), lam.lambda1, lam.lambda2);
    let mut v = ClassVector::zero(rank);
    match case {
        Tau1Case::Generic => {
            push(&mut v, a + 1, b, 0, 1);
            push(&mut v, a, b + 1, 0, 1);
        }
        Tau1Case::Middle => {
            push(&mut v, a, b + 1, 0, 1);
            push(&mut v, a + 1, b, 0, 2);
            push(&mut v, a + 2, b - 1, 0, 1);
        }
        Tau1Case::TopRow => {
            push(&mut v, 2 * n - 1, b + 1, 0, 1);
            push(&mut v, b, 0, 1, 1);
        }
        Tau1Case::NegativeEnd => push(&mut v, 2 * n - 1, 0, 0, 1),
        Tau1Case::Point => {
            push(&mut v, 2 * n - 1, -1, 1, 1);
            push(&mut v, 2 * n - 2, 0, 1, 1);
        }
    }
    Ok(v)
}

/// `τ₍₁,₁₎ ⋆ τ_λ`.
pub fn pieri_tau11(rank: Rank, lam: PartitionIndex) -> Result<ClassVector> {
    let case = tau11_case(rank, lam)?;
    let (n, a, b) = (rank.n(), lam.lambda1, lam.lambda2);
    let mut v = ClassVector::zero(rank);
    match case {
        Tau11Case::Generic => push(&mut v, a + 1, b + 1, 0, 1),
        Tau11Case::Middle => {
            push(&mut v, a + 2, b, 0, 1);
            push(&mut v, a + 1, b + 1, 0, 1);
        }
        Tau11Case::TopRow => push(&mut v, b + 1, 0, 1, 1),
        Tau11Case::Corner => {
            push(&mut v, 2 * n - 1, -1, 1, 1);
            push(&mut v, 2 * n - 2, 0, 1, 1);
        }
    }
    Ok(v)
}

/// The two special classes whose products are given by a rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Special {
    Tau1,
    Tau11,
}

impl Special {
    pub fn index(self) -> PartitionIndex {
        match self {
            Special::Tau1 => PartitionIndex::TAU1,
            Special::Tau11 => PartitionIndex::TAU11,
        }
    }

    pub fn degree(self) -> i64 {
        self.index().degree()
    }
}

/// Applies a Pieri operator to an arbitrary class by linearity.
pub fn apply(rank: Rank, which: Special, v: &ClassVector) -> Result<ClassVector> {
    let mut out = ClassVector::zero(rank);
    for (nu, p) in v.iter() {
        let image = match which {
            Special::Tau1 => pieri_tau1(rank, *nu)?,
            Special::Tau11 => pieri_tau11(rank, *nu)?,
        };
        for (k, c) in p.terms() {
            out.add_scaled(&image, c, k);
        }
    }
    Ok(out)
}

/// `(τ₍₁,₁₎)^t ⋆ v` by repeated application of the rule.
pub fn iterate_tau11(rank: Rank, t: u32, v: &ClassVector) -> Result<ClassVector> {
    let mut cur = v.clone();
    for _ in 0..t {
        cur = apply(rank, Special::Tau11, &cur)?;
    }
    Ok(cur)
}
