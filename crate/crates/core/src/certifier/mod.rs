//! Certifies that positivity of every `σ₍₁,₁₎ ⋆ σ_μ` forces the trivial
//! deformation.
//!
//! [`build_constraints`] expands each product with the deformation
//! coefficients left symbolic and records one `expression ≥ 0` per
//! coefficient. [`certify_uniqueness`] computes the exact range of every
//! unknown on that polyhedron by Fourier–Motzkin elimination and keeps the
//! nonnegative combinations that prove each bound; [`verify_certificate`]
//! rechecks those combinations without trusting the search.
//! [`replay::replay_proof`] is an independent route that recomputes the
//! hand argument through iterated `τ₍₁,₁₎` products.

mod fm;
pub mod replay;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{
    format_rational, parse_rational, rational_string, AffineExpression, Rational, Unknown,
};
use crate::deformation::{self, symbolic_multiply_basis, symbolic_sigma, symbolic_tau_to_sigma, Mode};
use crate::error::{Error, Result};
use crate::index::{PartitionIndex, Rank};
use crate::ring::MultiplicationTable;

pub use replay::{replay_proof, ReplayReport};

/// Where a constraint came from: the coefficient of `q^d σ_ν` in
/// `σ₍₁,₁₎ ⋆ σ_μ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Provenance {
    pub mu: PartitionIndex,
    pub nu: PartitionIndex,
    pub d: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    /// Asserted `≥ 0`.
    pub expr: AffineExpression,
    pub source: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSystem {
    pub rank: Rank,
    pub mode: Mode,
    pub unknowns: Vec<Unknown>,
    pub constraints: Vec<Constraint>,
}

impl ConstraintSystem {
    fn unknown_positions(&self) -> BTreeMap<Unknown, usize> {
        self.unknowns.iter().enumerate().map(|(i, u)| (*u, i)).collect()
    }

    fn rows(&self) -> Result<Vec<fm::Row>> {
        let pos = self.unknown_positions();
        self.constraints
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let linear = c
                    .expr
                    .linear()
                    .iter()
                    .map(|(u, v)| {
                        pos.get(u).map(|p| (*p, v.clone())).ok_or_else(|| {
                            Error::MalformedDeformation(format!("constraint {i} uses undeclared {u}"))
                        })
                    })
                    .collect::<Result<_>>()?;
                Ok(fm::Row::input(i, c.expr.constant.clone(), linear))
            })
            .collect()
    }

    /// True when every constraint holds at `values`.
    pub fn is_satisfied_by(&self, values: &BTreeMap<Unknown, Rational>) -> bool {
        self.constraints.iter().all(|c| !c.expr.evaluate(values).is_negative())
    }

    /// Adds one more constraint (used for restricting or testing systems).
    pub fn push(&mut self, expr: AffineExpression, source: Provenance) {
        self.constraints.push(Constraint { expr, source });
    }
}

/// Expands `σ₍₁,₁₎ ⋆ σ_μ` for every basis `μ` with symbolic coefficients.
pub fn build_constraints(table: &MultiplicationTable, mode: Mode) -> Result<ConstraintSystem> {
    let rank = table.rank();
    let unknowns = deformation::unknowns(rank, mode);
    // σ₍₁,₁₎ = τ₍₁,₁₎ since nothing sits 2n below degree 2.
    if !deformation::partners(rank, PartitionIndex::TAU11).is_empty() {
        return Err(Error::QuadraticTerm { mu: PartitionIndex::TAU11 });
    }
    let mut constraints = Vec::new();
    for mu in table.basis() {
        let sigma_mu = symbolic_sigma(rank, mode, *mu)?;
        let product = symbolic_multiply_basis(table, PartitionIndex::TAU11, &sigma_mu)?;
        let in_sigma = symbolic_tau_to_sigma(mode, &product, *mu)?;
        for ((nu, d), expr) in in_sigma.iter() {
            let source = Provenance { mu: *mu, nu: *nu, d: *d };
            if expr.is_constant() {
                if expr.constant.is_negative() {
                    return Err(Error::Infeasible);
                }
                continue;
            }
            constraints.push(Constraint { expr: expr.clone(), source });
        }
    }
    Ok(ConstraintSystem { rank, mode, unknowns, constraints })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Proves `x ≤ bound`: the weighted sum equals `bound - x`.
    Upper,
    /// Proves `x ≥ bound`: the weighted sum equals `x - bound`.
    Lower,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightEntry {
    pub constraint: usize,
    #[serde(with = "rational_string")]
    pub weight: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundProof {
    pub unknown: Unknown,
    pub direction: Direction,
    #[serde(with = "rational_string")]
    pub bound: Rational,
    pub weights: Vec<WeightEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Conclusion {
    UniqueZero,
    NotUnique,
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Conclusion::UniqueZero => "UniqueZero",
            Conclusion::NotUnique => "NotUnique",
        })
    }
}

/// The exact feasible range of one unknown; `None` ends are unbounded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

impl Interval {
    pub fn is_zero(&self) -> bool {
        matches!((&self.lower, &self.upper), (Some(l), Some(u)) if l.is_zero() && u.is_zero())
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lo = self.lower.as_ref().map_or("-inf".to_string(), format_rational);
        let hi = self.upper.as_ref().map_or("+inf".to_string(), format_rational);
        write!(f, "[{lo}, {hi}]")
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub eliminations: usize,
    pub generated_rows: usize,
    pub peak_rows: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub rank: Rank,
    pub mode: Mode,
    pub conclusion: Conclusion,
    pub intervals: Vec<(Unknown, Interval)>,
    pub bounds: Vec<BoundProof>,
    /// A nonzero feasible assignment when the conclusion is `NotUnique`.
    pub witness: Option<BTreeMap<Unknown, Rational>>,
    pub trace: Trace,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CertifyOptions {
    /// Largest number of rows any elimination step may hold.
    pub max_constraints: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { max_constraints: 200_000 }
    }
}

fn proof_from_row(unknown: Unknown, direction: Direction, row: &fm::Row) -> BoundProof {
    let bound = match direction {
        Direction::Upper => row.constant.clone(),
        Direction::Lower => -&row.constant,
    };
    BoundProof {
        unknown,
        direction,
        bound,
        weights: row
            .history
            .iter()
            .filter(|(_, w)| !w.is_zero())
            .map(|(i, w)| WeightEntry { constraint: *i, weight: w.clone() })
            .collect(),
    }
}

fn interval_of(rows: &[fm::Row], k: usize, cap: usize, trace: &mut fm::Stats) -> Result<(Option<fm::Row>, Option<fm::Row>)> {
    let projected = fm::project_onto(rows, k, cap, trace)?;
    Ok(fm::bounds(&projected, k))
}

/// Exact range of every unknown, with a Farkas-style proof for each finite
/// bound.
pub fn certify_uniqueness(system: &ConstraintSystem, options: CertifyOptions) -> Result<Certificate> {
    let rows = system.rows()?;
    let mut stats = fm::Stats::default();
    let mut intervals = Vec::new();
    let mut bounds = Vec::new();
    for (k, u) in system.unknowns.iter().enumerate() {
        let (lo, hi) = interval_of(&rows, k, options.max_constraints, &mut stats)?;
        if let Some(r) = &lo {
            bounds.push(proof_from_row(*u, Direction::Lower, r));
        }
        if let Some(r) = &hi {
            bounds.push(proof_from_row(*u, Direction::Upper, r));
        }
        let interval = Interval {
            lower: lo.map(|r| -r.constant),
            upper: hi.map(|r| r.constant),
        };
        intervals.push((*u, interval));
    }
    let unique = intervals.iter().all(|(_, i)| i.is_zero());
    let witness = if unique {
        None
    } else {
        Some(find_witness(system, &intervals, options.max_constraints)?)
    };
    Ok(Certificate {
        rank: system.rank,
        mode: system.mode,
        conclusion: if unique { Conclusion::UniqueZero } else { Conclusion::NotUnique },
        intervals,
        bounds,
        witness,
        trace: Trace {
            eliminations: stats.eliminated,
            generated_rows: stats.generated,
            peak_rows: stats.peak,
        },
    })
}

/// Picks a value inside `[lo, hi]`, preferring `prefer` when it fits.
fn pick(lo: &Option<Rational>, hi: &Option<Rational>, prefer: &Rational) -> Rational {
    match (lo, hi) {
        (Some(l), _) if prefer < l => l.clone(),
        (_, Some(h)) if prefer > h => h.clone(),
        _ => prefer.clone(),
    }
}

/// Builds a nonzero feasible point by fixing unknowns one at a time.
fn find_witness(
    system: &ConstraintSystem,
    intervals: &[(Unknown, Interval)],
    cap: usize,
) -> Result<BTreeMap<Unknown, Rational>> {
    let (first, first_iv) = intervals
        .iter()
        .position(|(_, iv)| !iv.is_zero())
        .map(|i| (i, &intervals[i].1))
        .expect("some interval is not {0}");
    let first_value = match (&first_iv.lower, &first_iv.upper) {
        (_, Some(h)) if h.is_positive() => h.clone(),
        (l, None) => l.clone().filter(|l| l.is_positive()).unwrap_or_else(Rational::zero) + Rational::one(),
        (Some(l), _) if l.is_negative() => l.clone(),
        (None, Some(h)) => h.clone().min(Rational::zero()) - Rational::one(),
        _ => unreachable!("interval is not {{0}}"),
    };

    let mut fixed = BTreeMap::new();
    fixed.insert(first, first_value);
    let mut stats = fm::Stats::default();
    for k in 0..system.unknowns.len() {
        if fixed.contains_key(&k) {
            continue;
        }
        let rows: Vec<fm::Row> = system
            .rows()?
            .into_iter()
            .map(|mut r| {
                for (j, v) in &fixed {
                    if let Some(c) = r.linear.remove(j) {
                        r.constant += c * v;
                    }
                }
                r
            })
            .collect();
        let (lo, hi) = interval_of(&rows, k, cap, &mut stats)?;
        let lo = lo.map(|r| -r.constant);
        let hi = hi.map(|r| r.constant);
        fixed.insert(k, pick(&lo, &hi, &Rational::zero()));
    }
    let witness: BTreeMap<Unknown, Rational> =
        fixed.into_iter().map(|(k, v)| (system.unknowns[k], v)).collect();
    debug_assert!(system.is_satisfied_by(&witness));
    Ok(witness)
}

/// Rechecks a certificate against the system by exact summation.
pub fn verify_certificate(system: &ConstraintSystem, cert: &Certificate) -> bool {
    if cert.rank != system.rank || cert.mode != system.mode {
        return false;
    }
    for proof in &cert.bounds {
        if !system.unknowns.contains(&proof.unknown) {
            return false;
        }
        let mut sum = AffineExpression::zero();
        for w in &proof.weights {
            if w.weight.is_negative() {
                return false;
            }
            let Some(c) = system.constraints.get(w.constraint) else {
                return false;
            };
            sum.add_scaled(&c.expr, &w.weight);
        }
        let var = AffineExpression::var(proof.unknown);
        let bound = AffineExpression::constant(proof.bound.clone());
        let claimed = match proof.direction {
            Direction::Upper => &bound - &var,
            Direction::Lower => &var - &bound,
        };
        if sum != claimed {
            return false;
        }
    }
    match cert.conclusion {
        Conclusion::UniqueZero => system.unknowns.iter().all(|u| {
            [Direction::Upper, Direction::Lower].iter().all(|d| {
                cert.bounds
                    .iter()
                    .any(|b| b.unknown == *u && b.direction == *d && b.bound.is_zero())
            })
        }),
        Conclusion::NotUnique => cert.witness.as_ref().is_some_and(|w| {
            w.keys().all(|u| system.unknowns.contains(u))
                && w.values().any(|v| !v.is_zero())
                && system.is_satisfied_by(w)
        }),
    }
}

// ---------------------------------------------------------------------------
// Certificate document

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearTerm {
    pub unknown: Unknown,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintEntry {
    pub index: usize,
    pub mu: PartitionIndex,
    pub nu: PartitionIndex,
    pub d: u32,
    pub constant: String,
    pub linear: Vec<LinearTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalEntry {
    pub unknown: Unknown,
    pub lower: Option<String>,
    pub upper: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessEntry {
    pub unknown: Unknown,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDocument {
    pub n: u32,
    pub mode: Mode,
    pub conclusion: Conclusion,
    pub unknowns: Vec<Unknown>,
    pub intervals: Vec<IntervalEntry>,
    pub bounds: Vec<BoundProof>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<WitnessEntry>>,
    pub trace: Trace,
    pub constraint_dump: Vec<ConstraintEntry>,
}

impl CertificateDocument {
    pub fn new(system: &ConstraintSystem, cert: &Certificate) -> Self {
        CertificateDocument {
            n: system.rank.get(),
            mode: system.mode,
            conclusion: cert.conclusion.clone(),
            unknowns: system.unknowns.clone(),
            intervals: cert
                .intervals
                .iter()
                .map(|(u, iv)| IntervalEntry {
                    unknown: *u,
                    lower: iv.lower.as_ref().map(format_rational),
                    upper: iv.upper.as_ref().map(format_rational),
                })
                .collect(),
            bounds: cert.bounds.clone(),
            witness: cert.witness.as_ref().map(|w| {
                w.iter()
                    .map(|(u, v)| WitnessEntry { unknown: *u, value: format_rational(v) })
                    .collect()
            }),
            trace: cert.trace.clone(),
            constraint_dump: system
                .constraints
                .iter()
                .enumerate()
                .map(|(index, c)| ConstraintEntry {
                    index,
                    mu: c.source.mu,
                    nu: c.source.nu,
                    d: c.source.d,
                    constant: format_rational(&c.expr.constant),
                    linear: c
                        .expr
                        .linear()
                        .iter()
                        .map(|(u, v)| LinearTerm { unknown: *u, coeff: format_rational(v) })
                        .collect(),
                })
                .collect(),
        }
    }

    /// Reconstructs the system and certificate from a document.
    pub fn decode(&self) -> Result<(ConstraintSystem, Certificate)> {
        let rank = Rank::ring(self.n)?;
        let mut constraints = Vec::new();
        for (i, e) in self.constraint_dump.iter().enumerate() {
            if e.index != i {
                return Err(Error::InvalidDocument(format!("constraint {} out of order", e.index)));
            }
            let mut expr = AffineExpression::constant(parse_rational(&e.constant)?);
            for t in &e.linear {
                expr.add_linear(t.unknown, parse_rational(&t.coeff)?);
            }
            constraints.push(Constraint {
                expr,
                source: Provenance { mu: e.mu, nu: e.nu, d: e.d },
            });
        }
        let system = ConstraintSystem {
            rank,
            mode: self.mode,
            unknowns: self.unknowns.clone(),
            constraints,
        };
        let parse_opt = |s: &Option<String>| s.as_deref().map(parse_rational).transpose();
        let intervals = self
            .intervals
            .iter()
            .map(|e| {
                Ok((e.unknown, Interval { lower: parse_opt(&e.lower)?, upper: parse_opt(&e.upper)? }))
            })
            .collect::<Result<_>>()?;
        let witness = self
            .witness
            .as_ref()
            .map(|w| {
                w.iter()
                    .map(|e| Ok((e.unknown, parse_rational(&e.value)?)))
                    .collect::<Result<BTreeMap<_, _>>>()
            })
            .transpose()?;
        let cert = Certificate {
            rank,
            mode: self.mode,
            conclusion: self.conclusion.clone(),
            intervals,
            bounds: self.bounds.clone(),
            witness,
            trace: self.trace.clone(),
        };
        Ok((system, cert))
    }
}

/// Parses a certificate document and checks it end to end.
pub fn verify_certificate_json(src: &str) -> Result<bool> {
    let doc: CertificateDocument = serde_json::from_str(src)?;
    let (system, cert) = doc.decode()?;
    Ok(verify_certificate(&system, &cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use std::sync::OnceLock;

    fn table3() -> &'static MultiplicationTable {
        static T: OnceLock<MultiplicationTable> = OnceLock::new();
        T.get_or_init(|| MultiplicationTable::build(Rank::ring(3).unwrap()).unwrap())
    }

    fn p(a: i64, b: i64) -> PartitionIndex {
        PartitionIndex::new(a, b)
    }

    #[test]
    fn n3_system_shape() {
        let sys = build_constraints(table3(), Mode::PerPair).unwrap();
        assert_eq!(sys.unknowns.len(), 8);
        let target = AffineExpression::var(Unknown::per_pair(p(5, 1), p(0, 0)));
        assert!(sys
            .constraints
            .iter()
            .any(|c| c.source.mu == p(4, 0) && c.expr == target));
        assert!(sys.is_satisfied_by(&BTreeMap::new()));
    }

    #[test]
    fn n3_certifies_in_both_modes() {
        for mode in [Mode::PerPair, Mode::PerMu] {
            let sys = build_constraints(table3(), mode).unwrap();
            let cert = certify_uniqueness(&sys, CertifyOptions::default()).unwrap();
            assert_eq!(cert.conclusion, Conclusion::UniqueZero, "{mode}");
            assert!(verify_certificate(&sys, &cert));
        }
    }

    #[test]
    fn tampering_is_detected() {
        let sys = build_constraints(table3(), Mode::PerPair).unwrap();
        let cert = certify_uniqueness(&sys, CertifyOptions::default()).unwrap();

        let mut bad = cert.clone();
        let w = &mut bad.bounds[0].weights[0].weight;
        *w = -w.clone();
        assert!(!verify_certificate(&sys, &bad));

        let mut bad = cert.clone();
        bad.bounds[0].weights[0].constraint = sys.constraints.len() + 5;
        assert!(!verify_certificate(&sys, &bad));

        let mut bad = cert.clone();
        bad.bounds.retain(|b| b.direction == Direction::Lower);
        assert!(!verify_certificate(&sys, &bad));
    }

    #[test]
    fn loose_system_is_not_unique() {
        let u = Unknown::per_pair(p(5, 1), p(0, 0));
        let v = Unknown::per_pair(p(4, 2), p(0, 0));
        let src = Provenance { mu: p(0, 0), nu: p(0, 0), d: 0 };
        let mut sys = ConstraintSystem {
            rank: Rank::ring(3).unwrap(),
            mode: Mode::PerPair,
            unknowns: vec![u, v],
            constraints: vec![],
        };
        sys.push(AffineExpression::var(u), src);
        let mut e = AffineExpression::constant(rat(2));
        e.add_linear(u, rat(-1));
        e.add_linear(v, rat(-1));
        sys.push(e, src);
        sys.push(AffineExpression::var(v), src);
        let cert = certify_uniqueness(&sys, CertifyOptions::default()).unwrap();
        assert_eq!(cert.conclusion, Conclusion::NotUnique);
        assert_eq!(cert.intervals[0].1.to_string(), "[0, 2]");
        let w = cert.witness.as_ref().unwrap();
        assert_eq!(w[&u], rat(2));
        assert!(verify_certificate(&sys, &cert));

        let mut fake = cert.clone();
        fake.conclusion = Conclusion::UniqueZero;
        assert!(!verify_certificate(&sys, &fake));
    }

    #[test]
    fn unbounded_witness() {
        let u = Unknown::per_pair(p(5, 1), p(0, 0));
        let src = Provenance { mu: p(0, 0), nu: p(0, 0), d: 0 };
        let mut sys = ConstraintSystem {
            rank: Rank::ring(3).unwrap(),
            mode: Mode::PerPair,
            unknowns: vec![u],
            constraints: vec![],
        };
        sys.push(AffineExpression::var(u), src);
        let cert = certify_uniqueness(&sys, CertifyOptions::default()).unwrap();
        assert_eq!(cert.intervals[0].1.upper, None);
        assert_eq!(cert.witness.as_ref().unwrap()[&u], rat(1));
        assert!(verify_certificate(&sys, &cert));
    }

    #[test]
    fn document_round_trip() {
        let sys = build_constraints(table3(), Mode::PerMu).unwrap();
        let cert = certify_uniqueness(&sys, CertifyOptions::default()).unwrap();
        let doc = CertificateDocument::new(&sys, &cert);
        let json = serde_json::to_string(&doc).unwrap();
        assert!(verify_certificate_json(&json).unwrap());
        let (s2, c2) = doc.decode().unwrap();
        assert_eq!(s2, sys);
        assert_eq!(c2, cert);
    }

    #[test]
    fn cap_is_reported() {
        let sys = build_constraints(table3(), Mode::PerPair).unwrap();
        let res = certify_uniqueness(&sys, CertifyOptions { max_constraints: 1 });
        assert!(matches!(res, Err(Error::ResourceCap { limit: 1 })));
    }
}
