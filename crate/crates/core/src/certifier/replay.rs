//! Replays the hand argument for uniqueness step by step.
//!
//! Every step multiplies a symbolic `σ_λ` by a power of `τ₍₁,₁₎` at the τ
//! level, converts the result to σ coordinates once at the end, and compares
//! it termwise with a closed-form prediction. Each coefficient of a matched
//! product is a nonnegativity fact about the unknowns; a small closure then
//! turns `x ≥ 0` plus `-(x + y + …) ≥ 0` (all summands known `≥ 0`) into
//! `x = y = … = 0`. Classes are processed by increasing degree and a step may
//! only rely on unknowns an earlier step already forced to zero.
//!
//! Only the per-pair reading is replayed; it is the finer one.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::algebra::{AffineClassVector, AffineExpression, ClassVector, Rational, Unknown};
use crate::deformation::{self, symbolic_multiply_basis, symbolic_sigma, symbolic_tau_to_sigma, Mode};
use crate::error::{Error, Result};
use crate::index::{enumerate_degree, PartitionIndex};
use crate::ring::MultiplicationTable;

use super::Conclusion;

/// What a replay step computes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepKind {
    /// `|λ| = 2n`, `λ₁ ≥ n+2`: `τ₍ₜ,ₜ₎ ⋆ σ_λ` pushes `σ_λ` onto the top row
    /// and the unknown shows up with a minus sign.
    TopRowShift,
    /// `λ = (n+1, n-1)`: the full power `τ₍₁,₁₎^{n-1}` does the same.
    MiddleFullPower,
    /// `|λ| = 2n`: `σ₍₁,₁₎ ⋆ σ_{(λ₁-1, λ₂-1)} = σ_λ + a q`.
    PieriLowerBound,
    /// `|λ| > 2n`: the same Pieri step, leaning on lower degrees being done.
    InductivePieri,
    /// `|λ| > 2n`: `τ₍₁,₁₎^t ⋆ σ_λ` with neighbouring unknowns collected.
    ShiftedProduct,
    /// The same product before collecting, one pair of classes per unknown.
    ShiftedProductExpanded,
}

impl StepKind {
    pub fn tag(self) -> &'static str {
        match self {
            StepKind::TopRowShift => "top-row-shift",
            StepKind::MiddleFullPower => "middle-full-power",
            StepKind::PieriLowerBound => "pieri-lower-bound",
            StepKind::InductivePieri => "inductive-pieri",
            StepKind::ShiftedProduct => "shifted-product",
            StepKind::ShiftedProductExpanded => "shifted-product-expanded",
        }
    }
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReplayStep {
    pub kind: StepKind,
    pub lambda: PartitionIndex,
    /// Power of `τ₍₁,₁₎` applied.
    pub t: u32,
    /// The predicted product in σ coordinates; matched the engine exactly.
    pub display: String,
}

/// `expr ≥ 0`, read off a matched product.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fact {
    pub step: usize,
    pub expr: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReplayReport {
    pub n: u32,
    pub steps: Vec<ReplayStep>,
    pub facts: Vec<Fact>,
    pub unknowns: Vec<Unknown>,
    pub zero: Vec<Unknown>,
    pub conclusion: Conclusion,
    /// Closed forms that only match after a correction, with the literal
    /// variant that was also tried.
    pub notes: Vec<String>,
}

impl ReplayReport {
    pub fn summary(&self) -> String {
        match self.conclusion {
            Conclusion::UniqueZero => format!("all {} unknowns zero", self.unknowns.len()),
            Conclusion::NotUnique => format!(
                "{} of {} unknowns forced to zero",
                self.zero.len(),
                self.unknowns.len()
            ),
        }
    }
}

fn p(a: i64, b: i64) -> PartitionIndex {
    PartitionIndex::new(a, b)
}

fn a(lam: PartitionIndex, mu: PartitionIndex) -> Unknown {
    Unknown::per_pair(lam, mu)
}

fn neg_var(u: Unknown) -> AffineExpression {
    AffineExpression::term(u, -Rational::one())
}

fn one() -> AffineExpression {
    AffineExpression::constant(Rational::one())
}

/// `(τ₍₁,₁₎)^t ⋆ σ_λ` with symbolic coefficients, in σ coordinates.
fn engine_power(table: &MultiplicationTable, t: u32, lam: PartitionIndex) -> Result<AffineClassVector> {
    let mut v = symbolic_sigma(table.rank(), Mode::PerPair, lam)?;
    for _ in 0..t {
        v = symbolic_multiply_basis(table, PartitionIndex::TAU11, &v)?;
    }
    symbolic_tau_to_sigma(Mode::PerPair, &v, lam)
}

/// `qA(λ)` where `A` is `σ_{λ₂+t}` or `σ_{(2n-1,-1)} + σ_{2n-2}`.
fn top_row_image(n: i64, lam: PartitionIndex, t: i64, out: &mut AffineClassVector) {
    let j = lam.lambda2 + t;
    if j == 2 * n - 2 {
        out.add(p(2 * n - 1, -1), 1, &one());
        out.add(p(2 * n - 2, 0), 1, &one());
    } else {
        out.add(p(j, 0), 1, &one());
    }
}

fn drop_zeroed(v: &AffineClassVector, zero: &BTreeSet<Unknown>) -> AffineClassVector {
    let mut out = AffineClassVector::zero(v.rank());
    for ((nu, k), e) in v.iter() {
        let mut kept = AffineExpression::constant(e.constant.clone());
        for (u, c) in e.linear() {
            if !zero.contains(u) {
                kept.add_linear(*u, c.clone());
            }
        }
        out.add(*nu, *k, &kept);
    }
    out
}

struct Replay<'a> {
    table: &'a MultiplicationTable,
    n: i64,
    steps: Vec<ReplayStep>,
    facts: Vec<(usize, AffineExpression)>,
    zero: BTreeSet<Unknown>,
    notes: Vec<String>,
}

impl<'a> Replay<'a> {
    fn record(
        &mut self,
        kind: StepKind,
        lam: PartitionIndex,
        t: u32,
        engine: &AffineClassVector,
        predicted: &AffineClassVector,
    ) -> Result<()> {
        if engine != predicted {
            return Err(Error::Mismatch {
                display: format!("{kind} at {lam}"),
                detail: format!("engine {engine}, predicted {predicted}"),
            });
        }
        let step = self.steps.len();
        self.steps.push(ReplayStep { kind, lambda: lam, t, display: predicted.to_string() });
        for (_, e) in predicted.iter() {
            if !e.is_constant() {
                self.facts.push((step, e.clone()));
            }
        }
        Ok(())
    }

    /// Compares against a form that is only checked, not relied on.
    fn note_literal(&mut self, kind: StepKind, lam: PartitionIndex, engine: &AffineClassVector, literal: &AffineClassVector) {
        if engine != literal {
            self.notes.push(format!(
                "{kind} at {lam}: literal form {literal} differs from the expansion; corrected form used"
            ));
        }
    }

    /// `|λ| = 2n` and `λ₁ ≥ n+2`.
    fn top_row_shift(&mut self, lam: PartitionIndex) -> Result<()> {
        let n = self.n;
        let t = 2 * n - lam.lambda1;
        let engine = engine_power(self.table, t as u32, lam)?;
        let mut predicted = AffineClassVector::zero(self.table.rank());
        top_row_image(n, lam, t, &mut predicted);
        predicted.add(p(t, t), 1, &neg_var(a(lam, PartitionIndex::UNIT)));
        self.record(StepKind::TopRowShift, lam, t as u32, &engine, &predicted)
    }

    /// `λ = (n+1, n-1)`.
    fn middle_full_power(&mut self, lam: PartitionIndex) -> Result<()> {
        let n = self.n;
        let engine = engine_power(self.table, (n - 1) as u32, lam)?;
        let mut predicted = AffineClassVector::zero(self.table.rank());
        predicted.add(p(2 * n - 1, -1), 1, &one());
        predicted.add(p(2 * n - 2, 0), 1, &one());
        predicted.add(p(n, n - 2), 1, &neg_var(a(lam, PartitionIndex::UNIT)));
        self.record(StepKind::MiddleFullPower, lam, (n - 1) as u32, &engine, &predicted)
    }

    /// `σ₍₁,₁₎ ⋆ σ_{(λ₁-1, λ₂-1)} = σ_λ + Σ a_{λ,μ} q σ_μ`.
    fn pieri(&mut self, kind: StepKind, lam: PartitionIndex) -> Result<()> {
        let rank = self.table.rank();
        let below = p(lam.lambda1 - 1, lam.lambda2 - 1);
        let used: Vec<Unknown> = deformation::partners(rank, below).into_iter().map(|mu| a(below, mu)).collect();
        if let Some(u) = used.iter().find(|u| !self.zero.contains(u)) {
            return Err(Error::Mismatch {
                display: format!("{kind} at {lam}"),
                detail: format!("needs {u} = 0, which no earlier step established"),
            });
        }
        let engine = drop_zeroed(&engine_power(self.table, 1, below)?, &self.zero);
        let mut predicted = AffineClassVector::zero(rank);
        predicted.add(lam, 0, &one());
        for mu in deformation::partners(rank, lam) {
            predicted.add(mu, 1, &AffineExpression::var(a(lam, mu)));
        }
        self.record(kind, lam, 1, &engine, &predicted)
    }

    /// `|λ| > 2n`: the collected and the expanded forms of `τ₍₁,₁₎^t ⋆ σ_λ`.
    fn shifted_product(&mut self, lam: PartitionIndex) -> Result<()> {
        let rank = self.table.rank();
        let n = self.n;
        let t = 2 * n - lam.lambda1;
        let m = lam.degree() - 2 * n;
        let s = 2 * t + m;
        let engine = engine_power(self.table, t as u32, lam)?;

        let mut base = AffineClassVector::zero(rank);
        top_row_image(n, lam, t, &mut base);
        let coeff = |mu: PartitionIndex| -> AffineExpression {
            if mu.is_valid(rank) {
                AffineExpression::var(a(lam, mu))
            } else {
                AffineExpression::zero()
            }
        };
        let minus = |e: &AffineExpression| -e;

        let mut collected = base.clone();
        let mut expanded = base.clone();
        if s <= 2 * n - 3 {
            for mu in deformation::partners(rank, lam) {
                collected.add(p(mu.lambda1 + t, mu.lambda2 + t), 1, &neg_var(a(lam, mu)));
            }
            expanded = collected.clone();
        } else if s == 2 * n - 1 {
            let ai = |i: i64| coeff(p(2 * n - 1 - 2 * t - i, i));
            let top = n - 1 - t;
            collected.add(p(2 * n - t, t - 1), 1, &minus(&ai(0)));
            for i in 0..top {
                let pair = &ai(i) + &ai(i + 1);
                collected.add(p(2 * n - 1 - t - i, t + i), 1, &minus(&pair));
            }
            let mut literal = collected.clone();
            collected.add(p(n, n - 1), 1, &minus(&ai(top)));
            literal.add(p(n + 1, n - 2), 1, &minus(&ai(top)));
            self.note_literal(StepKind::ShiftedProduct, lam, &engine, &literal);

            for i in 0..=top {
                expanded.add(p(2 * n - t - i, t - 1 + i), 1, &minus(&ai(i)));
                expanded.add(p(2 * n - 1 - t - i, t + i), 1, &minus(&ai(i)));
            }
        } else {
            debug_assert_eq!(s, 2 * n - 2);
            let bi = |i: i64| coeff(p(2 * n - 2 - 2 * t - i, i));
            let top = n - 1 - t;
            collected.add(p(2 * n - 1 - t, t - 1), 1, &minus(&bi(0)));
            for i in 0..top {
                let pair = &bi(i) + &bi(i + 1);
                collected.add(p(2 * n - 2 - t - i, t + i), 1, &minus(&pair));
            }

            for i in 0..top {
                expanded.add(p(2 * n - 1 - t - i, t - 1 + i), 1, &minus(&bi(i)));
                expanded.add(p(2 * n - 2 - t - i, t + i), 1, &minus(&bi(i)));
            }
            let mut literal = expanded.clone();
            expanded.add(p(n, n - 2), 1, &minus(&bi(top)));
            literal.add(p(n, n - 2), 0, &minus(&bi(top)));
            self.note_literal(StepKind::ShiftedProductExpanded, lam, &engine, &literal);
        }
        self.record(StepKind::ShiftedProductExpanded, lam, t as u32, &engine, &expanded)?;
        self.record(StepKind::ShiftedProduct, lam, t as u32, &engine, &collected)
    }

    fn has_lower_fact(&self, u: &Unknown) -> bool {
        self.facts.iter().any(|(_, e)| {
            let e = self.reduce(e);
            e.constant.is_zero() && e.linear().len() == 1 && e.coeff(u).is_positive()
        })
    }

    fn reduce(&self, e: &AffineExpression) -> AffineExpression {
        let mut out = AffineExpression::constant(e.constant.clone());
        for (u, c) in e.linear() {
            if !self.zero.contains(u) {
                out.add_linear(*u, c.clone());
            }
        }
        out
    }

    /// Applies `x ≥ 0, …, -(Σ c·x) ≥ 0 with c > 0 ⇒ every x = 0` to a fixpoint.
    fn close(&mut self) {
        loop {
            let mut grew = false;
            for i in 0..self.facts.len() {
                let e = self.reduce(&self.facts[i].1);
                if e.is_constant() || !e.constant.is_zero() {
                    continue;
                }
                if e.linear().values().any(|c| c.is_positive()) {
                    continue;
                }
                let vars: Vec<Unknown> = e.linear().keys().copied().collect();
                if vars.iter().all(|u| self.has_lower_fact(u)) {
                    self.zero.extend(vars);
                    grew = true;
                }
            }
            if !grew {
                return;
            }
        }
    }
}

/// Replays every step of the uniqueness argument against `table`.
pub fn replay_proof(table: &MultiplicationTable) -> Result<ReplayReport> {
    let rank = table.rank();
    rank.require_ring()?;
    let n = i64::from(rank.get());
    let mut r = Replay {
        table,
        n,
        steps: Vec::new(),
        facts: Vec::new(),
        zero: BTreeSet::new(),
        notes: Vec::new(),
    };

    for lam in enumerate_degree(rank, 2 * n) {
        if lam.lambda1 >= n + 2 {
            r.top_row_shift(lam)?;
        } else {
            r.middle_full_power(lam)?;
        }
    }
    for lam in enumerate_degree(rank, 2 * n) {
        r.pieri(StepKind::PieriLowerBound, lam)?;
    }
    r.close();

    for deg in 2 * n + 1..=rank.top_class().degree() {
        for lam in enumerate_degree(rank, deg) {
            r.pieri(StepKind::InductivePieri, lam)?;
            r.shifted_product(lam)?;
        }
        r.close();
    }

    let unknowns = deformation::unknowns(rank, Mode::PerPair);
    let zero: Vec<Unknown> = unknowns.iter().filter(|u| r.zero.contains(u)).copied().collect();
    let conclusion = if zero.len() == unknowns.len() {
        Conclusion::UniqueZero
    } else {
        Conclusion::NotUnique
    };
    Ok(ReplayReport {
        n: rank.get(),
        steps: r.steps,
        facts: r
            .facts
            .into_iter()
            .map(|(step, e)| Fact { step, expr: format!("{e} >= 0") })
            .collect(),
        unknowns,
        zero,
        conclusion,
        notes: r.notes,
    })
}

/// The τ-level half of a top-row step: `(τ₍₁,₁₎)^t ⋆ τ_λ` with no unknowns.
pub fn top_row_tau_image(table: &MultiplicationTable, lam: PartitionIndex) -> Result<(ClassVector, ClassVector)> {
    let rank = table.rank();
    let n = i64::from(rank.get());
    let t = 2 * n - lam.lambda1;
    let mut got = ClassVector::basis(rank, lam)?;
    for _ in 0..t {
        got = table.multiply(&ClassVector::basis(rank, PartitionIndex::TAU11)?, &got)?;
    }
    let mut predicted = AffineClassVector::zero(rank);
    top_row_image(n, lam, t, &mut predicted);
    Ok((got, predicted.evaluate(&BTreeMap::new())))
}
