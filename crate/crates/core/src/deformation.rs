//! Quantum deformations of the Schubert basis.
//!
//! A deformation is a basis `{σ_λ}` with
//!
//! ```text
//! τ_λ = σ_λ + Σ_{|μ| + 2n = |λ|} a_{λ,μ} q σ_μ
//! ```
//!
//! No other powers of `q` can occur: `|λ| ≤ 4n-3 < 2·deg q`. Every `μ` in
//! the sum has `|μ| ≤ 2n-3`, so `σ_μ = τ_μ` and the change of basis is a
//! single closed-form step in each direction.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{
    rational_string, AffineClassVector, AffineExpression, ClassVector, Rational, Unknown,
};
use crate::error::{Error, Result};
use crate::index::{enumerate_basis, enumerate_degree, PartitionIndex, Rank};
use crate::ring::MultiplicationTable;

/// How deformation coefficients are indexed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// One coefficient `a_{λ,μ}` per pair.
    #[default]
    PerPair,
    /// One coefficient `a_μ` shared by every `λ` of degree `|μ| + 2n`.
    PerMu,
}

impl Mode {
    pub fn label(self) -> &'static str {
        match self {
            Mode::PerPair => "per-pair",
            Mode::PerMu => "per-mu",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// The `μ` paired with `λ` by a deformation: all classes of degree `|λ|-2n`.
pub fn partners(rank: Rank, lam: PartitionIndex) -> Vec<PartitionIndex> {
    enumerate_degree(rank, lam.degree() - rank.q_degree())
}

/// Every deformation unknown for `mode`, in a stable order.
pub fn unknowns(rank: Rank, mode: Mode) -> Vec<Unknown> {
    let basis = enumerate_basis(rank);
    match mode {
        Mode::PerPair => basis
            .iter()
            .flat_map(|lam| partners(rank, *lam).into_iter().map(|mu| Unknown::per_pair(*lam, mu)))
            .collect(),
        Mode::PerMu => basis
            .iter()
            .filter(|mu| !enumerate_degree(rank, mu.degree() + rank.q_degree()).is_empty())
            .map(|mu| Unknown::per_mu(*mu))
            .collect(),
    }
}

/// The unknown governing the `q σ_μ` term of `τ_λ` (`None` if the degrees
/// do not match).
pub fn unknown_for(rank: Rank, mode: Mode, lam: PartitionIndex, mu: PartitionIndex) -> Option<Unknown> {
    if mu.degree() + rank.q_degree() != lam.degree() || !lam.is_valid(rank) || !mu.is_valid(rank) {
        return None;
    }
    Some(match mode {
        Mode::PerPair => Unknown::per_pair(lam, mu),
        Mode::PerMu => Unknown::per_mu(mu),
    })
}

/// A concrete deformation with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationSpec {
    rank: Rank,
    mode: Mode,
    values: BTreeMap<Unknown, Rational>,
}

impl DeformationSpec {
    /// The trivial deformation `σ = τ`.
    pub fn zero(rank: Rank, mode: Mode) -> Result<Self> {
        rank.require_ring()?;
        Ok(DeformationSpec { rank, mode, values: BTreeMap::new() })
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Sets the coefficient of `q^j σ_μ` in the expansion of `τ_λ`. Only
    /// `j = 1` with `|μ| + 2n = |λ|` is admissible. In per-μ mode `lambda`
    /// may be omitted; when given it only selects the degree.
    pub fn set_term(
        &mut self,
        lambda: Option<PartitionIndex>,
        mu: PartitionIndex,
        q_power: u32,
        value: Rational,
    ) -> Result<()> {
        let bad = |m: String| Error::MalformedDeformation(m);
        if q_power != 1 {
            return Err(bad(format!("only q^1 terms exist, got q^{q_power}")));
        }
        mu.validate(self.rank)?;
        let unknown = match (self.mode, lambda) {
            (Mode::PerPair, None) => return Err(bad("per-pair entries need lambda".into())),
            (_, Some(lam)) => {
                lam.validate(self.rank)?;
                unknown_for(self.rank, self.mode, lam, mu).ok_or_else(|| {
                    bad(format!("|{mu}| + {} != |{lam}|", self.rank.q_degree()))
                })?
            }
            (Mode::PerMu, None) => {
                let u = Unknown::per_mu(mu);
                if !unknowns(self.rank, Mode::PerMu).contains(&u) {
                    return Err(bad(format!("no class has degree |{mu}| + {}", self.rank.q_degree())));
                }
                u
            }
        };
        if value.is_zero() {
            self.values.remove(&unknown);
        } else {
            self.values.insert(unknown, value);
        }
        Ok(())
    }

    pub fn set(&mut self, lambda: PartitionIndex, mu: PartitionIndex, value: Rational) -> Result<()> {
        self.set_term(Some(lambda), mu, 1, value)
    }

    /// Builds a spec from an assignment of unknowns.
    pub fn from_assignment(rank: Rank, mode: Mode, values: &BTreeMap<Unknown, Rational>) -> Result<Self> {
        let mut spec = Self::zero(rank, mode)?;
        let allowed = unknowns(rank, mode);
        for (u, v) in values {
            if !allowed.contains(u) {
                return Err(Error::MalformedDeformation(format!("{u} is not a {mode} unknown")));
            }
            if !v.is_zero() {
                spec.values.insert(*u, v.clone());
            }
        }
        Ok(spec)
    }

    pub fn assignment(&self) -> &BTreeMap<Unknown, Rational> {
        &self.values
    }

    /// `a_{λ,μ}`, zero when unset or when the degrees do not match.
    pub fn coefficient(&self, lam: PartitionIndex, mu: PartitionIndex) -> Rational {
        unknown_for(self.rank, self.mode, lam, mu)
            .and_then(|u| self.values.get(&u).cloned())
            .unwrap_or_else(Rational::zero)
    }

    /// `σ_λ` written in the τ basis: `τ_λ - Σ a_{λ,μ} q τ_μ`.
    pub fn sigma_in_tau(&self, lam: PartitionIndex) -> Result<ClassVector> {
        let mut v = ClassVector::basis(self.rank, lam)?;
        for mu in partners(self.rank, lam) {
            v.add_term(mu, 1, -self.coefficient(lam, mu));
        }
        Ok(v)
    }

    /// Every `σ_λ` in the τ basis.
    pub fn sigma_from_tau(&self) -> Result<BTreeMap<PartitionIndex, ClassVector>> {
        enumerate_basis(self.rank)
            .into_iter()
            .map(|lam| Ok((lam, self.sigma_in_tau(lam)?)))
            .collect()
    }

    /// Rewrites a τ-basis vector in σ coordinates.
    pub fn tau_to_sigma(&self, v: &ClassVector) -> Result<ClassVector> {
        self.check_rank(v)?;
        let mut out = ClassVector::zero(self.rank);
        for (nu, k, c) in v.triples() {
            out.add_term(nu, k, c.clone());
            for mu in partners(self.rank, nu) {
                out.add_term(mu, k + 1, c * self.coefficient(nu, mu));
            }
        }
        Ok(out)
    }

    /// Rewrites a vector given in σ coordinates back in the τ basis.
    pub fn sigma_to_tau(&self, v: &ClassVector) -> Result<ClassVector> {
        self.check_rank(v)?;
        let mut out = ClassVector::zero(self.rank);
        for (nu, k, c) in v.triples() {
            out.add_term(nu, k, c.clone());
            for mu in partners(self.rank, nu) {
                out.add_term(mu, k + 1, -(c * self.coefficient(nu, mu)));
            }
        }
        Ok(out)
    }

    fn check_rank(&self, v: &ClassVector) -> Result<()> {
        if v.rank() != self.rank {
            return Err(Error::RankMismatch { left: self.rank.get(), right: v.rank().get() });
        }
        Ok(())
    }

    /// `σ_{μ₁} ⋆ σ_{μ₂}` in σ coordinates.
    pub fn deformed_product(
        &self,
        table: &MultiplicationTable,
        mu1: PartitionIndex,
        mu2: PartitionIndex,
    ) -> Result<ClassVector> {
        if table.rank() != self.rank {
            return Err(Error::RankMismatch { left: self.rank.get(), right: table.rank().get() });
        }
        let prod = table.multiply(&self.sigma_in_tau(mu1)?, &self.sigma_in_tau(mu2)?)?;
        self.tau_to_sigma(&prod)
    }

    /// Positivity of every `σ₍₁,₁₎ ⋆ σ_μ` in the σ basis.
    pub fn check_condition_star(&self, table: &MultiplicationTable) -> Result<StarReport> {
        let mut violations = Vec::new();
        for mu in table.basis() {
            let prod = self.deformed_product(table, PartitionIndex::TAU11, *mu)?;
            for (nu, d, c) in prod.triples() {
                if c < &Rational::zero() {
                    violations.push(StarViolation { mu: *mu, nu, d, value: c.clone() });
                }
            }
        }
        Ok(StarReport { passes: violations.is_empty(), violations })
    }

    pub fn to_document(&self) -> SpecDocument {
        SpecDocument {
            n: self.rank.get(),
            mode: self.mode,
            entries: self
                .values
                .iter()
                .map(|(u, a)| SpecEntry { lambda: u.lambda, mu: u.mu, a: a.clone() })
                .collect(),
        }
    }

    pub fn from_document(doc: &SpecDocument) -> Result<Self> {
        let rank = Rank::ring(doc.n)?;
        let mut spec = Self::zero(rank, doc.mode)?;
        for e in &doc.entries {
            let key = match doc.mode {
                Mode::PerPair => e.lambda.map(|l| Unknown::per_pair(l, e.mu)),
                Mode::PerMu => Some(Unknown::per_mu(e.mu)),
            };
            if let Some(prev) = key.and_then(|k| spec.values.get(&k)) {
                if prev != &e.a {
                    return Err(Error::MalformedDeformation(format!(
                        "conflicting values for {}",
                        key.expect("checked")
                    )));
                }
            }
            spec.set_term(e.lambda, e.mu, 1, e.a.clone())?;
        }
        Ok(spec)
    }

    pub fn from_json(src: &str) -> Result<Self> {
        let doc: SpecDocument = serde_json::from_str(src)?;
        Self::from_document(&doc)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_document())?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarViolation {
    pub mu: PartitionIndex,
    pub nu: PartitionIndex,
    pub d: u32,
    #[serde(with = "rational_string")]
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarReport {
    pub passes: bool,
    pub violations: Vec<StarViolation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub n: u32,
    #[serde(default)]
    pub mode: Mode,
    pub entries: Vec<SpecEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<PartitionIndex>,
    pub mu: PartitionIndex,
    #[serde(with = "rational_string")]
    pub a: Rational,
}

// ---------------------------------------------------------------------------
// Symbolic deformation: coefficients are unknowns.

/// `σ_λ` in the τ basis with every coefficient left as an unknown.
pub fn symbolic_sigma(rank: Rank, mode: Mode, lam: PartitionIndex) -> Result<AffineClassVector> {
    let mut v = AffineClassVector::from_class(&ClassVector::basis(rank, lam)?);
    for mu in partners(rank, lam) {
        let u = unknown_for(rank, mode, lam, mu).expect("partner degrees match");
        v.add(mu, 1, &AffineExpression::term(u, -Rational::one()));
    }
    Ok(v)
}

/// Rewrites a symbolic τ-basis vector in σ coordinates. Fails with
/// [`Error::QuadraticTerm`] if an unknown would multiply an unknown.
pub fn symbolic_tau_to_sigma(
    mode: Mode,
    v: &AffineClassVector,
    context: PartitionIndex,
) -> Result<AffineClassVector> {
    let rank = v.rank();
    let mut out = AffineClassVector::zero(rank);
    for ((nu, k), e) in v.iter() {
        out.add(*nu, *k, e);
        for mu in partners(rank, *nu) {
            if !e.is_constant() {
                return Err(Error::QuadraticTerm { mu: context });
            }
            let u = unknown_for(rank, mode, *nu, mu).expect("partner degrees match");
            out.add(mu, k + 1, &AffineExpression::term(u, e.constant.clone()));
        }
    }
    Ok(out)
}

/// `τ_λ ⋆ v` for a symbolic `v`, through the table.
pub fn symbolic_multiply_basis(
    table: &MultiplicationTable,
    lam: PartitionIndex,
    v: &AffineClassVector,
) -> Result<AffineClassVector> {
    let mut out = AffineClassVector::zero(table.rank());
    for ((nu, k), e) in v.iter() {
        out.add_class_scaled(table.product(lam, *nu)?, e, *k);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, ratio};
    use proptest::prelude::*;
    use std::sync::OnceLock;

    fn table3() -> &'static MultiplicationTable {
        static T: OnceLock<MultiplicationTable> = OnceLock::new();
        T.get_or_init(|| MultiplicationTable::build(Rank::ring(3).unwrap()).unwrap())
    }

    fn p(a: i64, b: i64) -> PartitionIndex {
        PartitionIndex::new(a, b)
    }

    #[test]
    fn unknown_counts() {
        let r3 = Rank::ring(3).unwrap();
        assert_eq!(unknowns(r3, Mode::PerPair).len(), 8);
        assert_eq!(unknowns(r3, Mode::PerMu).len(), 6);
    }

    #[test]
    fn zero_spec_is_identity() {
        let t = table3();
        let spec = DeformationSpec::zero(t.rank(), Mode::PerPair).unwrap();
        for (lam, s) in spec.sigma_from_tau().unwrap() {
            assert_eq!(s, ClassVector::basis(t.rank(), lam).unwrap());
        }
        assert_eq!(
            spec.deformed_product(t, p(2, 1), p(3, 1)).unwrap(),
            *t.product(p(2, 1), p(3, 1)).unwrap()
        );
        assert!(spec.check_condition_star(t).unwrap().passes);
    }

    #[test]
    fn single_coefficient() {
        let t = table3();
        let mut spec = DeformationSpec::zero(t.rank(), Mode::PerPair).unwrap();
        spec.set(p(5, 1), p(0, 0), rat(1)).unwrap();
        let s = spec.sigma_from_tau().unwrap();
        let expected =
            ClassVector::from_terms(t.rank(), [(p(5, 1), 0, rat(1)), (p(0, 0), 1, rat(-1))]).unwrap();
        assert_eq!(s[&p(5, 1)], expected);
        for (lam, v) in &s {
            if *lam != p(5, 1) {
                assert_eq!(*v, ClassVector::basis(t.rank(), *lam).unwrap());
            }
        }
        for lam in enumerate_degree(t.rank(), 5) {
            assert_eq!(s[&lam], ClassVector::basis(t.rank(), lam).unwrap());
        }
    }

    #[test]
    fn negative_coefficient_breaks_positivity() {
        let t = table3();
        let mut spec = DeformationSpec::zero(t.rank(), Mode::PerPair).unwrap();
        spec.set(p(5, 1), p(0, 0), rat(-1)).unwrap();
        let prod = spec.deformed_product(t, p(1, 1), p(4, 0)).unwrap();
        let expected =
            ClassVector::from_terms(t.rank(), [(p(5, 1), 0, rat(1)), (p(0, 0), 1, rat(-1))]).unwrap();
        assert_eq!(prod, expected);
        let report = spec.check_condition_star(t).unwrap();
        assert!(!report.passes);
        assert!(report.violations.contains(&StarViolation {
            mu: p(4, 0),
            nu: p(0, 0),
            d: 1,
            value: rat(-1)
        }));
        for mu in t.basis() {
            let unit = spec.deformed_product(t, p(0, 0), *mu).unwrap();
            assert_eq!(unit, ClassVector::basis(t.rank(), *mu).unwrap());
        }
    }

    #[test]
    fn rejects_malformed_terms() {
        let mut spec = DeformationSpec::zero(Rank::ring(3).unwrap(), Mode::PerPair).unwrap();
        assert!(spec.set(p(5, 1), p(1, 0), rat(1)).is_err());
        assert!(spec.set_term(Some(p(5, 4)), p(0, 0), 2, rat(1)).is_err());
        assert!(spec.set_term(None, p(0, 0), 1, rat(1)).is_err());
        assert!(spec.set(p(2, 2), p(0, 0), rat(1)).is_err());
        let mut per_mu = DeformationSpec::zero(Rank::ring(3).unwrap(), Mode::PerMu).unwrap();
        assert!(per_mu.set_term(None, p(4, 0), 1, rat(1)).is_err());
        assert!(per_mu.set_term(None, p(2, 1), 1, rat(1)).is_ok());
    }

    #[test]
    fn per_mu_agrees_with_constant_per_pair() {
        let t = table3();
        let r = t.rank();
        let mut per_mu = DeformationSpec::zero(r, Mode::PerMu).unwrap();
        per_mu.set_term(None, p(1, 0), 1, ratio(3, 2)).unwrap();
        let mut per_pair = DeformationSpec::zero(r, Mode::PerPair).unwrap();
        for lam in enumerate_degree(r, 7) {
            per_pair.set(lam, p(1, 0), ratio(3, 2)).unwrap();
        }
        for mu in t.basis() {
            assert_eq!(
                per_mu.deformed_product(t, p(1, 1), *mu).unwrap(),
                per_pair.deformed_product(t, p(1, 1), *mu).unwrap()
            );
        }
    }

    #[test]
    fn document_round_trip() {
        let mut spec = DeformationSpec::zero(Rank::ring(3).unwrap(), Mode::PerPair).unwrap();
        spec.set(p(5, 2), p(1, 0), ratio(-1, 2)).unwrap();
        let json = spec.to_json().unwrap();
        assert!(json.contains("\"-1/2\""));
        assert_eq!(DeformationSpec::from_json(&json).unwrap(), spec);
        let clash = r#"{"n":3,"mode":"per-mu","entries":[{"mu":[1,0],"a":"1"},{"mu":[1,0],"a":"2"}]}"#;
        assert!(DeformationSpec::from_json(clash).is_err());
    }

    fn any_spec() -> impl Strategy<Value = DeformationSpec> {
        let us = unknowns(Rank::ring(3).unwrap(), Mode::PerPair);
        proptest::collection::vec((0..us.len(), -4i64..5, 1i64..4), 0..6).prop_map(move |v| {
            let mut values = BTreeMap::new();
            for (i, a, b) in v {
                values.insert(us[i], ratio(a, b));
            }
            DeformationSpec::from_assignment(Rank::ring(3).unwrap(), Mode::PerPair, &values).unwrap()
        })
    }

    proptest! {
        #[test]
        fn basis_change_round_trip(spec in any_spec(), i in 0usize..18, j in 0usize..18) {
            let t = table3();
            let v = t.product(t.basis()[i], t.basis()[j]).unwrap();
            let there = spec.tau_to_sigma(v).unwrap();
            prop_assert_eq!(&spec.sigma_to_tau(&there).unwrap(), v);
            let sigma = spec.sigma_in_tau(t.basis()[i]).unwrap();
            prop_assert_eq!(
                spec.tau_to_sigma(&sigma).unwrap(),
                ClassVector::basis(t.rank(), t.basis()[i]).unwrap()
            );
        }
    }
}
