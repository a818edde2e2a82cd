//! The quantum ring QH*(IG(2, 2n+1)) in the Schubert basis.
//!
//! The table is built from the two Pieri operators alone. Every basis class
//! is written as a combination `Σ r · q^k · τ₁^i · τ₍₁,₁₎^j` by exact
//! elimination inside its graded slice (`deg q = 2n`), and the product
//! `τ_λ ⋆ τ_μ` is then that combination of operators applied to `τ_μ`.
//! A class outside the span of the generator monomials is reported as
//! [`Error::GenerationFailure`].

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{format_rational, parse_rational, rat, ClassVector, Rational};
use crate::error::{Error, Result};
use crate::index::{enumerate_basis, enumerate_degree, PartitionIndex, Rank};
use crate::pieri::{self, Special};

/// A generator monomial `q^k · τ₁^i · τ₍₁,₁₎^j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial {
    pub tau1: u32,
    pub tau11: u32,
    pub q: u32,
}

impl Monomial {
    pub fn new(tau1: u32, tau11: u32, q: u32) -> Self {
        Monomial { tau1, tau11, q }
    }

    fn degree(self, rank: Rank) -> i64 {
        self.tau1 as i64 + 2 * self.tau11 as i64 + rank.q_degree() * self.q as i64
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.q {
            0 => {}
            1 => parts.push("q".to_string()),
            k => parts.push(format!("q^{k}")),
        }
        match self.tau1 {
            0 => {}
            1 => parts.push("tau1".to_string()),
            i => parts.push(format!("tau1^{i}")),
        }
        match self.tau11 {
            0 => {}
            1 => parts.push("tau11".to_string()),
            j => parts.push(format!("tau11^{j}")),
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// A basis class written as a polynomial in the two special classes.
pub type GeneratorExpression = BTreeMap<Monomial, Rational>;

type Coord = (u32, PartitionIndex);
type SparseVec = BTreeMap<Coord, Rational>;

/// Lazily computed `τ₁^i τ₍₁,₁₎^j ⋆ τ_μ` for a fixed `μ`.
struct OperatorImages {
    rank: Rank,
    cache: HashMap<(u32, u32), ClassVector>,
}

impl OperatorImages {
    fn new(rank: Rank, start: ClassVector) -> Self {
        let mut cache = HashMap::new();
        cache.insert((0, 0), start);
        OperatorImages { rank, cache }
    }

    fn get(&mut self, i: u32, j: u32) -> Result<&ClassVector> {
        if !self.cache.contains_key(&(i, j)) {
            let v = if i > 0 {
                let prev = self.get(i - 1, j)?.clone();
                pieri::apply(self.rank, Special::Tau1, &prev)?
            } else {
                let prev = self.get(0, j - 1)?.clone();
                pieri::apply(self.rank, Special::Tau11, &prev)?
            };
            self.cache.insert((i, j), v);
        }
        Ok(&self.cache[&(i, j)])
    }

    fn apply(&mut self, expr: &GeneratorExpression) -> Result<ClassVector> {
        let mut out = ClassVector::zero(self.rank);
        for (m, c) in expr {
            let img = self.get(m.tau1, m.tau11)?;
            out.add_scaled(img, c, m.q);
        }
        Ok(out)
    }
}

fn to_sparse(v: &ClassVector, shift: u32) -> SparseVec {
    v.triples().map(|(nu, k, c)| ((k + shift, nu), c.clone())).collect()
}

fn sparse_axpy(target: &mut SparseVec, row: &SparseVec, c: &Rational) {
    for (coord, v) in row {
        let slot = target.entry(*coord).or_insert_with(Rational::zero);
        *slot -= c * v;
        if slot.is_zero() {
            target.remove(coord);
        }
    }
}

fn combo_axpy(target: &mut GeneratorExpression, row: &GeneratorExpression, c: &Rational) {
    for (m, v) in row {
        let slot = target.entry(*m).or_insert_with(Rational::zero);
        *slot += c * v;
        if slot.is_zero() {
            target.remove(m);
        }
    }
}

/// Echelon basis of one graded slice, each row remembering the generator
/// monomials it came from.
struct SliceEchelon {
    rows: Vec<(Coord, SparseVec, GeneratorExpression)>,
}

impl SliceEchelon {
    fn reduce(&self, mut v: SparseVec, mut combo: GeneratorExpression) -> (SparseVec, GeneratorExpression) {
        for (pivot, row, row_combo) in &self.rows {
            if let Some(c) = v.get(pivot).cloned() {
                sparse_axpy(&mut v, row, &c);
                combo_axpy(&mut combo, row_combo, &-c);
            }
        }
        (v, combo)
    }

    fn insert(&mut self, v: SparseVec, m: Monomial) {
        let mut combo = GeneratorExpression::new();
        combo.insert(m, Rational::one());
        let (v, combo) = self.reduce(v, combo);
        if let Some((pivot, lead)) = v.iter().next().map(|(k, c)| (*k, c.clone())) {
            let inv = lead.recip();
            let v = v.into_iter().map(|(k, c)| (k, c * &inv)).collect();
            let combo = combo.into_iter().map(|(k, c)| (k, c * &inv)).collect();
            self.rows.push((pivot, v, combo));
        }
    }
}

/// Generator monomials of degree `d`, ordered with the fewest `q` and the
/// most `τ₍₁,₁₎` factors first.
fn monomials_of_degree(rank: Rank, d: i64) -> Vec<Monomial> {
    let mut out = Vec::new();
    let qd = rank.q_degree();
    let mut k = 0;
    while k * qd <= d {
        let rest = d - k * qd;
        for j in (0..=rest / 2).rev() {
            out.push(Monomial::new((rest - 2 * j) as u32, j as u32, k as u32));
        }
        k += 1;
    }
    out
}

/// All Schubert structure constants for one rank. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicationTable {
    rank: Rank,
    basis: Vec<PartitionIndex>,
    position: HashMap<PartitionIndex, usize>,
    /// `products[j(j+1)/2 + i]` is `τ_{basis[i]} ⋆ τ_{basis[j]}` for `i ≤ j`.
    products: Vec<ClassVector>,
    generators: BTreeMap<PartitionIndex, GeneratorExpression>,
}

fn tri(i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    j * (j + 1) / 2 + i
}

impl MultiplicationTable {
    pub fn build(rank: Rank) -> Result<Self> {
        rank.require_ring()?;
        let basis = enumerate_basis(rank);
        let position: HashMap<_, _> = basis.iter().enumerate().map(|(i, p)| (*p, i)).collect();

        let unit = ClassVector::basis(rank, PartitionIndex::UNIT)?;
        let mut unit_images = OperatorImages::new(rank, unit);
        let mut generators = BTreeMap::new();
        for d in 0..=rank.dimension() {
            let mut echelon = SliceEchelon { rows: Vec::new() };
            for m in monomials_of_degree(rank, d) {
                let v = to_sparse(unit_images.get(m.tau1, m.tau11)?, m.q);
                echelon.insert(v, m);
            }
            for lam in enumerate_degree(rank, d) {
                let mut target = SparseVec::new();
                target.insert((0, lam), Rational::one());
                let (rest, combo) = echelon.reduce(target, GeneratorExpression::new());
                if !rest.is_empty() {
                    return Err(Error::GenerationFailure { index: lam, degree: d });
                }
                // reduce() accumulates -Σ c·row; flip to express the target.
                let expr = combo.into_iter().map(|(m, c)| (m, -c)).collect();
                generators.insert(lam, expr);
            }
        }

        let mut products = vec![ClassVector::zero(rank); basis.len() * (basis.len() + 1) / 2];
        for (j, mu) in basis.iter().enumerate() {
            let mut images = OperatorImages::new(rank, ClassVector::basis(rank, *mu)?);
            for (i, lam) in basis.iter().enumerate().take(j + 1) {
                products[tri(i, j)] = images.apply(&generators[lam])?;
            }
        }

        let table = MultiplicationTable { rank, basis, position, products, generators };
        table.check_integral_homogeneous()?;
        Ok(table)
    }

    fn check_integral_homogeneous(&self) -> Result<()> {
        for (j, mu) in self.basis.iter().enumerate() {
            for (i, lam) in self.basis.iter().enumerate().take(j + 1) {
                let v = &self.products[tri(i, j)];
                if !v.is_homogeneous_of(lam.degree() + mu.degree()) {
                    return Err(Error::InvalidDocument(format!(
                        "product {lam} * {mu} is not homogeneous"
                    )));
                }
                for (nu, d, c) in v.triples() {
                    if !c.is_integer() {
                        return Err(Error::NonIntegral {
                            lambda: *lam,
                            mu: *mu,
                            nu,
                            d,
                            value: format_rational(c),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn basis(&self) -> &[PartitionIndex] {
        &self.basis
    }

    pub fn generator_expressions(&self) -> &BTreeMap<PartitionIndex, GeneratorExpression> {
        &self.generators
    }

    pub fn generator_expression(&self, lam: PartitionIndex) -> Option<&GeneratorExpression> {
        self.generators.get(&lam)
    }

    /// Number of stored products (unordered pairs).
    pub fn stored_products(&self) -> usize {
        self.products.len()
    }

    fn pos(&self, lam: PartitionIndex) -> Result<usize> {
        self.position.get(&lam).copied().ok_or(Error::InvalidIndex {
            index: lam,
            n: self.rank.get(),
        })
    }

    /// `τ_λ ⋆ τ_μ`.
    pub fn product(&self, lam: PartitionIndex, mu: PartitionIndex) -> Result<&ClassVector> {
        Ok(&self.products[tri(self.pos(lam)?, self.pos(mu)?)])
    }

    pub fn basis_class(&self, lam: PartitionIndex) -> Result<ClassVector> {
        ClassVector::basis(self.rank, lam)
    }

    fn check_rank(&self, v: &ClassVector) -> Result<()> {
        if v.rank() != self.rank {
            return Err(Error::RankMismatch {
                left: self.rank.get(),
                right: v.rank().get(),
            });
        }
        Ok(())
    }

    /// Bilinear extension of the table.
    pub fn multiply(&self, x: &ClassVector, y: &ClassVector) -> Result<ClassVector> {
        self.check_rank(x)?;
        self.check_rank(y)?;
        let mut out = ClassVector::zero(self.rank);
        for (lam, p) in x.iter() {
            for (mu, r) in y.iter() {
                let prod = self.product(*lam, *mu)?;
                let coeff = p * r;
                for (k, c) in coeff.terms() {
                    out.add_scaled(prod, c, k);
                }
            }
        }
        Ok(out)
    }

    /// `τ_λ ⋆ v`.
    pub fn multiply_basis(&self, lam: PartitionIndex, v: &ClassVector) -> Result<ClassVector> {
        self.multiply(&self.basis_class(lam)?, v)
    }

    /// `(τ₍₁,₁₎)^t` computed through the table.
    pub fn tau11_power(&self, t: u32) -> Result<ClassVector> {
        let mut cur = self.basis_class(PartitionIndex::UNIT)?;
        for _ in 0..t {
            cur = self.multiply_basis(PartitionIndex::TAU11, &cur)?;
        }
        Ok(cur)
    }

    /// Gromov–Witten structure constant `c_{λ,μ}^{ν,d}`.
    pub fn gw_constant(
        &self,
        lam: PartitionIndex,
        mu: PartitionIndex,
        nu: PartitionIndex,
        d: u32,
    ) -> Result<Rational> {
        nu.validate(self.rank)?;
        Ok(self.product(lam, mu)?.coefficient(nu, d))
    }

    /// Top-class coefficient of the classical part of `τ_λ ⋆ τ_μ`.
    pub fn poincare_pairing(&self, lam: PartitionIndex, mu: PartitionIndex) -> Result<Rational> {
        let prod = self.product(lam, mu)?;
        if lam.degree() + mu.degree() != self.rank.dimension() {
            return Ok(Rational::zero());
        }
        Ok(prod.coefficient(self.rank.top_class(), 0))
    }

    /// Iterates `(λ, μ, product)` over stored pairs, `λ ≤ μ` in basis order.
    pub fn iter_products(&self) -> impl Iterator<Item = (PartitionIndex, PartitionIndex, &ClassVector)> {
        self.basis.iter().enumerate().flat_map(move |(j, mu)| {
            self.basis[..=j]
                .iter()
                .enumerate()
                .map(move |(i, lam)| (*lam, *mu, &self.products[tri(i, j)]))
        })
    }

    /// First negative structure constant in basis order.
    pub fn has_negative_constant(&self) -> Option<NegativeWitness> {
        self.find_negative(|_, _| true)
    }

    /// First negative constant among pairs accepted by `filter`.
    pub fn find_negative<F>(&self, filter: F) -> Option<NegativeWitness>
    where
        F: Fn(PartitionIndex, PartitionIndex) -> bool,
    {
        self.iter_products()
            .filter(|(l, m, _)| filter(*l, *m))
            .find_map(|(lambda, mu, v)| {
                v.triples().find(|(_, _, c)| c.is_negative()).map(|(nu, d, c)| NegativeWitness {
                    lambda,
                    mu,
                    nu,
                    d,
                    value: c.clone(),
                })
            })
    }

    pub fn to_document(&self) -> TableDocument {
        TableDocument {
            version: TABLE_VERSION,
            n: self.rank.get(),
            basis: self.basis.clone(),
            products: self
                .iter_products()
                .map(|(lambda, mu, v)| ProductEntry {
                    lambda,
                    mu,
                    terms: v
                        .triples()
                        .map(|(nu, d, c)| TermEntry { nu, d, coeff: format_rational(c) })
                        .collect(),
                })
                .collect(),
            generators: self
                .generators
                .iter()
                .map(|(lam, expr)| GeneratorEntry {
                    lambda: *lam,
                    terms: expr
                        .iter()
                        .map(|(m, c)| MonomialEntry {
                            tau1: m.tau1,
                            tau11: m.tau11,
                            q: m.q,
                            coeff: format_rational(c),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_document())?)
    }

    /// Loads a cached table. Structural checks (basis, keys, homogeneity,
    /// integrality) always run; `revalidate` additionally checks the unit
    /// law, agreement with both Pieri rules, compatibility with both
    /// generators, and the stored generator expressions.
    pub fn from_document(doc: &TableDocument, revalidate: bool) -> Result<Self> {
        let bad = |m: String| Error::InvalidDocument(m);
        if doc.version != TABLE_VERSION {
            return Err(bad(format!("unsupported version {}", doc.version)));
        }
        let rank = Rank::ring(doc.n)?;
        let basis = enumerate_basis(rank);
        if doc.basis != basis {
            return Err(bad("basis does not match the index set".into()));
        }
        let position: HashMap<_, _> = basis.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let look = |p: PartitionIndex| {
            position
                .get(&p)
                .copied()
                .ok_or_else(|| bad(format!("index {p} is not a class for n={}", doc.n)))
        };

        let mut slots: Vec<Option<ClassVector>> = vec![None; basis.len() * (basis.len() + 1) / 2];
        for entry in &doc.products {
            let (i, j) = (look(entry.lambda)?, look(entry.mu)?);
            if i > j {
                return Err(bad(format!("pair {} {} stored out of order", entry.lambda, entry.mu)));
            }
            let mut v = ClassVector::zero(rank);
            for t in &entry.terms {
                look(t.nu)?;
                let c = parse_rational(&t.coeff)?;
                if c.is_zero() || v.coefficient(t.nu, t.d) != Rational::zero() {
                    return Err(bad(format!("zero or repeated term in {} {}", entry.lambda, entry.mu)));
                }
                v.add_term(t.nu, t.d, c);
            }
            let slot = &mut slots[tri(i, j)];
            if slot.is_some() {
                return Err(bad(format!("duplicate pair {} {}", entry.lambda, entry.mu)));
            }
            *slot = Some(v);
        }
        let products = slots
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| bad("missing products".into()))?;

        let mut generators = BTreeMap::new();
        for g in &doc.generators {
            look(g.lambda)?;
            let mut expr = GeneratorExpression::new();
            for m in &g.terms {
                let c = parse_rational(&m.coeff)?;
                let mono = Monomial::new(m.tau1, m.tau11, m.q);
                if c.is_zero() || mono.degree(rank) != g.lambda.degree() || expr.insert(mono, c).is_some() {
                    return Err(bad(format!("bad generator expression for {}", g.lambda)));
                }
            }
            if generators.insert(g.lambda, expr).is_some() {
                return Err(bad(format!("duplicate generator expression for {}", g.lambda)));
            }
        }
        if generators.len() != basis.len() {
            return Err(bad("missing generator expressions".into()));
        }

        let table = MultiplicationTable { rank, basis, position, products, generators };
        table.check_integral_homogeneous()?;
        if revalidate {
            table.revalidate()?;
        }
        Ok(table)
    }

    pub fn from_json(src: &str, revalidate: bool) -> Result<Self> {
        let doc: TableDocument = serde_json::from_str(src)?;
        Self::from_document(&doc, revalidate)
    }

    /// Checks that pins the table down uniquely: the unit law, agreement with
    /// the Pieri rules, `τ_λ ⋆ (g ⋆ τ_μ) = g ⋆ (τ_λ ⋆ τ_μ)` for both
    /// generators `g`, and that each stored generator expression evaluates
    /// to its class.
    pub fn revalidate(&self) -> Result<()> {
        let bad = |m: String| Error::InvalidDocument(m);
        let rank = self.rank;
        let unit = self.basis_class(PartitionIndex::UNIT)?;
        for lam in &self.basis {
            let tau = self.basis_class(*lam)?;
            if self.product(PartitionIndex::UNIT, *lam)? != &tau {
                return Err(bad(format!("unit law fails at {lam}")));
            }
            if self.product(PartitionIndex::TAU1, *lam)? != &pieri::pieri_tau1(rank, *lam)?
                || self.product(PartitionIndex::TAU11, *lam)? != &pieri::pieri_tau11(rank, *lam)?
            {
                return Err(bad(format!("Pieri rule disagrees at {lam}")));
            }
            let mut images = OperatorImages::new(rank, unit.clone());
            if images.apply(&self.generators[lam])? != tau {
                return Err(bad(format!("generator expression for {lam} is wrong")));
            }
        }
        for lam in &self.basis {
            for mu in &self.basis {
                let prod = self.product(*lam, *mu)?;
                for g in [Special::Tau1, Special::Tau11] {
                    let left = self.multiply_basis(*lam, &pieri::apply(rank, g, &self.basis_class(*mu)?)?)?;
                    let right = pieri::apply(rank, g, prod)?;
                    if left != right {
                        return Err(bad(format!("{lam} * {mu} is not compatible with {:?}", g)));
                    }
                }
            }
        }
        Ok(())
    }

    /// Pairing matrix between degree `d` and degree `4n-3-d`.
    pub fn pairing_matrix(&self, d: i64) -> Result<Vec<Vec<Rational>>> {
        let rows = enumerate_degree(self.rank, d);
        let cols = enumerate_degree(self.rank, self.rank.dimension() - d);
        rows.iter()
            .map(|l| cols.iter().map(|m| self.poincare_pairing(*l, *m)).collect())
            .collect()
    }
}

/// Rank of a rational matrix by exact elimination.
pub fn matrix_rank(mut m: Vec<Vec<Rational>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for r in 0..rows {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &pivot;
                for k in c..cols {
                    let delta = &f * &m[rank][k];
                    m[r][k] -= delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NegativeWitness {
    pub lambda: PartitionIndex,
    pub mu: PartitionIndex,
    pub nu: PartitionIndex,
    pub d: u32,
    #[serde(with = "crate::algebra::rational_string")]
    pub value: Rational,
}

pub const TABLE_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableDocument {
    pub version: u32,
    pub n: u32,
    pub basis: Vec<PartitionIndex>,
    pub products: Vec<ProductEntry>,
    pub generators: Vec<GeneratorEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductEntry {
    pub lambda: PartitionIndex,
    pub mu: PartitionIndex,
    pub terms: Vec<TermEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermEntry {
    pub nu: PartitionIndex,
    pub d: u32,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorEntry {
    pub lambda: PartitionIndex,
    pub terms: Vec<MonomialEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonomialEntry {
    pub tau1: u32,
    pub tau11: u32,
    pub q: u32,
    pub coeff: String,
}

// ---------------------------------------------------------------------------
// Identity suite for products of τ₍₁,₁₎

/// Identities for powers of τ₍₁,₁₎.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IdentityPart {
    /// `τ_{(t,t)} = τ₍₁,₁₎^t` for `t ≤ n-2`.
    #[serde(rename = "diagonal-powers")]
    PowersAreDiagonal,
    /// `τ₍₁,₁₎^t ⋆ τ_λ = q τ_{λ₂+t}` for `|λ| ≥ 2n`, `t = 2n-λ₁`, `λ₂+t ≠ 2n-2`.
    #[serde(rename = "quantum-single")]
    QuantumSingle,
    /// As above with `λ₂+t = 2n-2`: `q τ_{(2n-1,-1)} + q τ_{2n-2}`.
    #[serde(rename = "quantum-pair")]
    QuantumPair,
    /// `τ₍₁,₁₎^{n-1} = τ_{(n,n-2)}`.
    #[serde(rename = "full-power")]
    TopPower,
    /// `τ₍₁,₁₎^t ⋆ τ_μ = τ_{(μ₁+t,μ₂+t)}` for `2t+|μ| ≤ 2n-3`, `t ≤ n-2`.
    #[serde(rename = "shift")]
    Shift,
    /// `τ₍₁,₁₎^t ⋆ τ_μ = τ_{(μ₁+t+1,μ₂+t-1)} + τ_{(μ₁+t,μ₂+t)}` for
    /// `2t+|μ| ∈ {2n-2, 2n-1}`, `1 ≤ t ≤ n-2`.
    #[serde(rename = "shift-split")]
    ShiftSplit,
}

impl IdentityPart {
    pub const ALL: [IdentityPart; 6] = [
        IdentityPart::PowersAreDiagonal,
        IdentityPart::QuantumSingle,
        IdentityPart::QuantumPair,
        IdentityPart::TopPower,
        IdentityPart::Shift,
        IdentityPart::ShiftSplit,
    ];

    pub fn label(self) -> &'static str {
        match self {
            IdentityPart::PowersAreDiagonal => "diagonal-powers",
            IdentityPart::QuantumSingle => "quantum-single",
            IdentityPart::QuantumPair => "quantum-pair",
            IdentityPart::TopPower => "full-power",
            IdentityPart::Shift => "shift",
            IdentityPart::ShiftSplit => "shift-split",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.label() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub instance: String,
    pub expected: String,
    pub got: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub part: IdentityPart,
    pub checked: usize,
    pub holds: bool,
    pub counterexamples: Vec<Counterexample>,
}

impl MultiplicationTable {
    /// Checks one identity part over its whole parameter range.
    pub fn verify_identity(&self, part: IdentityPart) -> Result<IdentityReport> {
        let rank = self.rank;
        let n = rank.n();
        let mut checked = 0;
        let mut bad = Vec::new();
        let mut record = |instance: String, expected: String, got: String, ok: bool| {
            checked += 1;
            if !ok {
                bad.push(Counterexample { instance, expected, got });
            }
        };
        let mut check = |instance: String, expected: ClassVector, got: ClassVector| {
            let ok = expected == got;
            record(instance, expected.to_string(), got.to_string(), ok);
        };
        let class = |terms: &[(i64, i64, u32)]| {
            let mut v = ClassVector::zero(rank);
            for &(a, b, k) in terms {
                v.add_term(PartitionIndex::new(a, b), k, rat(1));
            }
            v
        };
        let powers: Vec<ClassVector> =
            (0..n as u32).map(|t| self.tau11_power(t)).collect::<Result<_>>()?;

        match part {
            IdentityPart::PowersAreDiagonal => {
                for t in 0..=(n - 2) {
                    check(format!("t={t}"), class(&[(t, t, 0)]), powers[t as usize].clone());
                }
            }
            IdentityPart::QuantumSingle | IdentityPart::QuantumPair => {
                for lam in self.basis.iter().filter(|l| l.degree() >= 2 * n) {
                    let t = 2 * n - lam.lambda1;
                    let pair = lam.lambda2 + t == 2 * n - 2;
                    if pair != (part == IdentityPart::QuantumPair) {
                        continue;
                    }
                    let expected = if pair {
                        class(&[(2 * n - 1, -1, 1), (2 * n - 2, 0, 1)])
                    } else {
                        class(&[(lam.lambda2 + t, 0, 1)])
                    };
                    let got = self.multiply_basis(*lam, &powers[t as usize])?;
                    check(format!("lambda={lam}, t={t}"), expected, got);
                }
            }
            IdentityPart::TopPower => {
                check(
                    format!("t={}", n - 1),
                    class(&[(n, n - 2, 0)]),
                    powers[(n - 1) as usize].clone(),
                );
            }
            IdentityPart::Shift | IdentityPart::ShiftSplit => {
                for t in 1..=(n - 2) {
                    for mu in &self.basis {
                        let total = 2 * t + mu.degree();
                        let expected = if part == IdentityPart::Shift {
                            if total > 2 * n - 3 {
                                continue;
                            }
                            class(&[(mu.lambda1 + t, mu.lambda2 + t, 0)])
                        } else {
                            if total != 2 * n - 2 && total != 2 * n - 1 {
                                continue;
                            }
                            class(&[
                                (mu.lambda1 + t + 1, mu.lambda2 + t - 1, 0),
                                (mu.lambda1 + t, mu.lambda2 + t, 0),
                            ])
                        };
                        let got = self.multiply_basis(*mu, &powers[t as usize])?;
                        check(format!("t={t}, mu={mu}"), expected, got);
                    }
                }
            }
        }
        Ok(IdentityReport {
            part,
            checked,
            holds: bad.is_empty(),
            counterexamples: bad,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn t(n: u32) -> MultiplicationTable {
        MultiplicationTable::build(Rank::ring(n).unwrap()).unwrap()
    }

    fn p(a: i64, b: i64) -> PartitionIndex {
        PartitionIndex::new(a, b)
    }

    #[test]
    fn build_n3_shape() {
        let t3 = t(3);
        assert_eq!(t3.stored_products(), 18 * 19 / 2);
        for (l, m, v) in t3.iter_products() {
            assert!(v.is_homogeneous_of(l.degree() + m.degree()));
            assert!(v.max_q_exponent().unwrap_or(0) <= 3);
        }
        let expr = t3.generator_expression(p(3, 1)).unwrap();
        assert_eq!(expr.get(&Monomial::new(0, 2, 0)), Some(&rat(1)));
    }

    #[test]
    fn diagonal_generators_are_pure_powers() {
        for n in 3..=6 {
            let tab = t(n);
            for k in 0..=(n as i64 - 2) {
                let expr = tab.generator_expression(p(k, k)).unwrap();
                assert_eq!(expr.len(), 1);
                assert_eq!(expr.get(&Monomial::new(0, k as u32, 0)), Some(&rat(1)));
            }
        }
    }

    #[test]
    fn product_examples() {
        let t3 = t(3);
        let x = t3.basis_class(p(5, 2)).unwrap();
        let got = t3.multiply_basis(PartitionIndex::TAU11, &x).unwrap();
        assert_eq!(got, ClassVector::from_terms(t3.rank(), [(p(3, 0), 1, rat(1))]).unwrap());

        // τ₍₃,₁₎ = τ₍₁,₁₎², so τ₍₃,₁₎² is four applications of the rule.
        let unit = t3.basis_class(PartitionIndex::UNIT).unwrap();
        let oracle = pieri::iterate_tau11(t3.rank(), 4, &unit).unwrap();
        assert_eq!(t3.product(p(3, 1), p(3, 1)).unwrap(), &oracle);
        assert_eq!(oracle, t3.basis_class(p(5, 3)).unwrap());
    }

    #[test]
    fn gw_examples() {
        let t3 = t(3);
        assert_eq!(t3.gw_constant(p(1, 1), p(5, 2), p(3, 0), 1).unwrap(), rat(1));
        assert_eq!(t3.gw_constant(p(1, 0), p(1, 0), p(2, 0), 0).unwrap(), rat(1));
        assert_eq!(t3.gw_constant(p(1, 1), p(5, 2), p(3, 0), 0).unwrap(), rat(0));
        assert!(t3.gw_constant(p(2, 2), p(1, 0), p(3, 0), 0).is_err());
    }

    #[test]
    fn pairing_examples() {
        let t3 = t(3);
        assert_eq!(t3.poincare_pairing(p(0, 0), p(5, 4)).unwrap(), rat(1));
        assert_eq!(t3.poincare_pairing(p(1, 0), p(5, 4)).unwrap(), rat(0));
        assert_eq!(t3.poincare_pairing(p(1, 0), p(5, 3)).unwrap(), rat(1));
    }

    #[test]
    fn rank_mismatch() {
        let t3 = t(3);
        let other = ClassVector::basis(Rank::ring(4).unwrap(), PartitionIndex::UNIT).unwrap();
        assert!(matches!(t3.multiply(&other, &other), Err(Error::RankMismatch { .. })));
    }

    #[test]
    fn identity_examples() {
        let t3 = t(3);
        assert!(t3.verify_identity(IdentityPart::TopPower).unwrap().holds);
        let r = t3.verify_identity(IdentityPart::QuantumPair).unwrap();
        assert!(r.holds && r.checked > 0);
        let prod = t3.multiply_basis(p(5, 3), &t3.tau11_power(1).unwrap()).unwrap();
        assert_eq!(
            prod,
            ClassVector::from_terms(t3.rank(), [(p(5, -1), 1, rat(1)), (p(4, 0), 1, rat(1))]).unwrap()
        );
        assert!(t(4).verify_identity(IdentityPart::ShiftSplit).unwrap().holds);
    }

    #[test]
    fn negativity() {
        for n in [3, 4] {
            let tab = t(n);
            let w = tab.has_negative_constant().expect("negative constant");
            assert!(w.value < rat(0));
            assert_eq!(tab.gw_constant(w.lambda, w.mu, w.nu, w.d).unwrap(), w.value);
            let special = |l: PartitionIndex, m: PartitionIndex| {
                [PartitionIndex::TAU1, PartitionIndex::TAU11].contains(&l)
                    || [PartitionIndex::TAU1, PartitionIndex::TAU11].contains(&m)
            };
            assert!(tab.find_negative(special).is_none());
        }
    }

    #[test]
    fn document_round_trip() {
        let t3 = t(3);
        let json = t3.to_json().unwrap();
        let back = MultiplicationTable::from_json(&json, true).unwrap();
        assert_eq!(back, t3);
        assert_eq!(back.to_json().unwrap(), json);
    }

    #[test]
    fn tampered_document_rejected() {
        let t3 = t(3);
        let mut doc = t3.to_document();
        let entry = doc
            .products
            .iter_mut()
            .find(|e| e.lambda == p(2, 1) && e.mu == p(3, 1))
            .unwrap();
        entry.terms[0].coeff = "7".into();
        assert!(MultiplicationTable::from_document(&doc, true).is_err());

        let mut doc = t3.to_document();
        doc.products.pop();
        assert!(MultiplicationTable::from_document(&doc, false).is_err());

        let mut doc = t3.to_document();
        doc.version = 99;
        assert!(MultiplicationTable::from_document(&doc, false).is_err());
    }

    #[test]
    fn matrix_rank_small() {
        let m = vec![vec![rat(1), rat(2)], vec![rat(2), rat(4)]];
        assert_eq!(matrix_rank(m), 1);
        let m = vec![vec![rat(0), rat(1)], vec![rat(1), rat(0)]];
        assert_eq!(matrix_rank(m), 2);
    }
}
