//! Exact coefficient arithmetic.
//!
//! Everything here is over `ℚ` with arbitrary-precision numerators and
//! denominators. Values are kept in canonical form: no stored zero
//! coefficients, rationals reduced with positive denominator.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::{PartitionIndex, Rank};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p"` or `"p/q"` with an optional leading `-` on `p`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidRational(s.to_string());
    let int = |t: &str| -> Result<BigInt> {
        let digits = t.strip_prefix('-').unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        t.parse::<BigInt>().map_err(|_| bad())
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(int(s)?)),
        Some((p, q)) => {
            if q.starts_with('-') {
                return Err(bad());
            }
            let (p, q) = (int(p)?, int(q)?);
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
    }
}

/// Serde adapter storing a [`Rational`] as a `"p/q"` string.
pub mod rational_string {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Polynomials in q

/// A polynomial in the quantum parameter with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QPolynomial {
    coeffs: BTreeMap<u32, Rational>,
}

impl QPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, c)
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// `c · q^k`.
    pub fn monomial(k: u32, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(k, c);
        p
    }

    pub fn q() -> Self {
        Self::monomial(1, Rational::one())
    }

    pub fn from_coeffs<I: IntoIterator<Item = (u32, Rational)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (k, c) in it {
            p.add_term(k, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: u32) -> Rational {
        self.coeffs.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn max_exponent(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn add_term(&mut self, k: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(k).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        QPolynomial {
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: u32) -> Self {
        QPolynomial {
            coeffs: self.coeffs.iter().map(|(e, v)| (e + k, v.clone())).collect(),
        }
    }

    /// Drops any zero entries. Values built through the public API are
    /// already normalized.
    pub fn normalized(&self) -> Self {
        QPolynomial::from_coeffs(self.coeffs.iter().map(|(k, c)| (*k, c.clone())))
    }
}

impl Add for &QPolynomial {
    type Output = QPolynomial;
    fn add(self, rhs: &QPolynomial) -> QPolynomial {
        let mut out = self.clone();
        for (k, c) in &rhs.coeffs {
            out.add_term(*k, c.clone());
        }
        out
    }
}

impl Sub for &QPolynomial {
    type Output = QPolynomial;
    fn sub(self, rhs: &QPolynomial) -> QPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &QPolynomial {
    type Output = QPolynomial;
    fn neg(self) -> QPolynomial {
        QPolynomial {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Mul for &QPolynomial {
    type Output = QPolynomial;
    fn mul(self, rhs: &QPolynomial) -> QPolynomial {
        let mut out = QPolynomial::zero();
        for (i, a) in &self.coeffs {
            for (j, b) in &rhs.coeffs {
                out.add_term(i + j, a * b);
            }
        }
        out
    }
}

impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().rev() {
            write_signed_term(f, c, &q_power(*k), first)?;
            first = false;
        }
        Ok(())
    }
}

fn q_power(k: u32) -> String {
    match k {
        0 => String::new(),
        1 => "q".to_string(),
        _ => format!("q^{k}"),
    }
}

/// Writes `± |c|·body`, omitting a unit coefficient when `body` is present.
fn write_signed_term(
    f: &mut fmt::Formatter<'_>,
    c: &Rational,
    body: &str,
    first: bool,
) -> fmt::Result {
    let neg = c.is_negative();
    match (first, neg) {
        (true, true) => write!(f, "-")?,
        (true, false) => {}
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
    }
    let abs = c.abs();
    if body.is_empty() {
        write!(f, "{}", format_rational(&abs))
    } else if abs.is_one() {
        write!(f, "{body}")
    } else {
        write!(f, "{}*{body}", format_rational(&abs))
    }
}

// ---------------------------------------------------------------------------
// Class vectors

/// A class `Σ p_ν(q) τ_ν` with polynomial coefficients, finitely supported on
/// the index set of a fixed rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassVector {
    rank: Rank,
    terms: BTreeMap<PartitionIndex, QPolynomial>,
}

impl ClassVector {
    pub fn zero(rank: Rank) -> Self {
        ClassVector { rank, terms: BTreeMap::new() }
    }

    /// The basis class `τ_λ`.
    pub fn basis(rank: Rank, lam: PartitionIndex) -> Result<Self> {
        lam.validate(rank)?;
        let mut v = Self::zero(rank);
        v.add_term(lam, 0, Rational::one());
        Ok(v)
    }

    /// Builds a vector from `(ν, q-exponent, coefficient)` triples, rejecting
    /// indices outside the index set.
    pub fn from_terms<I>(rank: Rank, it: I) -> Result<Self>
    where
        I: IntoIterator<Item = (PartitionIndex, u32, Rational)>,
    {
        let mut v = Self::zero(rank);
        for (nu, k, c) in it {
            nu.validate(rank)?;
            v.add_term(nu, k, c);
        }
        Ok(v)
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c · q^k · τ_ν`. An index outside the index set contributes zero.
    pub fn add_term(&mut self, nu: PartitionIndex, k: u32, c: Rational) {
        if c.is_zero() || !nu.is_valid(self.rank) {
            return;
        }
        let slot = self.terms.entry(nu).or_default();
        slot.add_term(k, c);
        if slot.is_zero() {
            self.terms.remove(&nu);
        }
    }

    /// Adds `p(q) · τ_ν`.
    pub fn add_poly(&mut self, nu: PartitionIndex, p: &QPolynomial) {
        for (k, c) in p.terms() {
            self.add_term(nu, k, c.clone());
        }
    }

    /// `self += scalar · q^shift · other`, assuming equal ranks.
    pub(crate) fn add_scaled(&mut self, other: &ClassVector, scalar: &Rational, shift: u32) {
        debug_assert_eq!(self.rank, other.rank);
        if scalar.is_zero() {
            return;
        }
        for (nu, p) in &other.terms {
            for (k, c) in p.terms() {
                self.add_term(*nu, k + shift, c * scalar);
            }
        }
    }

    fn check_rank(&self, other: &ClassVector) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                left: self.rank.get(),
                right: other.rank.get(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &ClassVector) -> Result<ClassVector> {
        self.check_rank(other)?;
        let mut out = self.clone();
        out.add_scaled(other, &Rational::one(), 0);
        Ok(out)
    }

    pub fn try_sub(&self, other: &ClassVector) -> Result<ClassVector> {
        self.check_rank(other)?;
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one(), 0);
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> ClassVector {
        let mut out = ClassVector::zero(self.rank);
        out.add_scaled(self, c, 0);
        out
    }

    pub fn mul_poly(&self, p: &QPolynomial) -> ClassVector {
        let mut out = ClassVector::zero(self.rank);
        for (k, c) in p.terms() {
            out.add_scaled(self, c, k);
        }
        out
    }

    /// Coefficient of `q^d τ_ν`; zero when absent.
    pub fn coefficient(&self, nu: PartitionIndex, d: u32) -> Rational {
        self.terms.get(&nu).map(|p| p.coeff(d)).unwrap_or_else(Rational::zero)
    }

    pub fn poly(&self, nu: PartitionIndex) -> Option<&QPolynomial> {
        self.terms.get(&nu)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PartitionIndex, &QPolynomial)> {
        self.terms.iter()
    }

    /// Flattened `(ν, d, c)` triples in basis order, then by q-exponent.
    pub fn triples(&self) -> impl Iterator<Item = (PartitionIndex, u32, &Rational)> + '_ {
        self.terms
            .iter()
            .flat_map(|(nu, p)| p.terms().map(move |(k, c)| (*nu, k, c)))
    }

    /// The common degree of every term (`|ν| + 2n·d`), or `None` when the
    /// vector is zero or not homogeneous.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let qd = self.rank.q_degree();
        let mut degs = self.triples().map(|(nu, k, _)| nu.degree() + qd * k as i64);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous_of(&self, degree: i64) -> bool {
        self.is_zero() || self.homogeneous_degree() == Some(degree)
    }

    pub fn max_q_exponent(&self) -> Option<u32> {
        self.terms.values().filter_map(|p| p.max_exponent()).max()
    }
}

impl fmt::Display for ClassVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (nu, k, c) in self.triples() {
            let q = q_power(k);
            let body = if q.is_empty() {
                format!("tau[{},{}]", nu.lambda1, nu.lambda2)
            } else {
                format!("{q}*tau[{},{}]", nu.lambda1, nu.lambda2)
            };
            write_signed_term(f, c, &body, first)?;
            first = false;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Affine expressions in deformation unknowns

/// A deformation unknown. `lambda` is `None` when the coefficient is shared
/// by every `λ` of the matching degree (the per-μ reading).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Unknown {
    pub lambda: Option<PartitionIndex>,
    pub mu: PartitionIndex,
}

impl Unknown {
    pub fn per_pair(lambda: PartitionIndex, mu: PartitionIndex) -> Self {
        Unknown { lambda: Some(lambda), mu }
    }

    pub fn per_mu(mu: PartitionIndex) -> Self {
        Unknown { lambda: None, mu }
    }
}

impl fmt::Display for Unknown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.lambda {
            Some(l) => write!(f, "a[{l};{}]", self.mu),
            None => write!(f, "a[{}]", self.mu),
        }
    }
}

/// `constant + Σ coeff·unknown`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AffineExpression {
    pub constant: Rational,
    linear: BTreeMap<Unknown, Rational>,
}

impl AffineExpression {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        AffineExpression { constant: c, linear: BTreeMap::new() }
    }

    pub fn var(u: Unknown) -> Self {
        Self::term(u, Rational::one())
    }

    pub fn term(u: Unknown, c: Rational) -> Self {
        let mut e = Self::zero();
        e.add_linear(u, c);
        e
    }

    pub fn add_linear(&mut self, u: Unknown, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.linear.entry(u).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.linear.remove(&u);
        }
    }

    pub fn linear(&self) -> &BTreeMap<Unknown, Rational> {
        &self.linear
    }

    pub fn coeff(&self, u: &Unknown) -> Rational {
        self.linear.get(u).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.linear.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.linear.is_empty() && self.constant.is_zero()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        AffineExpression {
            constant: &self.constant * c,
            linear: self.linear.iter().map(|(u, v)| (*u, v * c)).collect(),
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &AffineExpression, c: &Rational) {
        if c.is_zero() {
            return;
        }
        self.constant += &other.constant * c;
        for (u, v) in &other.linear {
            self.add_linear(*u, v * c);
        }
    }

    /// Value at an assignment; unknowns missing from it count as zero.
    pub fn evaluate(&self, values: &BTreeMap<Unknown, Rational>) -> Rational {
        let mut acc = self.constant.clone();
        for (u, c) in &self.linear {
            if let Some(v) = values.get(u) {
                acc += c * v;
            }
        }
        acc
    }
}

impl Add for &AffineExpression {
    type Output = AffineExpression;
    fn add(self, rhs: &AffineExpression) -> AffineExpression {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::one());
        out
    }
}

impl Sub for &AffineExpression {
    type Output = AffineExpression;
    fn sub(self, rhs: &AffineExpression) -> AffineExpression {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl Neg for &AffineExpression {
    type Output = AffineExpression;
    fn neg(self) -> AffineExpression {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for AffineExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if !self.constant.is_zero() || self.linear.is_empty() {
            write!(f, "{}", format_rational(&self.constant))?;
            first = false;
        }
        for (u, c) in &self.linear {
            write_signed_term(f, c, &u.to_string(), first)?;
            first = false;
        }
        Ok(())
    }
}

/// A class whose coefficients are affine in the deformation unknowns, keyed
/// by `(ν, q-exponent)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineClassVector {
    rank: Rank,
    terms: BTreeMap<(PartitionIndex, u32), AffineExpression>,
}

impl AffineClassVector {
    pub fn zero(rank: Rank) -> Self {
        AffineClassVector { rank, terms: BTreeMap::new() }
    }

    pub fn from_class(v: &ClassVector) -> Self {
        let mut out = Self::zero(v.rank());
        for (nu, k, c) in v.triples() {
            out.add(nu, k, &AffineExpression::constant(c.clone()));
        }
        out
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn add(&mut self, nu: PartitionIndex, k: u32, e: &AffineExpression) {
        if e.is_zero() || !nu.is_valid(self.rank) {
            return;
        }
        let slot = self.terms.entry((nu, k)).or_default();
        slot.add_scaled(e, &Rational::one());
        if slot.is_zero() {
            self.terms.remove(&(nu, k));
        }
    }

    /// `self += e · q^shift · v`.
    pub fn add_class_scaled(&mut self, v: &ClassVector, e: &AffineExpression, shift: u32) {
        for (nu, k, c) in v.triples() {
            self.add(nu, k + shift, &e.scale(c));
        }
    }

    pub fn coefficient(&self, nu: PartitionIndex, k: u32) -> AffineExpression {
        self.terms.get(&(nu, k)).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(PartitionIndex, u32), &AffineExpression)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Substitutes values for every unknown.
    pub fn evaluate(&self, values: &BTreeMap<Unknown, Rational>) -> ClassVector {
        let mut out = ClassVector::zero(self.rank);
        for ((nu, k), e) in &self.terms {
            out.add_term(*nu, *k, e.evaluate(values));
        }
        out
    }
}

impl fmt::Display for AffineClassVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((nu, k), e) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({e})")?;
            let q = q_power(*k);
            if !q.is_empty() {
                write!(f, "*{q}")?;
            }
            write!(f, "*s[{},{}]", nu.lambda1, nu.lambda2)?;
        }
        Ok(())
    }
}
