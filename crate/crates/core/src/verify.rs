//! Invariant suites run against a built table.
//!
//! Each suite returns a [`SuiteReport`] with the number of instances checked
//! and a readable line per failure. Associativity on sampled triples fans out
//! over threads; the sample itself is drawn up front from a fixed seed, so
//! reports are identical run to run.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{ClassVector, Rational};
use crate::error::Result;
use crate::index::{betti_profile, enumerate_basis, PartitionIndex, Rank};
use crate::pieri::{apply, Special};
use crate::ring::{matrix_rank, IdentityPart, Monomial, MultiplicationTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// The identities for powers of `τ₍₁,₁₎`.
    Identities,
    /// Unit, commutativity and associativity.
    Assoc,
    /// Poincaré pairing is nondegenerate in every degree.
    Pairing,
    /// Degree profile, its symmetry and the top class.
    Betti,
    /// Some structure constant is negative.
    Negativity,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Identities, Suite::Assoc, Suite::Pairing, Suite::Betti, Suite::Negativity];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Assoc => "assoc",
            Suite::Pairing => "pairing",
            Suite::Betti => "betti",
            Suite::Negativity => "negativity",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub n: u32,
    pub checked: usize,
    pub passed: bool,
    pub details: Vec<String>,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(suite: Suite, rank: Rank) -> Self {
        SuiteReport { suite, n: rank.get(), checked: 0, passed: true, details: Vec::new(), failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.passed = false;
            self.failures.push(what());
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AssocOptions {
    /// Ranks up to this one are checked on every triple.
    pub exhaustive_up_to: u32,
    pub samples: usize,
    pub seed: u64,
}

impl Default for AssocOptions {
    fn default() -> Self {
        AssocOptions { exhaustive_up_to: 3, samples: 10_000, seed: 0x05c_0ffee }
    }
}

pub fn run(table: &MultiplicationTable, suite: Suite) -> Result<SuiteReport> {
    match suite {
        Suite::Identities => identities(table),
        Suite::Assoc => assoc(table, AssocOptions::default()),
        Suite::Pairing => pairing(table),
        Suite::Betti => Ok(betti(table.rank())),
        Suite::Negativity => Ok(negativity(table)),
    }
}

pub fn identities(table: &MultiplicationTable) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(Suite::Identities, table.rank());
    for part in IdentityPart::ALL {
        let r = table.verify_identity(part)?;
        rep.checked += r.checked;
        rep.details.push(format!("{}: {} instances, {} counterexamples", part.label(), r.checked, r.counterexamples.len()));
        for c in r.counterexamples {
            rep.passed = false;
            rep.failures.push(format!("{}: {}: expected {}, got {}", part.label(), c.instance, c.expected, c.got));
        }
    }
    Ok(rep)
}

/// `g(τ₁, τ₍₁,₁₎) ⋆ v` for every monomial `g` needed, through the Pieri
/// rules only.
struct PieriImages {
    rank: Rank,
    start: ClassVector,
    cache: BTreeMap<(u32, u32), ClassVector>,
}

impl PieriImages {
    fn new(rank: Rank, start: ClassVector) -> Self {
        PieriImages { rank, start, cache: BTreeMap::new() }
    }

    fn get(&mut self, i: u32, j: u32) -> Result<&ClassVector> {
        if !self.cache.contains_key(&(i, j)) {
            let v = match (i, j) {
                (0, 0) => self.start.clone(),
                (0, j) => apply(self.rank, Special::Tau11, &self.get(0, j - 1)?.clone())?,
                (i, j) => apply(self.rank, Special::Tau1, &self.get(i - 1, j)?.clone())?,
            };
            self.cache.insert((i, j), v);
        }
        Ok(&self.cache[&(i, j)])
    }

    fn apply(&mut self, expr: &BTreeMap<Monomial, Rational>) -> Result<ClassVector> {
        let mut out = ClassVector::zero(self.rank);
        for (m, c) in expr {
            let img = self.get(m.tau1, m.tau11)?.clone();
            for (nu, k, r) in img.triples() {
                out.add_term(nu, k + m.q, r * c);
            }
        }
        Ok(out)
    }
}

/// Unit and commutativity over all pairs, associativity over all triples up
/// to `exhaustive_up_to` and a seeded sample beyond.
///
/// Commutativity is checked on the Pieri side: writing `τ_λ` as a
/// polynomial `g_λ` in the two special classes, `g_λ ⋆ τ_μ` and `g_μ ⋆ τ_λ`
/// are expanded by the rules alone and must agree with each other and with
/// the stored product.
pub fn assoc(table: &MultiplicationTable, opts: AssocOptions) -> Result<SuiteReport> {
    let rank = table.rank();
    let basis = table.basis().to_vec();
    let mut rep = SuiteReport::new(Suite::Assoc, rank);

    let unit = table.basis_class(PartitionIndex::UNIT)?;
    for lam in &basis {
        let v = table.basis_class(*lam)?;
        rep.check(table.multiply(&unit, &v)? == v, || format!("unit law fails on {lam}"));
    }

    let mut images: Vec<PieriImages> =
        basis.iter().map(|m| Ok(PieriImages::new(rank, table.basis_class(*m)?))).collect::<Result<_>>()?;
    let mut unit_images = PieriImages::new(rank, unit.clone());
    for (i, lam) in basis.iter().enumerate() {
        let g = table.generator_expression(*lam).expect("every class has an expression");
        rep.check(unit_images.apply(g)? == table.basis_class(*lam)?, || {
            format!("expression for {lam} does not evaluate to it")
        });
        for (j, mu) in basis.iter().enumerate().skip(i) {
            let h = table.generator_expression(*mu).expect("every class has an expression");
            let left = images[j].apply(g)?;
            let right = images[i].apply(h)?;
            let stored = table.product(*lam, *mu)?;
            rep.check(left == right && &left == stored, || format!("{lam} * {mu} depends on the order"));
        }
    }
    rep.details.push(format!("unit and commutativity: {} basis classes", basis.len()));

    let triples: Vec<[PartitionIndex; 3]> = if rank.get() <= opts.exhaustive_up_to {
        let mut all = Vec::with_capacity(basis.len().pow(3));
        for a in &basis {
            for b in &basis {
                for c in &basis {
                    all.push([*a, *b, *c]);
                }
            }
        }
        rep.details.push(format!("associativity: all {} triples", all.len()));
        all
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ u64::from(rank.get()));
        let pick = |rng: &mut ChaCha8Rng| basis[rng.gen_range(0..basis.len())];
        let sample: Vec<_> = (0..opts.samples).map(|_| [pick(&mut rng), pick(&mut rng), pick(&mut rng)]).collect();
        rep.details.push(format!("associativity: {} sampled triples, seed {:#x}", sample.len(), opts.seed));
        sample
    };

    let outcomes: Vec<Result<bool>> = triples
        .par_iter()
        .map(|[a, b, c]| {
            let ab = table.product(*a, *b)?;
            let bc = table.product(*b, *c)?;
            let left = table.multiply(ab, &table.basis_class(*c)?)?;
            let right = table.multiply(&table.basis_class(*a)?, bc)?;
            Ok(left == right)
        })
        .collect();
    for ([a, b, c], ok) in triples.iter().zip(outcomes) {
        let ok = ok?;
        rep.check(ok, || format!("({a} * {b}) * {c} != {a} * ({b} * {c})"));
    }
    Ok(rep)
}

pub fn pairing(table: &MultiplicationTable) -> Result<SuiteReport> {
    let rank = table.rank();
    let mut rep = SuiteReport::new(Suite::Pairing, rank);
    for d in 0..=rank.dimension() {
        let m = table.pairing_matrix(d)?;
        let rows = m.len();
        let cols = m.first().map_or(0, |r| r.len());
        let r = matrix_rank(m);
        rep.details.push(format!("degree {d}: {rows}x{cols}, rank {r}"));
        rep.check(rows == cols && r == rows, || format!("pairing in degree {d} is degenerate ({rows}x{cols}, rank {r})"));
    }
    Ok(rep)
}

pub fn betti(rank: Rank) -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::Betti, rank);
    let profile = betti_profile(rank);
    let dim = rank.dimension() as usize;
    rep.details.push(format!(
        "profile ({}), {} classes",
        profile.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(","),
        profile.iter().sum::<usize>()
    ));
    for d in 0..=dim {
        rep.check(profile[d] == profile[dim - d], || format!("b_{d} != b_{}", dim - d));
    }
    let top: Vec<_> = enumerate_basis(rank).into_iter().filter(|l| l.degree() == rank.dimension()).collect();
    rep.check(top == vec![rank.top_class()], || format!("top degree holds {top:?}"));
    rep.details.push(format!("top class {}", rank.top_class()));
    rep
}

pub fn negativity(table: &MultiplicationTable) -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::Negativity, table.rank());
    let w = table.has_negative_constant();
    rep.check(w.is_some(), || "every structure constant is nonnegative".into());
    if let Some(w) = w {
        rep.details.push(format!(
            "tau{} * tau{} has coefficient {} on q^{} tau{}",
            w.lambda,
            w.mu,
            crate::algebra::format_rational(&w.value),
            w.d,
            w.nu
        ));
    }
    rep
}
