//! Exact Fourier–Motzkin elimination with combination tracking.
//!
//! Every row is `constant + Σ coeff·x ≥ 0` together with the nonnegative
//! weights on the input constraints that produce it. Rows are stored scaled
//! so the first nonzero coefficient has absolute value one; among rows with
//! the same linear part only the one with the smallest constant is kept.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Signed, Zero};

use crate::algebra::Rational;
use crate::error::{Error, Result};

pub(crate) type Weights = BTreeMap<usize, Rational>;

#[derive(Clone, Debug)]
pub(crate) struct Row {
    pub linear: BTreeMap<usize, Rational>,
    pub constant: Rational,
    pub history: Weights,
}

impl Row {
    pub fn input(index: usize, constant: Rational, linear: BTreeMap<usize, Rational>) -> Self {
        Row {
            linear,
            constant,
            history: Weights::from([(index, Rational::one())]),
        }
    }

    fn scale(&mut self, c: &Rational) {
        self.constant *= c;
        for v in self.linear.values_mut() {
            *v *= c;
        }
        for v in self.history.values_mut() {
            *v *= c;
        }
    }

    fn normalize(&mut self) {
        if let Some(lead) = self.linear.values().next() {
            let inv = lead.abs().recip();
            if !inv.is_one() {
                self.scale(&inv);
            }
        }
    }

    /// `a·self + b·other` for positive `a`, `b`.
    fn combine(&self, a: &Rational, other: &Row, b: &Rational) -> Row {
        let mut linear = BTreeMap::new();
        for (k, v) in &self.linear {
            linear.insert(*k, v * a);
        }
        for (k, v) in &other.linear {
            let slot = linear.entry(*k).or_insert_with(Rational::zero);
            *slot += v * b;
        }
        linear.retain(|_, v| !v.is_zero());
        let mut history = Weights::new();
        for (k, v) in &self.history {
            history.insert(*k, v * a);
        }
        for (k, v) in &other.history {
            *history.entry(*k).or_insert_with(Rational::zero) += v * b;
        }
        Row {
            linear,
            constant: &self.constant * a + &other.constant * b,
            history,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub(crate) struct Stats {
    pub eliminated: usize,
    pub generated: usize,
    pub peak: usize,
}

/// Deduplicates by linear part, keeping the tightest constant. Trivial rows
/// are dropped; a row `c ≥ 0` with `c < 0` means the system is infeasible.
fn prune(rows: Vec<Row>) -> Result<Vec<Row>> {
    let mut best: HashMap<Vec<(usize, Rational)>, Row> = HashMap::new();
    let mut order = Vec::new();
    for mut row in rows {
        if row.linear.is_empty() {
            if row.constant.is_negative() {
                return Err(Error::Infeasible);
            }
            continue;
        }
        row.normalize();
        let key: Vec<_> = row.linear.iter().map(|(k, v)| (*k, v.clone())).collect();
        match best.get_mut(&key) {
            Some(existing) => {
                if row.constant < existing.constant {
                    *existing = row;
                }
            }
            None => {
                order.push(key.clone());
                best.insert(key, row);
            }
        }
    }
    Ok(order.into_iter().map(|k| best.remove(&k).expect("key present")).collect())
}

fn eliminate(rows: Vec<Row>, var: usize, cap: usize, stats: &mut Stats) -> Result<Vec<Row>> {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut out = Vec::new();
    for r in rows {
        match r.linear.get(&var).map(|c| c.is_positive()) {
            Some(true) => pos.push(r),
            Some(false) => neg.push(r),
            None => out.push(r),
        }
    }
    if out.len() + pos.len() * neg.len() > cap {
        return Err(Error::ResourceCap { limit: cap });
    }
    for p in &pos {
        let cp = &p.linear[&var];
        for q in &neg {
            let cq = -&q.linear[&var];
            let mut r = p.combine(&cq, q, cp);
            r.linear.remove(&var);
            out.push(r);
            stats.generated += 1;
        }
    }
    stats.eliminated += 1;
    let out = prune(out)?;
    stats.peak = stats.peak.max(out.len());
    Ok(out)
}

/// Eliminates every variable except `keep`, picking at each step the
/// variable with the fewest generated pairs (ties broken by index).
pub(crate) fn project_onto(rows: &[Row], keep: usize, cap: usize, stats: &mut Stats) -> Result<Vec<Row>> {
    let mut rows = prune(rows.to_vec())?;
    loop {
        let mut counts: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        for r in &rows {
            for (k, v) in &r.linear {
                if *k == keep {
                    continue;
                }
                let e = counts.entry(*k).or_default();
                if v.is_positive() {
                    e.0 += 1;
                } else {
                    e.1 += 1;
                }
            }
        }
        let Some((&var, _)) = counts.iter().min_by_key(|(k, (p, n))| (p * n, **k)) else {
            return Ok(rows);
        };
        rows = eliminate(rows, var, cap, stats)?;
    }
}

/// Best bounds `(lower, upper)` on `keep` from a projected system, each with
/// the row it came from scaled so the coefficient of `keep` is `±1`.
pub(crate) fn bounds(rows: &[Row], keep: usize) -> (Option<Row>, Option<Row>) {
    let mut lower: Option<Row> = None;
    let mut upper: Option<Row> = None;
    for r in rows {
        debug_assert!(r.linear.keys().all(|k| *k == keep));
        let Some(c) = r.linear.get(&keep) else { continue };
        let mut r = r.clone();
        let inv = c.abs().recip();
        r.scale(&inv);
        // c + x ≥ 0 gives x ≥ -c; c - x ≥ 0 gives x ≤ c.
        if c.is_positive() {
            if lower.as_ref().is_none_or(|l| -&r.constant > -&l.constant) {
                lower = Some(r);
            }
        } else if upper.as_ref().is_none_or(|u| r.constant < u.constant) {
            upper = Some(r);
        }
    }
    (lower, upper)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn row(i: usize, c: i64, lin: &[(usize, i64)]) -> Row {
        Row::input(i, rat(c), lin.iter().map(|&(k, v)| (k, rat(v))).collect())
    }

    #[test]
    fn chain_of_pairs() {
        // x0 ≥ 0, x1 ≥ 0, -x0 - x1 ≥ 0
        let rows = vec![row(0, 0, &[(0, 1)]), row(1, 0, &[(1, 1)]), row(2, 0, &[(0, -1), (1, -1)])];
        let mut stats = Stats::default();
        let proj = project_onto(&rows, 0, 1000, &mut stats).unwrap();
        let (lo, hi) = bounds(&proj, 0);
        let (lo, hi) = (lo.unwrap(), hi.unwrap());
        assert_eq!(lo.constant, rat(0));
        assert_eq!(hi.constant, rat(0));
        assert_eq!(hi.history, Weights::from([(1, rat(1)), (2, rat(1))]));
    }

    #[test]
    fn tightest_bound_wins() {
        let rows = vec![row(0, 3, &[(0, -1)]), row(1, 2, &[(0, -2)]), row(2, 5, &[(0, 1)])];
        let (lo, hi) = bounds(&prune(rows).unwrap(), 0);
        assert_eq!(hi.unwrap().constant, rat(1));
        assert_eq!(lo.unwrap().constant, rat(5));
    }

    #[test]
    fn infeasible_and_cap() {
        let rows = vec![row(0, -1, &[(0, 1)]), row(1, -1, &[(0, -1)])];
        let mut stats = Stats::default();
        assert!(matches!(project_onto(&rows, 1, 1000, &mut stats), Err(Error::Infeasible)));
        let many: Vec<_> = (0..10)
            .flat_map(|i| [row(i, i as i64, &[(0, 1), (1, i as i64 + 1)]), row(i, i as i64, &[(0, -1), (1, -(i as i64) - 2)])])
            .collect();
        assert!(matches!(project_onto(&many, 1, 20, &mut stats), Err(Error::ResourceCap { .. })));
    }
}
