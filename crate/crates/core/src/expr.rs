//! A small language for writing classes on the command line.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := INT | 'q' ('^' INT)? | 'tau' '[' INDEX ',' INDEX ']' | '(' expr ')'
//! ```
//!
//! `INDEX` may carry a leading `-` (for `tau[2n-1,-1]`); `INT` may not.
//! Indices are only checked against a rank when the expression is evaluated.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;

use crate::algebra::{ClassVector, QPolynomial, Rational};
use crate::error::{Error, Result};
use crate::index::PartitionIndex;
use crate::ring::MultiplicationTable;

/// Parentheses nested deeper than this are rejected.
pub const MAX_DEPTH: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factor {
    Int(BigUint),
    Q(Option<u32>),
    Tau(i64, i64),
    Group(ClassExpression),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub factors: Vec<Factor>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassExpression {
    /// The first term is never negated; the flag is the sign in front.
    pub terms: Vec<(bool, Term)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(String),
    Q,
    Tau,
    LBracket,
    RBracket,
    Comma,
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Caret,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(s) => format!("integer {s}"),
            Tok::Q => "`q`".into(),
            Tok::Tau => "`tau`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Caret => "`^`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn syntax(offset: usize, expected: &[&str], found: String) -> Error {
    Error::Syntax {
        offset,
        expected: expected.iter().map(|s| s.to_string()).collect(),
        found,
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(src[start..i].to_string())));
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                match &src[start..i] {
                    "q" => out.push((start, Tok::Q)),
                    "tau" => out.push((start, Tok::Tau)),
                    word => return Err(syntax(start, &["`q`", "`tau`"], format!("`{word}`"))),
                }
                continue;
            }
            b'[' => Tok::LBracket,
            b']' => Tok::RBracket,
            b',' => Tok::Comma,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            _ => {
                let ch = src[start..].chars().next().expect("in bounds");
                return Err(syntax(start, &["a token"], format!("{ch:?}")));
            }
        };
        i += 1;
        out.push((start, tok));
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T> {
        Err(syntax(self.offset(), expected, self.peek().describe()))
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            let want = tok.describe();
            self.fail(&[want.as_str()])
        }
    }

    fn expr(&mut self) -> Result<ClassExpression> {
        let mut terms = vec![(false, self.term()?)];
        loop {
            let neg = match self.peek() {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => return Ok(ClassExpression { terms }),
            };
            self.bump();
            terms.push((neg, self.term()?));
        }
    }

    fn term(&mut self) -> Result<Term> {
        let mut factors = vec![self.factor()?];
        while *self.peek() == Tok::Star {
            self.bump();
            factors.push(self.factor()?);
        }
        Ok(Term { factors })
    }

    fn factor(&mut self) -> Result<Factor> {
        const FACTOR: &[&str] = &["integer", "`q`", "`tau`", "`(`"];
        match self.peek().clone() {
            Tok::Int(s) => {
                self.bump();
                Ok(Factor::Int(BigUint::from_str(&s).expect("lexer yields digits")))
            }
            Tok::Q => {
                self.bump();
                if *self.peek() != Tok::Caret {
                    return Ok(Factor::Q(None));
                }
                self.bump();
                let at = self.offset();
                match self.bump() {
                    Tok::Int(s) => s
                        .parse::<u32>()
                        .map(|k| Factor::Q(Some(k)))
                        .map_err(|_| syntax(at, &["exponent below 2^32"], s)),
                    other => Err(syntax(at, &["integer"], other.describe())),
                }
            }
            Tok::Tau => {
                self.bump();
                self.expect(Tok::LBracket)?;
                let a = self.index()?;
                self.expect(Tok::Comma)?;
                let b = self.index()?;
                self.expect(Tok::RBracket)?;
                Ok(Factor::Tau(a, b))
            }
            Tok::LParen => {
                if self.depth >= MAX_DEPTH {
                    return Err(syntax(self.offset(), &["shallower nesting"], "`(`".into()));
                }
                self.bump();
                self.depth += 1;
                let inner = self.expr()?;
                self.depth -= 1;
                self.expect(Tok::RParen)?;
                Ok(Factor::Group(inner))
            }
            _ => self.fail(FACTOR),
        }
    }

    fn index(&mut self) -> Result<i64> {
        let neg = *self.peek() == Tok::Minus;
        if neg {
            self.bump();
        }
        let at = self.offset();
        match self.bump() {
            Tok::Int(s) => {
                let digits = if neg { format!("-{s}") } else { s };
                digits.parse::<i64>().map_err(|_| syntax(at, &["index within 64 bits"], digits))
            }
            other => Err(syntax(at, &["integer"], other.describe())),
        }
    }
}

impl ClassExpression {
    pub fn parse(src: &str) -> Result<Self> {
        let mut p = Parser { toks: lex(src)?, pos: 0, depth: 0 };
        let e = p.expr()?;
        if *p.peek() != Tok::End {
            return p.fail(&["`+`", "`-`", "`*`", "end of input"]);
        }
        Ok(e)
    }

    /// Evaluates in the quantum ring described by `table`.
    pub fn evaluate(&self, table: &MultiplicationTable) -> Result<ClassVector> {
        let rank = table.rank();
        let mut out = ClassVector::zero(rank);
        for (neg, term) in &self.terms {
            let mut acc = ClassVector::basis(rank, PartitionIndex::UNIT)?;
            for f in &term.factors {
                acc = match f {
                    Factor::Int(c) => acc.scale(&Rational::from_integer(c.clone().into())),
                    Factor::Q(k) => acc.mul_poly(&QPolynomial::monomial(k.unwrap_or(1), Rational::one())),
                    Factor::Tau(a, b) => {
                        let lam = PartitionIndex::new(*a, *b);
                        table.multiply(&acc, &ClassVector::basis(rank, lam)?)?
                    }
                    Factor::Group(inner) => table.multiply(&acc, &inner.evaluate(table)?)?,
                };
            }
            out = if *neg { out.try_sub(&acc)? } else { out.try_add(&acc)? };
        }
        Ok(out)
    }
}

impl FromStr for ClassExpression {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Int(c) => write!(f, "{c}"),
            Factor::Q(None) => write!(f, "q"),
            Factor::Q(Some(k)) => write!(f, "q^{k}"),
            Factor::Tau(a, b) => write!(f, "tau[{a},{b}]"),
            Factor::Group(e) => write!(f, "({e})"),
        }
    }
}

impl fmt::Display for ClassExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (neg, term)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(if *neg { " - " } else { " + " })?;
            }
            for (j, factor) in term.factors.iter().enumerate() {
                if j > 0 {
                    f.write_str("*")?;
                }
                write!(f, "{factor}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::index::Rank;
    use proptest::prelude::*;

    fn syntax_at(src: &str) -> (usize, Vec<String>) {
        match ClassExpression::parse(src) {
            Err(Error::Syntax { offset, expected, .. }) => (offset, expected),
            other => panic!("{src}: {other:?}"),
        }
    }

    #[test]
    fn two_terms() {
        let e = ClassExpression::parse("tau[5,-1]*tau[2,1] + 2*q*tau[1,0]").unwrap();
        assert_eq!(e.terms.len(), 2);
        assert_eq!(e.terms[0].1.factors, vec![Factor::Tau(5, -1), Factor::Tau(2, 1)]);
        assert_eq!(e.to_string(), "tau[5,-1]*tau[2,1] + 2*q*tau[1,0]");
    }

    #[test]
    fn syntax_errors() {
        assert_eq!(syntax_at("tau[1,1]^2").0, 8);
        assert_eq!(syntax_at("").0, 0);
        assert_eq!(syntax_at("-q").0, 0);
        assert_eq!(syntax_at("tau[1 1]").0, 6);
        let (off, exp) = syntax_at("2*)");
        assert_eq!(off, 2);
        assert!(exp.contains(&"`tau`".to_string()));
        assert_eq!(syntax_at("q^-1").0, 2);
        assert_eq!(syntax_at("sigma[1,0]").0, 0);
        assert_eq!(syntax_at("(q").0, 2);
        assert_eq!(syntax_at("q^99999999999").0, 2);
        assert_eq!(syntax_at("tau[1,0] é").0, 9);
        let deep = format!("{}q{}", "(".repeat(MAX_DEPTH + 1), ")".repeat(MAX_DEPTH + 1));
        assert_eq!(syntax_at(&deep).0, MAX_DEPTH);
    }

    #[test]
    fn evaluates() {
        let t = MultiplicationTable::build(Rank::ring(3).unwrap()).unwrap();
        let v = ClassExpression::parse("tau[0,0]*tau[4,3]").unwrap().evaluate(&t).unwrap();
        assert_eq!(v.to_string(), "tau[4,3]");
        let v = ClassExpression::parse("tau[1,1]*tau[5,2] - q*tau[3,0]").unwrap().evaluate(&t).unwrap();
        assert!(v.is_zero());
        let v = ClassExpression::parse("(tau[1,0] + 1)*(tau[1,0] - 1)").unwrap().evaluate(&t).unwrap();
        let w = ClassExpression::parse("tau[2,0] + tau[1,1] - 1").unwrap().evaluate(&t).unwrap();
        assert_eq!(v, w);
        let v = ClassExpression::parse("3*q^2").unwrap().evaluate(&t).unwrap();
        assert_eq!(v.coefficient(PartitionIndex::UNIT, 2), rat(3));
        assert!(matches!(
            ClassExpression::parse("tau[2,2]").unwrap().evaluate(&t),
            Err(Error::InvalidIndex { .. })
        ));
    }

    fn factor() -> BoxedStrategy<Factor> {
        let leaf = prop_oneof![
            (0u64..1000).prop_map(|c| Factor::Int(c.into())),
            proptest::option::of(0u32..20).prop_map(Factor::Q),
            (-3i64..12, -3i64..12).prop_map(|(a, b)| Factor::Tau(a, b)),
        ];
        leaf.prop_recursive(3, 24, 4, |inner| {
            expression(inner).prop_map(Factor::Group)
        })
        .boxed()
    }

    fn expression(f: impl Strategy<Value = Factor> + Clone) -> impl Strategy<Value = ClassExpression> {
        let term = proptest::collection::vec(f, 1..4).prop_map(|factors| Term { factors });
        (term.clone(), proptest::collection::vec((any::<bool>(), term), 0..3)).prop_map(|(first, rest)| {
            let mut terms = vec![(false, first)];
            terms.extend(rest);
            ClassExpression { terms }
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(e in expression(factor())) {
            let printed = e.to_string();
            prop_assert_eq!(ClassExpression::parse(&printed).unwrap(), e);
        }

        #[test]
        fn arbitrary_input_never_panics(s in "[ -~]{0,40}") {
            let _ = ClassExpression::parse(&s);
        }
    }
}
