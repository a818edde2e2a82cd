//! Text, LaTeX and JSON renderings shared by the subcommands.

use osg_core::algebra::{format_rational, ClassVector, Rational};
use num_traits::{One, Signed};
use osg_core::index::PartitionIndex;
use serde_json::{json, Value};

/// One finished result in every format; printed only once complete.
pub struct Rendered {
    pub json: Value,
    pub text: String,
    pub latex: String,
    /// False when the computation ran but the answer is a negative one.
    pub ok: bool,
}

pub fn index_json(lam: PartitionIndex) -> Value {
    json!([lam.lambda1, lam.lambda2])
}

pub fn class_json(v: &ClassVector) -> Value {
    Value::Array(
        v.triples()
            .map(|(nu, d, c)| json!({ "nu": index_json(nu), "d": d, "coeff": format_rational(c) }))
            .collect(),
    )
}

pub fn latex_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        let sign = if r.is_negative() { "-" } else { "" };
        format!("{sign}\\frac{{{}}}{{{}}}", r.numer().abs(), r.denom())
    }
}

pub fn latex_index(lam: PartitionIndex) -> String {
    format!("\\tau_{{({},{})}}", lam.lambda1, lam.lambda2)
}

pub fn latex_class(v: &ClassVector) -> String {
    if v.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (nu, d, c)) in v.triples().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !mag.is_one() {
            out.push_str(&latex_rational(&mag));
            out.push(' ');
        }
        match d {
            0 => {}
            1 => out.push_str("q "),
            d => out.push_str(&format!("q^{{{d}}} ")),
        }
        out.push_str(&latex_index(nu));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use osg_core::algebra::{rat, ratio};
    use osg_core::index::Rank;

    #[test]
    fn latex_forms() {
        let r = Rank::ring(3).unwrap();
        let v = ClassVector::from_terms(
            r,
            [
                (PartitionIndex::new(3, 1), 0, rat(1)),
                (PartitionIndex::new(2, 0), 1, ratio(-1, 2)),
                (PartitionIndex::new(0, 0), 2, rat(3)),
            ],
        )
        .unwrap();
        assert_eq!(latex_class(&v), "3 q^{2} \\tau_{(0,0)} - \\frac{1}{2} q \\tau_{(2,0)} + \\tau_{(3,1)}");
        assert_eq!(latex_class(&ClassVector::zero(r)), "0");
    }
}
