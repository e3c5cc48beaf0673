use num_traits::{One, Signed};

use super::{Monomial, ScaleElement, ScaleFamily};
use crate::expr::Expr;
use crate::scalar::{Rational, Scalar};

/// Outcome of [`normalize`].
#[derive(Clone, Debug, PartialEq)]
pub enum Normalized {
    Element(ScaleElement),
    /// Not a positive rational combination of the base gauges; such nets
    /// are compared by sampling only.
    NotInClass,
}

impl Normalized {
    pub fn element(self) -> Option<ScaleElement> {
        match self {
            Normalized::Element(e) => Some(e),
            Normalized::NotInClass => None,
        }
    }
}

/// Integer powers beyond this are left to sampling.
const MAX_EXPANDED_POWER: i64 = 16;

/// Rewrites a λ-expression as a ratio of posynomials in the base gauges.
///
/// Subtrees structurally equal to a base gauge (or, for a base gauge of the
/// form `1/h`, to `h`) become gauge monomials; sums, products, quotients and
/// powers of those are expanded. Subtraction, non-positive constants and
/// transcendental functions of anything other than a base gauge put the
/// expression outside the class.
pub fn normalize<T: Scalar>(g: &Expr, family: &ScaleFamily<T>) -> Normalized {
    let patterns: Vec<&Expr> = family.gauges().iter().map(|g| g.expr()).collect();
    match walk(g, &patterns) {
        Some(e) => Normalized::Element(e),
        None => Normalized::NotInClass,
    }
}

fn walk(e: &Expr, patterns: &[&Expr]) -> Option<ScaleElement> {
    let k = patterns.len();
    for (i, p) in patterns.iter().enumerate() {
        if *p == e {
            return Some(Monomial::gauge_power(i, Rational::one(), k).into());
        }
        if let Expr::Div(num, den) = p {
            if num.is_one() && **den == *e {
                return Some(Monomial::gauge_power(i, -Rational::one(), k).into());
            }
        }
    }
    match e {
        Expr::Const(c) => Monomial::constant(*c, k).map(ScaleElement::from),
        Expr::Add(a, b) => Some(walk(a, patterns)?.add(&walk(b, patterns)?)),
        Expr::Mul(a, b) => Some(walk(a, patterns)?.mul(&walk(b, patterns)?)),
        Expr::Div(a, b) => Some(walk(a, patterns)?.div(&walk(b, patterns)?)),
        Expr::Pow(a, q) => {
            let base = walk(a, patterns)?;
            if q.is_integer() && q.numer().abs() <= MAX_EXPANDED_POWER {
                return Some(base.powi(*q.numer() as i32));
            }
            // fractional powers only of unit-coefficient monomials
            let m = base.as_monomial()?;
            if !m.coefficient().is_one() {
                return None;
            }
            let exponents = m.exponents().iter().map(|e| e * q).collect();
            Some(Monomial::new(Rational::one(), exponents)?.into())
        }
        Expr::Lambda
        | Expr::Var(_)
        | Expr::Sub(..)
        | Expr::Sin(_)
        | Expr::Cos(_)
        | Expr::Exp(_)
        | Expr::Log(_)
        | Expr::Abs(_) => None,
    }
}
