//! Symbolic partial derivatives with light constant folding.

use num_traits::{One, Zero};

use super::Expr;
use crate::scalar::Rational;

pub(super) fn differentiate(e: &Expr, axis: usize) -> Expr {
    if !e.depends_on_var(axis) {
        return Expr::zero();
    }
    match e {
        Expr::Const(_) | Expr::Lambda => Expr::zero(),
        Expr::Var(i) => {
            if *i == axis {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Expr::Add(a, b) => add(differentiate(a, axis), differentiate(b, axis)),
        Expr::Sub(a, b) => sub(differentiate(a, axis), differentiate(b, axis)),
        // g·|g|^r, produced below: (r+1)·|g|^r·g', finite at g = 0 for r >= 0
        Expr::Mul(a, b) if abs_power_of(b, a).is_some() => {
            let r = abs_power_of(b, a).unwrap();
            mul(
                mul(Expr::Const(r + Rational::one()), pow(Expr::Abs(a.clone()), r)),
                differentiate(a, axis),
            )
        }
        Expr::Mul(a, b) => add(
            mul(differentiate(a, axis), (**b).clone()),
            mul((**a).clone(), differentiate(b, axis)),
        ),
        Expr::Div(a, b) => {
            let da = differentiate(a, axis);
            let db = differentiate(b, axis);
            if db.is_zero() {
                div(da, (**b).clone())
            } else {
                div(
                    sub(mul(da, (**b).clone()), mul((**a).clone(), db)),
                    pow((**b).clone(), Rational::from_integer(2)),
                )
            }
        }
        // |g|^q: q·g·|g|^(q-2)·g' rather than q·|g|^(q-1)·(g/|g|)·g', so
        // that repeated partials stay finite where g = 0 and q is large enough
        Expr::Pow(a, q) if matches!(**a, Expr::Abs(_)) => {
            let Expr::Abs(g) = &**a else { unreachable!() };
            let signed = mul((**g).clone(), pow((**a).clone(), q - Rational::from_integer(2)));
            mul(mul(Expr::Const(*q), signed), differentiate(g, axis))
        }
        Expr::Pow(a, q) => mul(
            mul(Expr::Const(*q), pow((**a).clone(), q - Rational::one())),
            differentiate(a, axis),
        ),
        Expr::Sin(a) => mul(differentiate(a, axis), Expr::Cos(a.clone())),
        Expr::Cos(a) => mul(neg(differentiate(a, axis)), Expr::Sin(a.clone())),
        Expr::Exp(a) => mul(differentiate(a, axis), Expr::Exp(a.clone())),
        Expr::Log(a) => div(differentiate(a, axis), (**a).clone()),
        // sign(a)·a', written a/|a|·a'; undefined where a = 0
        Expr::Abs(a) => mul(
            differentiate(a, axis),
            Expr::Div(a.clone(), Box::new(Expr::Abs(a.clone()))),
        ),
    }
}

/// `r` when `b` is `|a|^r` (or `|a|`, `r = 1`).
fn abs_power_of(b: &Expr, a: &Expr) -> Option<Rational> {
    match b {
        Expr::Abs(g) if **g == *a => Some(Rational::one()),
        Expr::Pow(base, r) => match &**base {
            Expr::Abs(g) if **g == *a => Some(*r),
            _ => None,
        },
        _ => None,
    }
}

pub(crate) fn add(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => Expr::Const(x + y),
        _ if a.is_zero() => b,
        _ if b.is_zero() => a,
        _ => Expr::Add(Box::new(a), Box::new(b)),
    }
}

pub(crate) fn sub(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => Expr::Const(x - y),
        _ if b.is_zero() => a,
        _ if a.is_zero() => neg(b),
        _ => Expr::Sub(Box::new(a), Box::new(b)),
    }
}

pub(crate) fn mul(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => Expr::Const(x * y),
        _ if a.is_zero() || b.is_zero() => Expr::zero(),
        _ if a.is_one() => b,
        _ if b.is_one() => a,
        _ => Expr::Mul(Box::new(a), Box::new(b)),
    }
}

pub(crate) fn div(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) if !y.is_zero() => Expr::Const(x / y),
        _ if a.is_zero() => Expr::zero(),
        _ if b.is_one() => a,
        _ => Expr::Div(Box::new(a), Box::new(b)),
    }
}

pub(crate) fn neg(a: Expr) -> Expr {
    mul(Expr::int(-1), a)
}

pub(crate) fn pow(a: Expr, q: Rational) -> Expr {
    if q.is_zero() {
        Expr::one()
    } else if q.is_one() {
        a
    } else {
        Expr::Pow(Box::new(a), q)
    }
}
