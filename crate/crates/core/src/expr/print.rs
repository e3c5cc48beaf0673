//! Canonical text form. Every compound node is parenthesized so the output
//! re-parses to the identical tree.

use std::fmt::{self, Write};

use num_traits::{One, Signed};

use super::Expr;
use crate::scalar::Rational;

pub(super) fn write_expr(e: &Expr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match e {
        Expr::Const(c) => write_rational(*c, f),
        Expr::Lambda => f.write_str("lambda"),
        Expr::Var(i) => write!(f, "x{i}"),
        Expr::Add(a, b) => binary(f, a, " + ", b),
        Expr::Sub(a, b) => binary(f, a, " - ", b),
        Expr::Mul(a, b) => binary(f, a, "*", b),
        Expr::Div(a, b) => binary(f, a, "/", b),
        Expr::Pow(a, q) => {
            f.write_char('(')?;
            write_expr(a, f)?;
            f.write_char('^')?;
            if q.is_integer() && !q.is_negative() {
                write!(f, "{}", q.numer())?;
            } else {
                write_rational(*q, f)?;
            }
            f.write_char(')')
        }
        Expr::Sin(a) => call(f, "sin", a),
        Expr::Cos(a) => call(f, "cos", a),
        Expr::Exp(a) => call(f, "exp", a),
        Expr::Log(a) => call(f, "log", a),
        Expr::Abs(a) => call(f, "abs", a),
    }
}

fn write_rational(c: Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if c.is_integer() && !c.is_negative() {
        write!(f, "{}", c.numer())
    } else if c.denom().is_one() {
        write!(f, "({})", c.numer())
    } else {
        write!(f, "({}/{})", c.numer(), c.denom())
    }
}

fn binary(f: &mut fmt::Formatter<'_>, a: &Expr, op: &str, b: &Expr) -> fmt::Result {
    f.write_char('(')?;
    write_expr(a, f)?;
    f.write_str(op)?;
    write_expr(b, f)?;
    f.write_char(')')
}

fn call(f: &mut fmt::Formatter<'_>, name: &str, a: &Expr) -> fmt::Result {
    f.write_str(name)?;
    f.write_char('(')?;
    write_expr(a, f)?;
    f.write_char(')')
}
