//! Expression language for gauge nets `g(λ)` and function nets `u(λ, x1..xd)`.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' exponent)?
//! exponent:= number | '-' number | '(' expr ')'      (must fold to a rational)
//! atom    := number | 'lambda' | 'x' digits | func '(' expr ')' | '(' expr ')'
//! func    := 'sin' | 'cos' | 'exp' | 'log' | 'abs'
//! number  := digits ('.' digits)? (('e' | 'E') ('+' | '-')? digits)?
//! ```
//!
//! Numbers are read exactly as rationals. A quotient of two constants and a
//! negated constant fold into a single constant at parse time, so `-1/2`
//! and `(1/2)` are literals. `log` is the natural logarithm.

mod diff;
mod eval;
mod parse;
mod print;

use std::fmt;

pub use eval::{EvalError, EvalErrorKind, Program};
pub use parse::{ParseError, ParseErrorKind};

use crate::scalar::Rational;

/// Expression tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Const(Rational),
    /// The net index λ.
    Lambda,
    /// Space variable `x_i`, 1-based.
    Var(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Rational),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Exp(Box<Expr>),
    Log(Box<Expr>),
    Abs(Box<Expr>),
}

impl Expr {
    pub fn int(v: i64) -> Expr {
        Expr::Const(Rational::from_integer(v))
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Const(c) if *c == Rational::from_integer(0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Expr::Const(c) if *c == Rational::from_integer(1))
    }

    pub fn as_const(&self) -> Option<Rational> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }

    /// Parses `text` with `x1..x{dimension}` in scope. Dimension 0 admits λ only.
    pub fn parse(text: &str, dimension: usize) -> Result<Expr, ParseError> {
        parse::parse(text, dimension)
    }

    pub fn differentiate(&self, axis: usize) -> Expr {
        diff::differentiate(self, axis)
    }

    /// Repeated differentiation: `counts[i]` derivatives along axis `i + 1`.
    pub fn partial(&self, counts: &[usize]) -> Expr {
        let mut out = self.clone();
        for (i, &n) in counts.iter().enumerate() {
            for _ in 0..n {
                out = out.differentiate(i + 1);
            }
        }
        out
    }

    /// Reference tree-walking evaluator.
    pub fn evaluate<T: crate::Scalar>(&self, lambda: T, x: &[T]) -> Result<T, EvalError> {
        eval::evaluate(self, lambda, x)
    }

    pub fn depends_on_lambda(&self) -> bool {
        self.any_leaf(&|e| matches!(e, Expr::Lambda))
    }

    pub fn depends_on_var(&self, axis: usize) -> bool {
        self.any_leaf(&|e| matches!(e, Expr::Var(i) if *i == axis))
    }

    pub fn depends_on_space(&self) -> bool {
        self.any_leaf(&|e| matches!(e, Expr::Var(_)))
    }

    /// Largest space-variable index appearing, 0 if none.
    pub fn max_var(&self) -> usize {
        match self {
            Expr::Var(i) => *i,
            Expr::Const(_) | Expr::Lambda => 0,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.max_var().max(b.max_var())
            }
            Expr::Pow(a, _)
            | Expr::Sin(a)
            | Expr::Cos(a)
            | Expr::Exp(a)
            | Expr::Log(a)
            | Expr::Abs(a) => a.max_var(),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Lambda | Expr::Var(_) => 1,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                1 + a.node_count() + b.node_count()
            }
            Expr::Pow(a, _)
            | Expr::Sin(a)
            | Expr::Cos(a)
            | Expr::Exp(a)
            | Expr::Log(a)
            | Expr::Abs(a) => 1 + a.node_count(),
        }
    }

    fn any_leaf(&self, pred: &dyn Fn(&Expr) -> bool) -> bool {
        match self {
            Expr::Const(_) | Expr::Lambda | Expr::Var(_) => pred(self),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.any_leaf(pred) || b.any_leaf(pred)
            }
            Expr::Pow(a, _)
            | Expr::Sin(a)
            | Expr::Cos(a)
            | Expr::Exp(a)
            | Expr::Log(a)
            | Expr::Abs(a) => a.any_leaf(pred),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::write_expr(self, f)
    }
}

/// A function net `u(λ, x1..xd)`.
#[derive(Clone, Debug, PartialEq)]
pub struct NetExpr {
    expr: Expr,
    dimension: usize,
}

impl NetExpr {
    pub fn new(expr: Expr, dimension: usize) -> Result<Self, ParseError> {
        if dimension == 0 {
            return Err(ParseError::new(ParseErrorKind::ZeroDimension, 0));
        }
        let max = expr.max_var();
        if max > dimension {
            return Err(ParseError::new(
                ParseErrorKind::VariableOutOfRange { index: max, dimension },
                0,
            ));
        }
        Ok(NetExpr { expr, dimension })
    }

    pub fn parse(text: &str, dimension: usize) -> Result<Self, ParseError> {
        if dimension == 0 {
            return Err(ParseError::new(ParseErrorKind::ZeroDimension, 0));
        }
        Ok(NetExpr {
            expr: Expr::parse(text, dimension)?,
            dimension,
        })
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// `self - other`; both nets must share the dimension.
    pub fn difference(&self, other: &NetExpr) -> Option<NetExpr> {
        (self.dimension == other.dimension).then(|| NetExpr {
            expr: Expr::Sub(Box::new(self.expr.clone()), Box::new(other.expr.clone())),
            dimension: self.dimension,
        })
    }

    pub fn product(&self, other: &NetExpr) -> Option<NetExpr> {
        (self.dimension == other.dimension).then(|| NetExpr {
            expr: Expr::Mul(Box::new(self.expr.clone()), Box::new(other.expr.clone())),
            dimension: self.dimension,
        })
    }
}

impl fmt::Display for NetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.expr.fmt(f)
    }
}

/// A gauge `g(λ)`: an expression in λ alone.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeExpr(Expr);

impl GaugeExpr {
    pub fn new(expr: Expr) -> Result<Self, ParseError> {
        if expr.depends_on_space() {
            return Err(ParseError::new(
                ParseErrorKind::VariableOutOfRange {
                    index: expr.max_var(),
                    dimension: 0,
                },
                0,
            ));
        }
        Ok(GaugeExpr(expr))
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        Ok(GaugeExpr(Expr::parse(text, 0)?))
    }

    pub fn expr(&self) -> &Expr {
        &self.0
    }

    pub fn evaluate<T: crate::Scalar>(&self, lambda: T) -> Result<T, EvalError> {
        self.0.evaluate(lambda, &[])
    }
}

impl fmt::Display for GaugeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}
