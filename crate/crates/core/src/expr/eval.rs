use std::collections::HashMap;

use num_traits::ToPrimitive;
use thiserror::Error;

use super::Expr;
use crate::scalar::{Rational, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{kind} in `{subtree}`")]
pub struct EvalError {
    pub kind: EvalErrorKind,
    /// Printed form of the offending subtree.
    pub subtree: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalErrorKind {
    #[error("division by zero")]
    DivisionByZero,
    #[error("logarithm of a non-positive value")]
    LogOfNonPositive,
    #[error("fractional power of a negative value")]
    NegativeBase,
    #[error("result is not a number")]
    NotANumber,
    #[error("variable x{0} has no coordinate")]
    MissingCoordinate(usize),
}

fn fail<T>(kind: EvalErrorKind, node: &Expr) -> Result<T, EvalError> {
    Err(EvalError {
        kind,
        subtree: node.to_string(),
    })
}

pub(super) fn evaluate<T: Scalar>(e: &Expr, lambda: T, x: &[T]) -> Result<T, EvalError> {
    let v = match e {
        Expr::Const(c) => T::from_rational(*c),
        Expr::Lambda => lambda,
        Expr::Var(i) => match x.get(i - 1) {
            Some(v) => *v,
            None => return fail(EvalErrorKind::MissingCoordinate(*i), e),
        },
        Expr::Add(a, b) => evaluate(a, lambda, x)? + evaluate(b, lambda, x)?,
        Expr::Sub(a, b) => evaluate(a, lambda, x)? - evaluate(b, lambda, x)?,
        Expr::Mul(a, b) => evaluate(a, lambda, x)? * evaluate(b, lambda, x)?,
        Expr::Div(a, b) => {
            let n = evaluate(a, lambda, x)?;
            let d = evaluate(b, lambda, x)?;
            match checked_div(n, d) {
                Ok(v) => v,
                Err(kind) => return fail(kind, e),
            }
        }
        Expr::Pow(a, q) => match checked_pow(evaluate(a, lambda, x)?, PowPlan::new(*q)) {
            Ok(v) => v,
            Err(kind) => return fail(kind, e),
        },
        Expr::Sin(a) => evaluate(a, lambda, x)?.sin(),
        Expr::Cos(a) => evaluate(a, lambda, x)?.cos(),
        Expr::Exp(a) => evaluate(a, lambda, x)?.exp(),
        Expr::Log(a) => match checked_ln(evaluate(a, lambda, x)?) {
            Ok(v) => v,
            Err(kind) => return fail(kind, e),
        },
        Expr::Abs(a) => evaluate(a, lambda, x)?.abs(),
    };
    if v.is_nan() {
        return fail(EvalErrorKind::NotANumber, e);
    }
    Ok(v)
}

#[inline]
fn checked_div<T: Scalar>(n: T, d: T) -> Result<T, EvalErrorKind> {
    if d == T::zero() {
        Err(EvalErrorKind::DivisionByZero)
    } else {
        Ok(n / d)
    }
}

#[inline]
fn checked_ln<T: Scalar>(v: T) -> Result<T, EvalErrorKind> {
    if v <= T::zero() {
        Err(EvalErrorKind::LogOfNonPositive)
    } else {
        Ok(v.ln())
    }
}

#[derive(Clone, Copy, Debug)]
enum PowPlan {
    Int(i32),
    Frac { value: f64, negative: bool },
}

impl PowPlan {
    fn new(q: Rational) -> Self {
        if q.is_integer() {
            if let Some(n) = q.numer().to_i32() {
                return PowPlan::Int(n);
            }
        }
        PowPlan::Frac {
            value: *q.numer() as f64 / *q.denom() as f64,
            negative: *q.numer() < 0,
        }
    }
}

#[inline]
fn checked_pow<T: Scalar>(base: T, plan: PowPlan) -> Result<T, EvalErrorKind> {
    match plan {
        PowPlan::Int(n) => {
            if n < 0 && base == T::zero() {
                Err(EvalErrorKind::DivisionByZero)
            } else {
                Ok(base.powi(n))
            }
        }
        PowPlan::Frac { value, negative } => {
            if base < T::zero() {
                Err(EvalErrorKind::NegativeBase)
            } else if negative && base == T::zero() {
                Err(EvalErrorKind::DivisionByZero)
            } else {
                Ok(base.powf(T::from_f64_lossy(value)))
            }
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Op<T> {
    Const(T),
    Var(usize),
    Add(usize, usize),
    Sub(usize, usize),
    Mul(usize, usize),
    Div(usize, usize),
    Pow(usize, PowPlan),
    Sin(usize),
    Cos(usize),
    Exp(usize),
    Log(usize),
    Abs(usize),
}

/// Straight-line program for one expression at one fixed λ.
///
/// Every subtree that does not depend on `x` is evaluated once when the
/// program is built, and structurally equal subtrees share one slot, so
/// sweeping a grid only touches each distinct `x`-dependent subtree once.
/// Values are bit-identical to [`Expr::evaluate`] at the same point, and the
/// first failing subtree in evaluation order is the one reported.
#[derive(Clone, Debug)]
pub struct Program<'a, T> {
    ops: Vec<Op<T>>,
    origins: Vec<&'a Expr>,
    outputs: Vec<usize>,
}

impl<'a, T: Scalar> Program<'a, T> {
    /// Compiles `e` with λ bound. Errors in λ-only subtrees surface here.
    pub fn bind(e: &'a Expr, lambda: T) -> Result<Self, EvalError> {
        Program::bind_all(&[e], lambda)
    }

    /// One program for several expressions sharing subtrees; see
    /// [`Program::run_all`].
    pub fn bind_all(exprs: &[&'a Expr], lambda: T) -> Result<Self, EvalError> {
        let mut p = Program {
            ops: Vec::new(),
            origins: Vec::new(),
            outputs: Vec::with_capacity(exprs.len()),
        };
        let mut seen = HashMap::new();
        for e in exprs {
            let slot = p.emit(e, lambda, &mut seen)?;
            p.outputs.push(slot);
        }
        Ok(p)
    }

    fn emit(
        &mut self,
        e: &'a Expr,
        lambda: T,
        seen: &mut HashMap<&'a Expr, usize>,
    ) -> Result<usize, EvalError> {
        if let Some(&slot) = seen.get(e) {
            return Ok(slot);
        }
        let op = if !e.depends_on_space() {
            Op::Const(evaluate(e, lambda, &[])?)
        } else {
            match e {
                Expr::Const(_) | Expr::Lambda => unreachable!("constant subtrees are folded"),
                Expr::Var(i) => Op::Var(i - 1),
                Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                    let a = self.emit(a, lambda, seen)?;
                    let b = self.emit(b, lambda, seen)?;
                    match e {
                        Expr::Add(..) => Op::Add(a, b),
                        Expr::Sub(..) => Op::Sub(a, b),
                        Expr::Mul(..) => Op::Mul(a, b),
                        _ => Op::Div(a, b),
                    }
                }
                Expr::Pow(a, q) => Op::Pow(self.emit(a, lambda, seen)?, PowPlan::new(*q)),
                Expr::Sin(a) | Expr::Cos(a) | Expr::Exp(a) | Expr::Log(a) | Expr::Abs(a) => {
                    let a = self.emit(a, lambda, seen)?;
                    match e {
                        Expr::Sin(_) => Op::Sin(a),
                        Expr::Cos(_) => Op::Cos(a),
                        Expr::Exp(_) => Op::Exp(a),
                        Expr::Log(_) => Op::Log(a),
                        _ => Op::Abs(a),
                    }
                }
            }
        };
        let slot = self.ops.len();
        self.ops.push(op);
        self.origins.push(e);
        seen.insert(e, slot);
        Ok(slot)
    }

    /// Scratch space for [`Program::run`].
    pub fn stack(&self) -> Vec<T> {
        vec![T::zero(); self.ops.len()]
    }

    /// Number of distinct slots.
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn eval(&self, x: &[T]) -> Result<T, EvalError> {
        let mut stack = self.stack();
        self.run(x, &mut stack)
    }

    /// Evaluates the first expression at `x` using caller-provided scratch space.
    pub fn run(&self, x: &[T], regs: &mut Vec<T>) -> Result<T, EvalError> {
        self.run_all(x, regs)?;
        Ok(regs[self.outputs[0]])
    }

    /// Evaluates every expression at `x`; read results with [`Program::output`].
    pub fn run_all(&self, x: &[T], regs: &mut Vec<T>) -> Result<(), EvalError> {
        regs.resize(self.ops.len(), T::zero());
        for (k, op) in self.ops.iter().enumerate() {
            let checked = |r: Result<T, EvalErrorKind>| r.or_else(|kind| fail(kind, self.origins[k]));
            let v = match *op {
                Op::Const(v) => v,
                Op::Var(i) => match x.get(i) {
                    Some(v) => *v,
                    None => return fail(EvalErrorKind::MissingCoordinate(i + 1), self.origins[k]),
                },
                Op::Add(a, b) => regs[a] + regs[b],
                Op::Sub(a, b) => regs[a] - regs[b],
                Op::Mul(a, b) => regs[a] * regs[b],
                Op::Div(a, b) => checked(checked_div(regs[a], regs[b]))?,
                Op::Pow(a, plan) => checked(checked_pow(regs[a], plan))?,
                Op::Sin(a) => regs[a].sin(),
                Op::Cos(a) => regs[a].cos(),
                Op::Exp(a) => regs[a].exp(),
                Op::Log(a) => checked(checked_ln(regs[a]))?,
                Op::Abs(a) => regs[a].abs(),
            };
            if v.is_nan() {
                return fail(EvalErrorKind::NotANumber, self.origins[k]);
            }
            regs[k] = v;
        }
        Ok(())
    }

    /// Value of expression `i` after [`Program::run_all`].
    #[inline]
    pub fn output(&self, regs: &[T], i: usize) -> T {
        regs[self.outputs[i]]
    }
}
