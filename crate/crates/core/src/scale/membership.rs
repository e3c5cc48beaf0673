//! Eventual domination and semi-decision of ring/ideal membership.

use std::borrow::Cow;
use std::cmp::Ordering;

use super::posynomial::eventual_difference_sign;
use super::{
    Budget, Certificate, Evidence, Monomial, Refutation, SampledNet, ScaleElement, ScaleError,
    ScaleFamily, Verdict,
};
use crate::scalar::{le_rounded, Rational, Scalar};

/// Default depth of the frontier searched for witnesses.
pub const DEFAULT_DEGREE: u32 = 10;

/// Argument of the comparison operations.
#[derive(Clone, Copy, Debug)]
pub enum Operand<'a, T> {
    Element(&'a ScaleElement),
    Net(&'a SampledNet<T>),
}

impl<'a, T> From<&'a ScaleElement> for Operand<'a, T> {
    fn from(e: &'a ScaleElement) -> Self {
        Operand::Element(e)
    }
}

impl<'a, T> From<&'a SampledNet<T>> for Operand<'a, T> {
    fn from(n: &'a SampledNet<T>) -> Self {
        Operand::Net(n)
    }
}

impl<'a, T: Scalar> Operand<'a, T> {
    fn sampled(&self, family: &ScaleFamily<T>) -> Result<Cow<'a, SampledNet<T>>, ScaleError> {
        match *self {
            Operand::Element(e) => Ok(Cow::Owned(SampledNet::from_element(family, e))),
            Operand::Net(n) => {
                if n.schedule() != family.schedule() {
                    return Err(ScaleError::ScheduleMismatch {
                        left: n.len(),
                        right: family.schedule().len(),
                    });
                }
                Ok(Cow::Borrowed(n))
            }
        }
    }
}

struct TailScan {
    /// Smallest index from which `a <= b` at every later point, if any.
    from: Option<usize>,
    /// Tail indices with `a > b` (beyond rounding slack).
    violations: Vec<usize>,
}

fn scan<T: Scalar>(a: &[T], b: &[T], family: &ScaleFamily<T>) -> TailScan {
    let mut from = None;
    for j in (0..a.len()).rev() {
        if le_rounded(a[j], b[j]) {
            from = Some(j);
        } else {
            break;
        }
    }
    let violations = family
        .tail_indices()
        .filter(|&j| !le_rounded(a[j], b[j]))
        .collect();
    TailScan { from, violations }
}

/// Decides `|a| ≪ b`: `|a(λ)| <= b(λ)` eventually.
///
/// Two scale elements are compared on the normal form: the leading monomial
/// of `num(b)·den(a) - num(a)·den(b)` under the hierarchy order fixes the
/// sign. Anything involving a sampled net is checked on the tail only and
/// carries [`Evidence::Numeric`].
pub fn dominates<'a, T: Scalar>(
    a: impl Into<Operand<'a, T>>,
    b: impl Into<Operand<'a, T>>,
    family: &ScaleFamily<T>,
) -> Result<Verdict<T>, ScaleError> {
    let (a, b) = (a.into(), b.into());
    let sa = a.sampled(family)?;
    let sb = b.sampled(family)?;
    let abs_a: Vec<T> = sa.values().iter().map(|v| v.abs()).collect();
    let s = scan(&abs_a, sb.values(), family);
    let tail_start = family.tail_start();
    let schedule = family.schedule();
    let witness = match b {
        Operand::Element(e) => Some(e.clone()),
        Operand::Net(_) => None,
    };

    if let (Operand::Element(ea), Operand::Element(eb)) = (a, b) {
        let lhs = ea.numerator().mul(eb.denominator());
        let rhs = eb.numerator().mul(ea.denominator());
        return Ok(match eventual_difference_sign(&lhs, &rhs) {
            Ordering::Less => {
                let mut counterexamples: Vec<T> = s.violations.iter().map(|&j| schedule[j]).collect();
                if counterexamples.is_empty() {
                    // below sampling resolution; the most adverse tail point
                    let worst = family
                        .tail_indices()
                        .max_by(|&i, &j| {
                            (abs_a[i] / sb.values()[i])
                                .partial_cmp(&(abs_a[j] / sb.values()[j]))
                                .unwrap_or(Ordering::Equal)
                        })
                        .unwrap();
                    counterexamples.push(schedule[worst]);
                }
                Verdict::Fails(Refutation {
                    counterexamples,
                    evidence: Evidence::Symbolic,
                    power: None,
                })
            }
            Ordering::Equal | Ordering::Greater => Verdict::Holds(Certificate {
                witness,
                threshold: schedule[s.from.map_or(tail_start, |j| j.min(tail_start))],
                evidence: Evidence::Symbolic,
                degree: None,
            }),
        });
    }

    Ok(if s.violations.is_empty() {
        Verdict::Holds(Certificate {
            witness,
            threshold: schedule[s.from.unwrap_or(tail_start).min(tail_start)],
            evidence: Evidence::Numeric,
            degree: None,
        })
    } else {
        Verdict::Fails(Refutation {
            counterexamples: s.violations.iter().map(|&j| schedule[j]).collect(),
            evidence: Evidence::Numeric,
            power: None,
        })
    })
}

/// Unit-coefficient monomials with integer exponents in `[-D, D]^k`,
/// largest growth first.
pub fn frontier(arity: usize, degree: u32) -> Vec<Monomial> {
    let d = degree as i64;
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<i64>| {
                (-d..=d).map(move |e| {
                    let mut v = prefix.clone();
                    v.push(e);
                    v
                })
            })
            .collect();
    }
    // ascending lexicographic exponents == descending growth
    out.sort();
    out.iter().map(|e| Monomial::from_integer_exponents(e)).collect()
}

/// Semi-decides `a ∈ A_B`: searches the degree-`D` frontier from the
/// smallest growth upwards for `w` with `|a| ≪ w`.
///
/// The first success is returned, so the witness is the smallest-growth one.
/// Exhausting the frontier yields [`Verdict::Unknown`] at degree `D`.
pub fn in_ring<'a, T: Scalar>(
    a: impl Into<Operand<'a, T>>,
    family: &ScaleFamily<T>,
    degree: u32,
) -> Result<Verdict<T>, ScaleError> {
    let a = a.into();
    let mut last_refutation = Vec::new();
    for w in frontier(family.arity(), degree).into_iter().rev() {
        let w = ScaleElement::from_monomial(w);
        match dominates(a, &w, family)? {
            Verdict::Holds(cert) => return Ok(Verdict::Holds(cert)),
            Verdict::Fails(r) => last_refutation = r.counterexamples,
            Verdict::Unknown(_) => {}
        }
    }
    Ok(Verdict::Unknown(Budget {
        degree,
        reason: format!("no frontier monomial of degree <= {degree} dominates"),
        counterexamples: last_refutation,
    }))
}

/// Semi-decides `a ∈ I_B` by checking `|a| ≪ g1^n` for `n = 1..=D`.
///
/// `{g1^n}` is a decreasing chain cofinal in the scale set, so success
/// certifies membership up to degree `D`; the first failing `n` refutes.
pub fn in_ideal<'a, T: Scalar>(
    a: impl Into<Operand<'a, T>>,
    family: &ScaleFamily<T>,
    degree: u32,
) -> Result<Verdict<T>, ScaleError> {
    let a = a.into();
    if degree == 0 {
        return Ok(Verdict::Unknown(Budget {
            degree,
            reason: "ideal certification needs degree >= 1".into(),
            counterexamples: Vec::new(),
        }));
    }
    let k = family.arity();
    let mut threshold: Option<T> = None;
    let mut evidence = Evidence::Symbolic;
    let mut witness = None;
    for n in 1..=degree {
        let w = ScaleElement::from_monomial(Monomial::gauge_power(0, Rational::from_integer(n as i64), k));
        match dominates(a, &w, family)? {
            Verdict::Holds(cert) => {
                threshold = Some(match threshold {
                    Some(t) if t < cert.threshold => t,
                    _ => cert.threshold,
                });
                if cert.evidence == Evidence::Numeric {
                    evidence = Evidence::Numeric;
                }
                witness = Some(w);
            }
            Verdict::Fails(r) => {
                return Ok(Verdict::Fails(Refutation {
                    power: Some(n),
                    ..r
                }))
            }
            Verdict::Unknown(b) => return Ok(Verdict::Unknown(b)),
        }
    }
    Ok(Verdict::Holds(Certificate {
        witness,
        threshold: threshold.unwrap(),
        evidence,
        degree: Some(degree),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{Expr, GaugeExpr};
    use crate::scale::{normalize, Normalized, Posynomial, Schedule};

    fn fam() -> ScaleFamily<f64> {
        ScaleFamily::colombeau()
    }

    fn power_log() -> ScaleFamily<f64> {
        ScaleFamily::declare(
            vec![GaugeExpr::parse("lambda").unwrap(), GaugeExpr::parse("1/log(1/lambda)").unwrap()],
            Schedule::standard(),
            10,
        )
        .unwrap()
    }

    fn lam(n: i64) -> ScaleElement {
        ScaleElement::from_monomial(Monomial::from_integer_exponents(&[n]))
    }

    fn net(family: &ScaleFamily<f64>, text: &str) -> SampledNet<f64> {
        SampledNet::from_expr(family, &Expr::parse(text, 0).unwrap()).unwrap()
    }

    #[test]
    fn square_is_dominated_by_identity() {
        let f = fam();
        let v = dominates(&lam(2), &lam(1), &f).unwrap();
        let c = v.certificate().unwrap();
        assert_eq!(c.evidence, Evidence::Symbolic);
        assert_eq!(c.threshold, 0.5);
        // on a schedule starting at 1 the threshold is 1
        let from_one = ScaleFamily::declare(
            vec![GaugeExpr::parse("lambda").unwrap()],
            Schedule::geometric(1.0, 0.5, 40).unwrap(),
            10,
        )
        .unwrap();
        assert_eq!(dominates(&lam(2), &lam(1), &from_one).unwrap().certificate().unwrap().threshold, 1.0);
    }

    #[test]
    fn identity_is_not_dominated_by_square() {
        let f = fam();
        match dominates(&lam(1), &lam(2), &f).unwrap() {
            Verdict::Fails(r) => {
                assert_eq!(r.counterexamples.len(), 10);
                assert!(r.counterexamples.iter().all(|&l| l <= f.schedule()[30]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn log_factor_numeric_threshold() {
        let f = fam();
        let a = net(&f, "lambda");
        let b = net(&f, "lambda*log(1/lambda)");
        let c = dominates(&a, &b, &f).unwrap();
        let cert = c.certificate().unwrap();
        assert_eq!(cert.evidence, Evidence::Numeric);
        // largest schedule point below e^-1
        assert_eq!(cert.threshold, 0.25);
        assert!(cert.threshold <= (-1f64).exp());
    }

    #[test]
    fn frontier_enumeration() {
        let f1 = frontier(1, 1);
        assert_eq!(
            f1,
            vec![
                Monomial::from_integer_exponents(&[-1]),
                Monomial::from_integer_exponents(&[0]),
                Monomial::from_integer_exponents(&[1]),
            ]
        );
        assert_eq!(frontier(1, 2).len(), 5);
        let f2 = frontier(2, 1);
        assert_eq!(f2.len(), 9);
        for pair in f2.windows(2) {
            assert_eq!(pair[0].growth_cmp(&pair[1]), Ordering::Greater);
        }
    }

    #[test]
    fn ring_membership_examples() {
        let f = fam();
        let v = in_ring(&lam(-3), &f, 3).unwrap();
        assert_eq!(v.witness(), Some(&lam(-3)));
        assert_eq!(v.evidence(), Some(Evidence::Symbolic));

        // smallest-growth witness: e^{-1/λ} <= λ on (0, 1]
        let decay = net(&f, "exp(-1/lambda)");
        let v = in_ring(&decay, &f, 1).unwrap();
        assert_eq!(v.witness(), Some(&lam(1)));
        assert_eq!(v.evidence(), Some(Evidence::Numeric));

        // e^{1/λ} is beyond every λ^-n
        let small = ScaleFamily::declare(
            vec![GaugeExpr::parse("lambda").unwrap()],
            Schedule::geometric(1.0, 0.875, 40).unwrap(),
            10,
        )
        .unwrap();
        let blow = net(&small, "exp(1/lambda)");
        match in_ring(&blow, &small, 6).unwrap() {
            Verdict::Unknown(b) => {
                assert_eq!(b.degree, 6);
                assert!(!b.counterexamples.is_empty());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ideal_membership_examples() {
        let f = fam();
        let v = in_ideal(&net(&f, "exp(-1/lambda)"), &f, 10).unwrap();
        assert_eq!(v.certificate().unwrap().degree, Some(10));
        match in_ideal(&lam(1), &f, 2).unwrap() {
            Verdict::Fails(r) => {
                assert_eq!(r.power, Some(2));
                assert_eq!(r.evidence, Evidence::Symbolic);
            }
            other => panic!("{other:?}"),
        }
        assert!(in_ideal(&SampledNet::zero(&f), &f, 7).unwrap().holds());
        assert!(in_ideal(&lam(1), &f, 0).unwrap().is_unknown());
    }

    #[test]
    fn numeric_path_agrees_with_symbolic_for_power_log() {
        let f = power_log();
        let a = match normalize(&Expr::parse("lambda*log(1/lambda)^3", 0).unwrap(), &f) {
            Normalized::Element(e) => e,
            other => panic!("{other:?}"),
        };
        let b = ScaleElement::from_posynomial(Posynomial::one(2));
        let sym = dominates(&a, &b, &f).unwrap();
        let sa = SampledNet::from_element(&f, &a);
        let sb = SampledNet::from_element(&f, &b);
        let num = dominates(&sa, &sb, &f).unwrap();
        assert!(sym.holds() && num.holds());
        assert_eq!(num.evidence(), Some(Evidence::Numeric));
    }

    #[test]
    fn mismatched_schedule_is_an_error() {
        let f = fam();
        let other = SampledNet::new(vec![0.5, 0.25], vec![1.0, 1.0], "short").unwrap();
        assert!(dominates(&other, &lam(0), &f).is_err());
    }
}
