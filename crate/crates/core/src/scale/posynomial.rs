//! Posynomial normal form: positive-coefficient sums of monomials
//! `c · g1^q1 ⋯ gk^qk` in the base gauges, and ratios thereof.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::scalar::{Rational, Scalar};

/// `c · g1^q1 ⋯ gk^qk` with `c > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    coefficient: Rational,
    exponents: Vec<Rational>,
}

impl Monomial {
    /// Returns `None` unless `coefficient > 0`.
    pub fn new(coefficient: Rational, exponents: Vec<Rational>) -> Option<Self> {
        coefficient.is_positive().then_some(Monomial {
            coefficient,
            exponents,
        })
    }

    pub fn unit(k: usize) -> Self {
        Monomial {
            coefficient: Rational::one(),
            exponents: vec![Rational::zero(); k],
        }
    }

    pub fn constant(c: Rational, k: usize) -> Option<Self> {
        Monomial::new(c, vec![Rational::zero(); k])
    }

    /// `g_{index}^power` with unit coefficient (`index` is 0-based).
    pub fn gauge_power(index: usize, power: Rational, k: usize) -> Self {
        let mut exponents = vec![Rational::zero(); k];
        exponents[index] = power;
        Monomial {
            coefficient: Rational::one(),
            exponents,
        }
    }

    pub fn from_integer_exponents(exponents: &[i64]) -> Self {
        Monomial {
            coefficient: Rational::one(),
            exponents: exponents.iter().map(|&e| Rational::from_integer(e)).collect(),
        }
    }

    pub fn coefficient(&self) -> Rational {
        self.coefficient
    }

    pub fn exponents(&self) -> &[Rational] {
        &self.exponents
    }

    pub fn arity(&self) -> usize {
        self.exponents.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            coefficient: self.coefficient * other.coefficient,
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn recip(&self) -> Monomial {
        Monomial {
            coefficient: self.coefficient.recip(),
            exponents: self.exponents.iter().map(|e| -e).collect(),
        }
    }

    /// Growth comparison under the hierarchy order: `Greater` means `self`
    /// eventually exceeds `other`. Exponents decide lexicographically, the
    /// fastest-decaying gauge first; a larger exponent there means smaller.
    pub fn growth_cmp(&self, other: &Monomial) -> Ordering {
        self.exponent_growth_cmp(other)
            .then_with(|| self.coefficient.cmp(&other.coefficient))
    }

    pub(crate) fn exponent_growth_cmp(&self, other: &Monomial) -> Ordering {
        other.exponents.cmp(&self.exponents)
    }

    /// Largest absolute exponent.
    pub fn degree(&self) -> Rational {
        self.exponents
            .iter()
            .map(|e| e.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Value at one schedule point given the gauge values there.
    pub fn eval<T: Scalar>(&self, gauges: &[T]) -> T {
        let mut v = T::from_rational(self.coefficient);
        for (g, q) in gauges.iter().zip(&self.exponents) {
            if q.is_zero() {
                continue;
            }
            v = v * if q.is_integer() {
                g.powi(*q.numer() as i32)
            } else {
                g.powf(T::from_rational(*q))
            };
        }
        v
    }

    pub fn render(&self, names: &[String]) -> String {
        let mut parts = Vec::new();
        if !self.coefficient.is_one() {
            parts.push(self.coefficient.to_string());
        }
        for (q, name) in self.exponents.iter().zip(names) {
            if q.is_zero() {
                continue;
            }
            if q.is_one() {
                parts.push(name.clone());
            } else {
                parts.push(format!("{name}^({q})"));
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.arity()).map(|i| format!("g{i}")).collect();
        f.write_str(&self.render(&names))
    }
}

/// Nonempty sum of monomials with distinct exponent vectors, largest growth first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Posynomial {
    terms: Vec<Monomial>,
}

impl Posynomial {
    /// Merges equal exponent vectors and sorts. `None` if `terms` is empty.
    pub fn new(mut terms: Vec<Monomial>) -> Option<Self> {
        if terms.is_empty() {
            return None;
        }
        terms.sort_by(|a, b| a.exponent_growth_cmp(b).reverse());
        let mut merged: Vec<Monomial> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.exponents == t.exponents => last.coefficient += t.coefficient,
                _ => merged.push(t),
            }
        }
        Some(Posynomial { terms: merged })
    }

    pub fn monomial(m: Monomial) -> Self {
        Posynomial { terms: vec![m] }
    }

    pub fn one(k: usize) -> Self {
        Posynomial::monomial(Monomial::unit(k))
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn leading(&self) -> &Monomial {
        &self.terms[0]
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn add(&self, other: &Posynomial) -> Posynomial {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Posynomial::new(terms).unwrap()
    }

    pub fn mul(&self, other: &Posynomial) -> Posynomial {
        let terms = self
            .terms
            .iter()
            .flat_map(|a| other.terms.iter().map(move |b| a.mul(b)))
            .collect();
        Posynomial::new(terms).unwrap()
    }

    pub fn scale_by(&self, m: &Monomial) -> Posynomial {
        Posynomial::new(self.terms.iter().map(|t| t.mul(m)).collect()).unwrap()
    }

    pub fn eval<T: Scalar>(&self, gauges: &[T]) -> T {
        self.terms
            .iter()
            .fold(T::zero(), |acc, t| acc + t.eval(gauges))
    }

    pub fn render(&self, names: &[String]) -> String {
        let parts: Vec<String> = self.terms.iter().map(|t| t.render(names)).collect();
        parts.join(" + ")
    }
}

/// Sign of the eventual behaviour of `rhs - lhs` under the hierarchy order.
///
/// `Greater` means `rhs` eventually exceeds `lhs`; `Equal` means the two
/// posynomials are identical.
pub fn eventual_difference_sign(lhs: &Posynomial, rhs: &Posynomial) -> Ordering {
    let (mut i, mut j) = (0, 0);
    let (a, b) = (&lhs.terms, &rhs.terms);
    while i < a.len() || j < b.len() {
        let order = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => x.exponent_growth_cmp(y),
            (Some(_), None) => Ordering::Greater,
            (None, Some(_)) => Ordering::Less,
            (None, None) => unreachable!(),
        };
        match order {
            Ordering::Greater => return Ordering::Less,
            Ordering::Less => return Ordering::Greater,
            Ordering::Equal => {
                let c = b[j].coefficient.cmp(&a[i].coefficient);
                if c != Ordering::Equal {
                    return c;
                }
                i += 1;
                j += 1;
            }
        }
    }
    Ordering::Equal
}

/// A ratio of posynomials: a general element of the scale set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScaleElement {
    numerator: Posynomial,
    denominator: Posynomial,
}

impl ScaleElement {
    pub fn new(numerator: Posynomial, denominator: Posynomial) -> Self {
        ScaleElement {
            numerator,
            denominator,
        }
    }

    pub fn from_monomial(m: Monomial) -> Self {
        let k = m.arity();
        ScaleElement::new(Posynomial::monomial(m), Posynomial::one(k))
    }

    pub fn from_posynomial(p: Posynomial) -> Self {
        let k = p.leading().arity();
        ScaleElement::new(p, Posynomial::one(k))
    }

    pub fn numerator(&self) -> &Posynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &Posynomial {
        &self.denominator
    }

    pub fn arity(&self) -> usize {
        self.numerator.leading().arity()
    }

    /// Swaps numerator and denominator.
    pub fn invert(&self) -> ScaleElement {
        ScaleElement::new(self.denominator.clone(), self.numerator.clone())
    }

    /// Folds a single-monomial denominator into the numerator.
    pub fn reduced(self) -> ScaleElement {
        if self.denominator.is_monomial() {
            let inv = self.denominator.leading().recip();
            let k = inv.arity();
            ScaleElement::new(self.numerator.scale_by(&inv), Posynomial::one(k))
        } else {
            self
        }
    }

    pub fn add(&self, other: &ScaleElement) -> ScaleElement {
        let sum = if self.denominator == other.denominator {
            ScaleElement::new(self.numerator.add(&other.numerator), self.denominator.clone())
        } else {
            ScaleElement::new(
                self.numerator
                    .mul(&other.denominator)
                    .add(&other.numerator.mul(&self.denominator)),
                self.denominator.mul(&other.denominator),
            )
        };
        sum.reduced()
    }

    pub fn mul(&self, other: &ScaleElement) -> ScaleElement {
        ScaleElement::new(
            self.numerator.mul(&other.numerator),
            self.denominator.mul(&other.denominator),
        )
        .reduced()
    }

    pub fn div(&self, other: &ScaleElement) -> ScaleElement {
        self.mul(&other.invert())
    }

    /// Integer power; negative powers invert first.
    pub fn powi(&self, n: i32) -> ScaleElement {
        let base = if n < 0 { self.invert() } else { self.clone() };
        let k = self.arity();
        let mut out = ScaleElement::from_monomial(Monomial::unit(k));
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// The element as a single monomial, when it is one.
    pub fn as_monomial(&self) -> Option<Monomial> {
        (self.numerator.is_monomial() && self.denominator.is_monomial()).then(|| {
            self.numerator
                .leading()
                .mul(&self.denominator.leading().recip())
        })
    }

    pub fn eval<T: Scalar>(&self, gauges: &[T]) -> T {
        self.numerator.eval(gauges) / self.denominator.eval(gauges)
    }

    pub fn render(&self, names: &[String]) -> String {
        let num = self.numerator.render(names);
        if self.denominator == Posynomial::one(self.arity()) {
            num
        } else {
            format!("({num})/({})", self.denominator.render(names))
        }
    }
}

impl From<Monomial> for ScaleElement {
    fn from(m: Monomial) -> Self {
        ScaleElement::from_monomial(m)
    }
}

impl fmt::Display for ScaleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.arity()).map(|i| format!("g{i}")).collect();
        f.write_str(&self.render(&names))
    }
}
