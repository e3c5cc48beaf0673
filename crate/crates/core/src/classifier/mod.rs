//! Moderate and negligible function nets, the zero-order reduction and the
//! canonical embedding.
//!
//! A net `u` is moderate (negligible) when every seminorm net
//! `(P_{K,l}(u_λ))_λ` lies in the ring `A_B` (the ideal `I_B`). Only the boxes
//! and orders handed in are examined, so every positive verdict is relative
//! to that finite family and to the frontier degree `D`.

mod replay;

use std::fmt;

use thiserror::Error;

pub use replay::{
    combine_gauges, measured_derivative, normalize_witness, taylor_derivative_bound, Abort,
    Hypothesis, OrderCheck,
    ReplayStep, TheoremReport,
};

use crate::expr::NetExpr;
use crate::scalar::{Rational, Scalar};
use crate::scale::{
    dominates, in_ideal, in_ring, Certificate, Evidence, Monomial, Refutation, ScaleElement,
    ScaleError, ScaleFamily, Verdict,
};
use crate::seminorm::{CompactBox, Derivatives, Grid, SampledSeminormNet, SeminormError, SupTable};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Seminorm(#[from] SeminormError),
    #[error(transparent)]
    Scale(#[from] ScaleError),
    #[error("at least one box is required")]
    NoBoxes,
    #[error("box {index} has dimension {found}, net has dimension {expected}")]
    Dimension {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("`{0}` depends on λ")]
    LambdaDependent(String),
    #[error("step b/β = {ratio} exceeds δ/2 = 1/2")]
    StepTooLarge { ratio: f64 },
    #[error("b and β must be positive, got b = {b}, β = {beta}")]
    NonPositive { b: f64, beta: f64 },
    #[error("axis {axis} outside 1..={dimension}")]
    BadAxis { axis: usize, dimension: usize },
}

/// Which membership a report was asked to certify.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Question {
    Moderate,
    Negligible,
}

/// Outcome over all boxes and orders.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Overall {
    Moderate,
    Negligible,
    /// Some seminorm net is refuted against `g1^power`.
    Refuted { power: u32 },
    /// Search exhausted at the frontier degree.
    NotCertified { degree: u32 },
}

impl fmt::Display for Overall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Overall::Moderate => f.write_str("moderate"),
            Overall::Negligible => f.write_str("negligible"),
            Overall::Refuted { power } => write!(f, "refuted at n={power}"),
            Overall::NotCertified { degree } => write!(f, "not certified at degree {degree}"),
        }
    }
}

/// Verdicts for one seminorm net `P_{K,l}(u)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Entry<T> {
    pub net: SampledSeminormNet<T>,
    /// Ring membership; for a certified negligible net this is `|P| ≪ g1`.
    pub ring: Verdict<T>,
    /// Ideal membership, present for negligibility questions.
    pub ideal: Option<Verdict<T>>,
}

impl<T: Scalar> Entry<T> {
    pub fn region(&self) -> &CompactBox<T> {
        self.net.region()
    }

    pub fn order(&self) -> usize {
        self.net.order()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassificationReport<T> {
    pub question: Question,
    pub net: String,
    pub degree: u32,
    /// Sorted by box, then by order.
    pub entries: Vec<Entry<T>>,
    pub overall: Overall,
}

impl<T: Scalar> ClassificationReport<T> {
    fn assemble(question: Question, net: String, degree: u32, entries: Vec<Entry<T>>) -> Self {
        let overall = match question {
            Question::Moderate => {
                if entries.iter().all(|e| e.ring.holds()) {
                    Overall::Moderate
                } else {
                    Overall::NotCertified { degree }
                }
            }
            Question::Negligible => {
                fn ideal<T>(e: &Entry<T>) -> &Verdict<T> {
                    e.ideal.as_ref().expect("negligibility entries carry ideal verdicts")
                }
                if entries.iter().all(|e| ideal(e).holds()) {
                    Overall::Negligible
                } else if let Some(Verdict::Fails(r)) = entries.iter().map(ideal).find(|v| v.fails()) {
                    Overall::Refuted {
                        power: r.power.unwrap_or(1),
                    }
                } else {
                    Overall::NotCertified { degree }
                }
            }
        };
        ClassificationReport {
            question,
            net,
            degree,
            entries,
            overall,
        }
    }

    pub fn is_moderate(&self) -> bool {
        self.entries.iter().all(|e| e.ring.holds())
    }

    pub fn is_negligible(&self) -> bool {
        self.overall == Overall::Negligible
    }

    /// Ring witnesses, one per entry.
    pub fn witnesses(&self) -> Vec<Option<&ScaleElement>> {
        self.entries.iter().map(|e| e.ring.witness()).collect()
    }

    /// First entry whose asked-for verdict does not hold.
    pub fn first_failure(&self) -> Option<&Entry<T>> {
        self.entries.iter().find(|e| match self.question {
            Question::Moderate => !e.ring.holds(),
            Question::Negligible => !e.ideal.as_ref().is_some_and(Verdict::holds),
        })
    }
}

/// Outcome of [`Classifier::embedding`].
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingReport<T> {
    pub report: ClassificationReport<T>,
    /// `P_{K,0}(f) = 0` on every box.
    pub vanishes: bool,
    /// Certified negligible only if `f` vanishes.
    pub injective: bool,
}

/// Outcome of [`Classifier::equality`].
#[derive(Clone, Debug, PartialEq)]
pub struct EqualityReport<T> {
    pub verdict: Verdict<T>,
    pub difference: ClassificationReport<T>,
}

/// Classification settings: scale family, frontier degree `D` and grid.
#[derive(Clone, Copy, Debug)]
pub struct Classifier<'a, T> {
    family: &'a ScaleFamily<T>,
    degree: u32,
    grid: Grid,
}

impl<'a, T: Scalar> Classifier<'a, T> {
    pub fn new(family: &'a ScaleFamily<T>, degree: u32) -> Self {
        Classifier {
            family,
            degree,
            grid: Grid::default(),
        }
    }

    pub fn with_grid(self, grid: Grid) -> Self {
        Classifier { grid, ..self }
    }

    pub fn family(&self) -> &'a ScaleFamily<T> {
        self.family
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    fn validate(&self, u: &NetExpr, boxes: &[CompactBox<T>]) -> Result<(), ClassifyError> {
        if boxes.is_empty() {
            return Err(ClassifyError::NoBoxes);
        }
        for (index, k) in boxes.iter().enumerate() {
            if k.dimension() != u.dimension() {
                return Err(ClassifyError::Dimension {
                    index,
                    expected: u.dimension(),
                    found: k.dimension(),
                });
            }
        }
        Ok(())
    }

    pub(crate) fn table(
        &self,
        d: &mut Derivatives,
        region: &CompactBox<T>,
        max_order: usize,
    ) -> Result<SupTable<T>, ClassifyError> {
        Ok(SupTable::build(d, region, max_order, self.family.schedule(), self.grid)?)
    }

    fn g1(&self, power: i64) -> ScaleElement {
        ScaleElement::from_monomial(Monomial::gauge_power(
            0,
            Rational::from_integer(power),
            self.family.arity(),
        ))
    }

    pub(crate) fn entry(
        &self,
        net: SampledSeminormNet<T>,
        question: Question,
    ) -> Result<Entry<T>, ClassifyError> {
        let fam = self.family;
        Ok(match question {
            Question::Moderate => Entry {
                ring: in_ring(net.net(), fam, self.degree)?,
                ideal: None,
                net,
            },
            Question::Negligible => {
                let ideal = in_ideal(net.net(), fam, self.degree)?;
                let ring = if ideal.holds() {
                    dominates(net.net(), &self.g1(1), fam)?
                } else {
                    in_ring(net.net(), fam, self.degree)?
                };
                Entry {
                    ring,
                    ideal: Some(ideal),
                    net,
                }
            }
        })
    }

    fn classify(
        &self,
        u: &NetExpr,
        boxes: &[CompactBox<T>],
        order: usize,
        question: Question,
    ) -> Result<ClassificationReport<T>, ClassifyError> {
        self.validate(u, boxes)?;
        let source = u.to_string();
        let mut d = Derivatives::new(u);
        let mut entries = Vec::new();
        for k in boxes {
            let table = self.table(&mut d, k, order)?;
            for l in 0..=order {
                let net = SampledSeminormNet::from_table(&table, l, &source)?;
                entries.push(self.entry(net, question)?);
            }
        }
        Ok(ClassificationReport::assemble(question, source, self.degree, entries))
    }

    /// `in_ring` on `P_{K,l}(u)` for every box and every `l <= order`.
    pub fn moderate(
        &self,
        u: &NetExpr,
        boxes: &[CompactBox<T>],
        order: usize,
    ) -> Result<ClassificationReport<T>, ClassifyError> {
        self.classify(u, boxes, order, Question::Moderate)
    }

    /// `in_ideal` on `P_{K,l}(u)` for every box and every `l <= order`.
    pub fn negligible(
        &self,
        u: &NetExpr,
        boxes: &[CompactBox<T>],
        order: usize,
    ) -> Result<ClassificationReport<T>, ClassifyError> {
        self.classify(u, boxes, order, Question::Negligible)
    }

    /// `[u] = [v]` in the factor algebra: `u - v` negligible.
    pub fn equality(
        &self,
        u: &NetExpr,
        v: &NetExpr,
        boxes: &[CompactBox<T>],
        order: usize,
    ) -> Result<EqualityReport<T>, ClassifyError> {
        let w = u.difference(v).ok_or(ClassifyError::Dimension {
            index: 0,
            expected: u.dimension(),
            found: v.dimension(),
        })?;
        let difference = self.negligible(&w, boxes, order)?;
        let ideals = || difference.entries.iter().map(|e| e.ideal.as_ref().unwrap());
        let verdict = match difference.overall {
            Overall::Negligible => {
                let threshold = ideals()
                    .filter_map(|v| v.certificate().map(|c| c.threshold))
                    .fold(T::one(), T::min);
                let evidence = if ideals().all(|v| v.evidence() == Some(Evidence::Symbolic)) {
                    Evidence::Symbolic
                } else {
                    Evidence::Numeric
                };
                Verdict::Holds(Certificate {
                    witness: Some(self.g1(self.degree as i64)),
                    threshold,
                    evidence,
                    degree: Some(self.degree),
                })
            }
            Overall::Refuted { .. } => match ideals().find(|v| v.fails()) {
                Some(Verdict::Fails(r)) => Verdict::Fails(Refutation { ..r.clone() }),
                _ => unreachable!("refuted reports carry a failing entry"),
            },
            _ => ideals()
                .find(|v| v.is_unknown())
                .cloned()
                .expect("uncertified reports carry an unknown entry"),
        };
        Ok(EqualityReport { verdict, difference })
    }

    /// Injectivity of `f ↦ [(f)_λ]` on the given boxes.
    pub fn embedding(
        &self,
        f: &NetExpr,
        boxes: &[CompactBox<T>],
    ) -> Result<EmbeddingReport<T>, ClassifyError> {
        if f.expr().depends_on_lambda() {
            return Err(ClassifyError::LambdaDependent(f.to_string()));
        }
        let report = self.negligible(f, boxes, 0)?;
        let vanishes = report
            .entries
            .iter()
            .all(|e| e.net.values().iter().all(|v| v.is_zero()));
        let injective = !report.is_negligible() || vanishes;
        Ok(EmbeddingReport {
            report,
            vanishes,
            injective,
        })
    }
}

pub fn is_moderate<T: Scalar>(
    u: &NetExpr,
    boxes: &[CompactBox<T>],
    order: usize,
    family: &ScaleFamily<T>,
    degree: u32,
) -> Result<ClassificationReport<T>, ClassifyError> {
    Classifier::new(family, degree).moderate(u, boxes, order)
}

pub fn is_negligible<T: Scalar>(
    u: &NetExpr,
    boxes: &[CompactBox<T>],
    order: usize,
    family: &ScaleFamily<T>,
    degree: u32,
) -> Result<ClassificationReport<T>, ClassifyError> {
    Classifier::new(family, degree).negligible(u, boxes, order)
}

pub fn zero_order_reduction<T: Scalar>(
    u: &NetExpr,
    boxes: &[CompactBox<T>],
    order: usize,
    family: &ScaleFamily<T>,
    degree: u32,
) -> Result<TheoremReport<T>, ClassifyError> {
    Classifier::new(family, degree).zero_order_reduction(u, boxes, order)
}

pub fn equality_in_algebra<T: Scalar>(
    u: &NetExpr,
    v: &NetExpr,
    boxes: &[CompactBox<T>],
    order: usize,
    family: &ScaleFamily<T>,
    degree: u32,
) -> Result<Verdict<T>, ClassifyError> {
    Ok(Classifier::new(family, degree).equality(u, v, boxes, order)?.verdict)
}

pub fn embedding_injectivity_check<T: Scalar>(
    f: &NetExpr,
    boxes: &[CompactBox<T>],
    family: &ScaleFamily<T>,
    degree: u32,
) -> Result<bool, ClassifyError> {
    Ok(Classifier::new(family, degree).embedding(f, boxes)?.injective)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scale::{Schedule, DEFAULT_DEGREE};

    fn fam() -> ScaleFamily<f64> {
        ScaleFamily::colombeau()
    }

    fn unit() -> Vec<CompactBox<f64>> {
        vec![CompactBox::new(vec![(0.0, 1.0)]).unwrap()]
    }

    fn net(text: &str) -> NetExpr {
        NetExpr::parse(text, 1).unwrap()
    }

    fn lam(n: i64) -> ScaleElement {
        ScaleElement::from_monomial(Monomial::from_integer_exponents(&[n]))
    }

    #[test]
    fn oscillation_is_moderate() {
        let r = is_moderate(&net("sin(x1/lambda)"), &unit(), 2, &fam(), 3).unwrap();
        assert_eq!(r.overall, Overall::Moderate);
        // grid sups sit just below 1, 1/λ, 1/λ²
        let w: Vec<ScaleElement> = r.witnesses().into_iter().map(|w| w.unwrap().clone()).collect();
        assert_eq!(w, vec![lam(0), lam(-1), lam(-2)]);
    }

    #[test]
    fn polynomial_is_moderate_with_bounded_witnesses() {
        let r = is_moderate(&net("x1^2"), &unit(), 3, &fam(), 3).unwrap();
        assert!(r.is_moderate());
        for w in r.witnesses() {
            // λ-independent nets need at most the smallest negative power
            let e = w.unwrap().as_monomial().unwrap().exponents()[0];
            assert!(e >= Rational::from_integer(-1) && e <= Rational::from_integer(0), "{e}");
        }
    }

    #[test]
    fn exponential_growth_is_not_certified() {
        // e^{1/λ} overflows on the standard tail; a slower schedule keeps it finite
        let f = ScaleFamily::declare(
            vec![crate::expr::GaugeExpr::parse("lambda").unwrap()],
            Schedule::geometric(1.0, 0.875, 40).unwrap(),
            10,
        )
        .unwrap();
        let r = is_moderate(&net("exp(1/lambda)*x1"), &unit(), 0, &f, 6).unwrap();
        assert_eq!(r.overall, Overall::NotCertified { degree: 6 });
        assert!(r.entries[0].ring.is_unknown());
    }

    #[test]
    fn zero_is_negligible() {
        let r = is_negligible(&net("0"), &unit(), 3, &fam(), DEFAULT_DEGREE).unwrap();
        assert_eq!(r.overall, Overall::Negligible);
        assert!(r.is_moderate());
    }

    #[test]
    fn damped_oscillation_is_negligible() {
        let r = is_negligible(&net("exp(-1/lambda)*sin(x1/lambda)"), &unit(), 1, &fam(), 10).unwrap();
        assert_eq!(r.overall, Overall::Negligible);
        assert_eq!(r.entries.len(), 2);
        for e in &r.entries {
            assert_eq!(e.ideal.as_ref().unwrap().certificate().unwrap().degree, Some(10));
            // N ⊂ M with witness g1
            assert_eq!(e.ring.witness(), Some(&lam(1)));
        }
    }

    #[test]
    fn linear_amplitude_fails_at_two() {
        let r = is_negligible(&net("lambda*sin(x1/lambda)"), &unit(), 0, &fam(), 2).unwrap();
        assert_eq!(r.overall, Overall::Refuted { power: 2 });
        assert!(r.is_moderate());
    }

    #[test]
    fn embedding_examples() {
        let f = fam();
        let one = Classifier::new(&f, 10).embedding(&net("1"), &unit()).unwrap();
        assert!(one.injective && !one.vanishes);
        assert_eq!(one.report.overall, Overall::Refuted { power: 1 });
        let zero = Classifier::new(&f, 10).embedding(&net("0"), &unit()).unwrap();
        assert!(zero.injective && zero.vanishes && zero.report.is_negligible());
        let s = Classifier::new(&f, 10).embedding(&net("sin(x1)"), &unit()).unwrap();
        assert!(s.injective && !s.report.is_negligible());
        assert!((s.report.entries[0].net.values()[0] - 1f64.sin()).abs() < 1e-15);
        assert!(matches!(
            embedding_injectivity_check(&net("lambda*x1"), &unit(), &f, 10),
            Err(ClassifyError::LambdaDependent(_))
        ));
    }

    #[test]
    fn equality_examples() {
        let f = fam();
        let u = net("sin(x1/lambda)");
        let v = net("sin(x1/lambda) + exp(-1/lambda)");
        let eq = equality_in_algebra(&u, &v, &unit(), 1, &f, 10).unwrap();
        assert!(eq.holds());
        assert_eq!(eq.certificate().unwrap().degree, Some(10));
        assert!(equality_in_algebra(&u, &u, &unit(), 1, &f, 10).unwrap().holds());
        let w = net("sin(x1/lambda) + lambda");
        match equality_in_algebra(&u, &w, &unit(), 1, &f, 10).unwrap() {
            Verdict::Fails(r) => assert_eq!(r.power, Some(2)),
            other => panic!("{other:?}"),
        }
        // symmetry
        let back = equality_in_algebra(&w, &u, &unit(), 1, &f, 10).unwrap();
        assert!(back.fails());
    }

    #[test]
    fn input_validation() {
        let f = fam();
        assert_eq!(is_moderate(&net("x1"), &[], 0, &f, 3).unwrap_err(), ClassifyError::NoBoxes);
        let square = vec![CompactBox::cube(0.0, 1.0, 2).unwrap()];
        assert!(matches!(
            is_moderate(&net("x1"), &square, 0, &f, 3),
            Err(ClassifyError::Dimension { .. })
        ));
    }
}
