//! The zero-order reduction: for a moderate net, negligibility of
//! `P_{K,0}` already forces negligibility of every `P_{K,l}`.
//!
//! Each derivative order is checked twice. Directly, by running `in_ideal`
//! on the measured `P_{K,j}(u)`. And by replaying the Taylor argument: for
//! `|α| = j - 1` and each axis `i`, with `L = K + [-δ/2, δ/2]^d`,
//!
//! ```text
//! sup_K |∂_i ∂^α u| <= 2 (β/b) P_{L,0}(∂^α u) + (1/2) (b/β) P_{L,2}(∂^α u)
//! ```
//!
//! where `β` comes from the moderateness witness of `P_{L,2}(∂^α u)` and `b`
//! from the ideal certificate of `P_{L,0}(∂^α u)`. The bound must dominate
//! the measurement on the tail and itself lie in the ideal.

use super::{ClassificationReport, Classifier, ClassifyError, Entry, Overall, Question};
use crate::expr::NetExpr;
use crate::scalar::{le_rounded, Rational, Scalar};
use crate::scale::{in_ideal, in_ring, Monomial, SampledNet, ScaleElement, ScaleFamily, Verdict};
use crate::seminorm::{
    multi_indices, multi_indices_of_order, seminorm, seminorm_order, CompactBox, Derivatives, Grid,
    MultiIndex, SampledSeminormNet, SupTable,
};

/// `β' = g1⁻¹ + β`: still dominates `β` and tends to `+∞`.
pub fn normalize_witness<T: Scalar>(beta: &ScaleElement, family: &ScaleFamily<T>) -> ScaleElement {
    let k = family.arity();
    let inv = ScaleElement::from_monomial(Monomial::gauge_power(0, -Rational::from_integer(1), k));
    inv.add(beta)
}

/// `b = ac/(a + c)`, so `b <= min(a, c)` pointwise.
pub fn combine_gauges(a: &ScaleElement, c: &ScaleElement) -> ScaleElement {
    a.mul(c).div(&a.add(c))
}

/// `2 (β/b) p0 + (1/2) (b/β) p2`, with a vanishing seminorm contributing 0
/// even when the step ratio overflows.
fn bound_value<T: Scalar>(b: T, beta: T, p0: T, p2: T) -> T {
    let two = T::one() + T::one();
    let first = if p0.is_zero() { T::zero() } else { two * (beta / b) * p0 };
    let second = if p2.is_zero() { T::zero() } else { (b / beta) * p2 / two };
    first + second
}

/// `2 b⁻¹ β P_{L,0}(u_λ) + (1/2) b β⁻¹ P_{L,2}(u_λ)` with `L = K` fattened by
/// `δ/2 = 1/2` per axis.
///
/// Dominates `P_{K,0}(∂_i u_λ)` whenever `β >= P_{L,2}(u_λ)` and `b/β <= 1/2`.
pub fn taylor_derivative_bound<T: Scalar>(
    u: &NetExpr,
    region: &CompactBox<T>,
    axis: usize,
    b: T,
    beta: T,
    lambda: T,
    grid: Grid,
) -> Result<T, ClassifyError> {
    if axis == 0 || axis > u.dimension() {
        return Err(ClassifyError::BadAxis {
            axis,
            dimension: u.dimension(),
        });
    }
    if !(b > T::zero() && beta > T::zero()) {
        return Err(ClassifyError::NonPositive {
            b: b.to_f64_lossy(),
            beta: beta.to_f64_lossy(),
        });
    }
    let half = T::from_f64_lossy(0.5);
    if b / beta > half {
        return Err(ClassifyError::StepTooLarge {
            ratio: (b / beta).to_f64_lossy(),
        });
    }
    let fat = region.fattened(half);
    let p0 = seminorm_order(u, &fat, 0, lambda, grid)?;
    let p2 = seminorm_order(u, &fat, 2, lambda, grid)?;
    Ok(bound_value(b, beta, p0, p2))
}

/// `P_{K,0}(∂_i u_λ)`, the quantity [`taylor_derivative_bound`] dominates.
pub fn measured_derivative<T: Scalar>(
    u: &NetExpr,
    region: &CompactBox<T>,
    axis: usize,
    lambda: T,
    grid: Grid,
) -> Result<T, ClassifyError> {
    let mut alpha = vec![0; u.dimension()];
    alpha[axis - 1] = 1;
    Ok(seminorm(u, region, &alpha, lambda, grid)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Hypothesis {
    /// `u` moderate up to order `L + 2`.
    Moderateness,
    /// `P_{K,0}(u)` in the ideal.
    ZeroOrderIdeal,
}

/// Why a theorem check stopped before the conclusion checks.
#[derive(Clone, Debug, PartialEq)]
pub struct Abort {
    pub hypothesis: Hypothesis,
    pub region: String,
    pub order: usize,
    pub detail: String,
}

/// One replayed Taylor step for `∂_i ∂^α u` on one box.
#[derive(Clone, Debug, PartialEq)]
pub struct ReplayStep<T> {
    pub alpha: MultiIndex,
    pub axis: usize,
    /// Normalized moderateness witness of `P_{L,2}(∂^α u)`.
    pub beta: ScaleElement,
    /// `g1^{n*}` from the ideal certificate of `P_{L,0}(∂^α u)`.
    pub c: ScaleElement,
    pub b: ScaleElement,
    /// `b/β <= δ/2` on the tail.
    pub step_ok: bool,
    /// `β >= P_{L,2}(∂^α u)` on the tail.
    pub beta_covers: bool,
    /// `P_{K,0}(∂_i ∂^α u)` on the schedule.
    pub measured: Vec<T>,
    /// Taylor bound on the schedule.
    pub bound: Vec<T>,
    /// `measured <= bound` at every tail point.
    pub bound_holds: bool,
    pub bound_ideal: Verdict<T>,
    /// `P_{L,0}(∂^α u) <= b²/(4β)` on the tail; informational only.
    pub sharpened: bool,
}

impl<T> ReplayStep<T> {
    pub fn held(&self) -> bool {
        self.step_ok && self.beta_covers && self.bound_holds && self.bound_ideal.holds()
    }
}

/// Conclusion checks for one box and one derivative order.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderCheck<T> {
    /// `in_ideal` on the measured `P_{K,j}(u)`.
    pub direct: Entry<T>,
    pub replay: Vec<ReplayStep<T>>,
}

impl<T: Scalar> OrderCheck<T> {
    pub fn region(&self) -> &CompactBox<T> {
        self.direct.region()
    }

    pub fn order(&self) -> usize {
        self.direct.order()
    }

    pub fn direct_holds(&self) -> bool {
        self.direct.ideal.as_ref().is_some_and(Verdict::holds)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TheoremReport<T> {
    pub net: String,
    pub order: usize,
    pub degree: u32,
    /// Moderateness up to `L + 2` on every box and its fattening.
    pub moderate: ClassificationReport<T>,
    /// `P_{·,0}(u)` in the ideal on every box and its fattening.
    pub zero_order: ClassificationReport<T>,
    pub abort: Option<Abort>,
    /// Sorted by box, then order.
    pub checks: Vec<OrderCheck<T>>,
    /// Every direct verdict holds and every replay step held.
    pub agreement: bool,
}

impl<T: Scalar> TheoremReport<T> {
    pub fn aborted(&self) -> bool {
        self.abort.is_some()
    }
}

fn shifted(alpha: &[usize], by: &[usize]) -> MultiIndex {
    alpha.iter().zip(by).map(|(a, b)| a + b).collect()
}

impl<'a, T: Scalar> Classifier<'a, T> {
    /// Checks the zero-order reduction on `boxes` up to derivative order `L`.
    ///
    /// Failing hypotheses do not raise an error: the report carries the
    /// [`Abort`] and no conclusion checks.
    pub fn zero_order_reduction(
        &self,
        u: &NetExpr,
        boxes: &[CompactBox<T>],
        order: usize,
    ) -> Result<TheoremReport<T>, ClassifyError> {
        self.validate(u, boxes)?;
        let half = T::from_f64_lossy(0.5);
        let source = u.to_string();
        let mut d = Derivatives::new(u);

        let mut pairs = Vec::with_capacity(boxes.len());
        let mut moderate = Vec::new();
        let mut zero_order = Vec::new();
        for k in boxes {
            let fat = k.fattened(half);
            for region in [k, &fat] {
                let table = self.table(&mut d, region, order + 2)?;
                for l in 0..=order + 2 {
                    let net = SampledSeminormNet::from_table(&table, l, &source)?;
                    if l == 0 {
                        zero_order.push(self.entry(net.clone(), Question::Negligible)?);
                    }
                    moderate.push(self.entry(net, Question::Moderate)?);
                }
                pairs.push(table);
            }
        }
        let moderate = ClassificationReport::assemble(Question::Moderate, source.clone(), self.degree, moderate);
        let zero_order =
            ClassificationReport::assemble(Question::Negligible, source.clone(), self.degree, zero_order);

        let abort = if let Some(e) = moderate.first_failure() {
            Some(Abort {
                hypothesis: Hypothesis::Moderateness,
                region: e.region().to_string(),
                order: e.order(),
                detail: format!("{} not certified in the ring at degree {}", e.net, self.degree),
            })
        } else if let Some(e) = zero_order.first_failure() {
            let detail = match zero_order.overall {
                Overall::Refuted { power } => format!("{} fails against g1^{power}", e.net),
                _ => format!("{} not certified in the ideal at degree {}", e.net, self.degree),
            };
            Some(Abort {
                hypothesis: Hypothesis::ZeroOrderIdeal,
                region: e.region().to_string(),
                order: 0,
                detail,
            })
        } else {
            None
        };

        let mut checks = Vec::new();
        if abort.is_none() {
            for pair in pairs.chunks(2) {
                let (inner, outer) = (&pair[0], &pair[1]);
                for j in 1..=order {
                    let net = SampledSeminormNet::from_table(inner, j, &source)?;
                    let direct = self.entry(net, Question::Negligible)?;
                    let mut replay = Vec::new();
                    for alpha in multi_indices_of_order(u.dimension(), j - 1) {
                        for axis in 1..=u.dimension() {
                            replay.push(self.replay_step(inner, outer, &alpha, axis)?);
                        }
                    }
                    checks.push(OrderCheck { direct, replay });
                }
            }
        }
        let agreement = abort.is_none()
            && checks
                .iter()
                .all(|c| c.direct_holds() && c.replay.iter().all(ReplayStep::held));
        Ok(TheoremReport {
            net: source,
            order,
            degree: self.degree,
            moderate,
            zero_order,
            abort,
            checks,
            agreement,
        })
    }

    fn replay_step(
        &self,
        inner: &SupTable<T>,
        outer: &SupTable<T>,
        alpha: &[usize],
        axis: usize,
    ) -> Result<ReplayStep<T>, ClassifyError> {
        let fam = self.family;
        let dim = alpha.len();
        let schedule = fam.schedule().to_vec();
        let net = |values: Vec<T>, label: &str| {
            SampledNet::new(schedule.clone(), values, label).expect("table rows match the schedule")
        };

        let p0 = net(outer.alpha(alpha).unwrap().to_vec(), "P0");
        let second: Vec<MultiIndex> = multi_indices(dim, 2).iter().map(|g| shifted(alpha, g)).collect();
        let p2 = net(outer.max_over(&second), "P2");
        let mut e_i = vec![0; dim];
        e_i[axis - 1] = 1;
        let measured = inner.alpha(&shifted(alpha, &e_i)).unwrap().to_vec();

        let top = ScaleElement::from_monomial(Monomial::gauge_power(
            0,
            -Rational::from_integer(self.degree as i64),
            fam.arity(),
        ));
        let beta0 = in_ring(&p2, fam, self.degree)?.witness().cloned().unwrap_or(top);
        let beta = normalize_witness(&beta0, fam);
        let n_star = match in_ideal(&p0, fam, self.degree)? {
            Verdict::Holds(_) => self.degree,
            Verdict::Fails(r) => r.power.unwrap_or(1) - 1,
            Verdict::Unknown(_) => 0,
        };
        let c = self.g1(n_star as i64);
        let b = combine_gauges(&self.g1(1), &c);

        let beta_s = SampledNet::from_element(fam, &beta);
        let b_s = SampledNet::from_element(fam, &b);
        let half = T::from_f64_lossy(0.5);
        let four = T::from_f64_lossy(4.0);
        let tail = fam.tail_indices();
        let (bv, betav) = (b_s.values(), beta_s.values());

        let bound: Vec<T> = (0..schedule.len())
            .map(|j| bound_value(bv[j], betav[j], p0.values()[j], p2.values()[j]))
            .collect();
        let step_ok = tail.clone().all(|j| bv[j] / betav[j] <= half);
        let beta_covers = tail.clone().all(|j| le_rounded(p2.values()[j], betav[j]));
        let bound_holds = tail.clone().all(|j| le_rounded(measured[j], bound[j]));
        let sharpened = tail.clone().all(|j| p0.values()[j] <= bv[j] * bv[j] / (four * betav[j]));
        let bound_ideal = in_ideal(&net(bound.clone(), "bound"), fam, self.degree)?;

        Ok(ReplayStep {
            alpha: alpha.to_vec(),
            axis,
            beta,
            c,
            b,
            step_ok,
            beta_covers,
            measured,
            bound,
            bound_holds,
            bound_ideal,
            sharpened,
        })
    }
}
