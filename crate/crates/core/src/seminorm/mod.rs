//! Seminorms `P_{K,l}(u) = sup_{|α| <= l} sup_{x ∈ K} |∂^α u(x)|` on boxes.
//!
//! Suprema are taken over a uniform grid, so every value is a lower bound of
//! the true supremum. Refining the grid with [`Grid::refined`] keeps all old
//! nodes and can only raise a value.

mod region;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

pub use region::{CompactBox, Grid, PointSet, DEFAULT_GRID_POINTS};

use crate::expr::{EvalError, Expr, NetExpr, Program};
use crate::scalar::Scalar;
use crate::scale::{SampledNet, ScaleFamily};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum SeminormError {
    #[error("a box needs at least one interval")]
    EmptyBox,
    #[error("interval {axis} is [{lo}, {hi}]; need finite lo <= hi")]
    BadInterval { axis: usize, lo: f64, hi: f64 },
    #[error("grid needs at least 2 points per axis, got {0}")]
    BadGrid(usize),
    #[error("box has dimension {found}, net has dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{inner} is not contained in {outer}")]
    NotContained { inner: String, outer: String },
    #[error("cover misses grid point {point:?}")]
    CoverGap { point: Vec<f64> },
    #[error("λ = {0} is outside (0, 1]")]
    LambdaOutOfRange(f64),
    #[error("evaluating {derivative} at λ = {lambda}, x = {point:?}: {source}")]
    Eval {
        derivative: String,
        lambda: f64,
        point: Vec<f64>,
        source: EvalError,
    },
}

/// Derivative orders per axis: `alpha[i]` derivatives along `x_{i+1}`.
pub type MultiIndex = Vec<usize>;

/// All `α` with `|α| = order` in dimension `d`, lexicographically descending.
pub fn multi_indices_of_order(d: usize, order: usize) -> Vec<MultiIndex> {
    if d == 0 {
        return if order == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    if d == 1 {
        return vec![vec![order]];
    }
    let mut out = Vec::new();
    for first in (0..=order).rev() {
        for mut rest in multi_indices_of_order(d - 1, order - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All `α` with `|α| <= max_order`, grouped by increasing order.
pub fn multi_indices(d: usize, max_order: usize) -> Vec<MultiIndex> {
    (0..=max_order)
        .flat_map(|k| multi_indices_of_order(d, k))
        .collect()
}

/// `∂^α` rendered as `d^(a1,..,ad)`.
pub fn alpha_label(alpha: &[usize]) -> String {
    let parts: Vec<String> = alpha.iter().map(usize::to_string).collect();
    format!("d^({})", parts.join(","))
}

/// Memoized partial derivatives of one net.
#[derive(Clone, Debug)]
pub struct Derivatives {
    dimension: usize,
    cache: BTreeMap<MultiIndex, Expr>,
}

impl Derivatives {
    pub fn new(u: &NetExpr) -> Self {
        let mut cache = BTreeMap::new();
        cache.insert(vec![0; u.dimension()], u.expr().clone());
        Derivatives {
            dimension: u.dimension(),
            cache,
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// `∂^α u`, built by differentiating the first nonzero axis of `α` last.
    pub fn get(&mut self, alpha: &[usize]) -> &Expr {
        assert_eq!(alpha.len(), self.dimension, "multi-index length");
        if !self.cache.contains_key(alpha) {
            let axis = alpha.iter().position(|&a| a > 0).unwrap();
            let mut parent = alpha.to_vec();
            parent[axis] -= 1;
            let d = self.get(&parent).differentiate(axis + 1);
            self.cache.insert(alpha.to_vec(), d);
        }
        &self.cache[alpha]
    }
}

fn lossy<T: Scalar>(x: &[T]) -> Vec<f64> {
    x.iter().map(|v| v.to_f64_lossy()).collect()
}

fn eval_error<T: Scalar>(e: &Expr, lambda: T, x: &[T], source: EvalError) -> SeminormError {
    SeminormError::Eval {
        derivative: e.to_string(),
        lambda: lambda.to_f64_lossy(),
        point: lossy(x),
        source,
    }
}

/// Values of `e` at every point of `points`, λ fixed.
pub fn sample<T: Scalar>(e: &Expr, lambda: T, points: &PointSet<T>) -> Result<Vec<T>, SeminormError> {
    let first = points.iter().next().unwrap_or(&[]);
    let program = Program::bind(e, lambda).map_err(|s| eval_error(e, lambda, first, s))?;
    let mut stack = program.stack();
    points
        .iter()
        .map(|x| program.run(x, &mut stack).map_err(|s| eval_error(e, lambda, x, s)))
        .collect()
}

/// `max |e(λ, x)|` over `points`; 0 for an empty set.
pub fn sup_abs<T: Scalar>(e: &Expr, lambda: T, points: &PointSet<T>) -> Result<T, SeminormError> {
    Ok(sup_abs_all(&[e], lambda, points)?[0])
}

/// `max |e_i(λ, x)|` over `points` for several expressions at once.
pub fn sup_abs_all<T: Scalar>(exprs: &[&Expr], lambda: T, points: &PointSet<T>) -> Result<Vec<T>, SeminormError> {
    let first = points.iter().next().unwrap_or(&[]);
    let blame = |s: EvalError| {
        let culprit = exprs
            .iter()
            .find(|e| Program::bind(e, lambda).is_err())
            .unwrap_or(&exprs[0]);
        eval_error(culprit, lambda, first, s)
    };
    let program = Program::bind_all(exprs, lambda).map_err(blame)?;
    let mut regs = program.stack();
    let mut best = vec![T::zero(); exprs.len()];
    for x in points.iter() {
        if let Err(s) = program.run_all(x, &mut regs) {
            // report against the first expression failing at this point
            let culprit = exprs
                .iter()
                .find(|e| e.evaluate(lambda, x).is_err())
                .unwrap_or(&exprs[0]);
            return Err(eval_error(culprit, lambda, x, s));
        }
        for (i, b) in best.iter_mut().enumerate() {
            let v = program.output(&regs, i).abs();
            if v > *b {
                *b = v;
            }
        }
    }
    Ok(best)
}

fn check_dimension<T: Scalar>(u: &NetExpr, region: &CompactBox<T>) -> Result<(), SeminormError> {
    if u.dimension() != region.dimension() {
        return Err(SeminormError::DimensionMismatch {
            expected: u.dimension(),
            found: region.dimension(),
        });
    }
    Ok(())
}

fn check_lambda<T: Scalar>(lambda: T) -> Result<(), SeminormError> {
    if !(lambda > T::zero() && lambda <= T::one()) {
        return Err(SeminormError::LambdaOutOfRange(lambda.to_f64_lossy()));
    }
    Ok(())
}

/// `P_{K,α}(u_λ) = max over grid(K) of |∂^α u(λ, x)|`.
pub fn seminorm<T: Scalar>(
    u: &NetExpr,
    region: &CompactBox<T>,
    alpha: &[usize],
    lambda: T,
    grid: Grid,
) -> Result<T, SeminormError> {
    check_dimension(u, region)?;
    check_lambda(lambda)?;
    if alpha.len() != u.dimension() {
        return Err(SeminormError::DimensionMismatch {
            expected: u.dimension(),
            found: alpha.len(),
        });
    }
    let mut d = Derivatives::new(u);
    sup_abs(d.get(alpha), lambda, &grid.points(region))
}

/// `P_{K,l}(u_λ)` on an explicit point set.
fn order_sup<T: Scalar>(
    d: &mut Derivatives,
    order: usize,
    lambda: T,
    points: &PointSet<T>,
) -> Result<T, SeminormError> {
    let alphas = multi_indices(d.dimension(), order);
    for a in &alphas {
        d.get(a);
    }
    let exprs: Vec<&Expr> = alphas.iter().map(|a| &d.cache[a]).collect();
    Ok(sup_abs_all(&exprs, lambda, points)?
        .into_iter()
        .fold(T::zero(), T::max))
}

/// `P_{K,l}(u_λ)` at a single λ.
pub fn seminorm_order<T: Scalar>(
    u: &NetExpr,
    region: &CompactBox<T>,
    order: usize,
    lambda: T,
    grid: Grid,
) -> Result<T, SeminormError> {
    check_dimension(u, region)?;
    check_lambda(lambda)?;
    order_sup(&mut Derivatives::new(u), order, lambda, &grid.points(region))
}

/// `sup_K |∂^α u_λ|` for every `|α| <= max_order` and every schedule point.
#[derive(Clone, Debug)]
pub struct SupTable<T> {
    region: CompactBox<T>,
    grid: Grid,
    schedule: Vec<T>,
    entries: BTreeMap<MultiIndex, Vec<T>>,
    max_order: usize,
}

impl<T: Scalar> SupTable<T> {
    pub fn build(
        derivatives: &mut Derivatives,
        region: &CompactBox<T>,
        max_order: usize,
        schedule: &[T],
        grid: Grid,
    ) -> Result<Self, SeminormError> {
        if derivatives.dimension() != region.dimension() {
            return Err(SeminormError::DimensionMismatch {
                expected: derivatives.dimension(),
                found: region.dimension(),
            });
        }
        let points = grid.points(region);
        let alphas = multi_indices(region.dimension(), max_order);
        for a in &alphas {
            derivatives.get(a);
        }
        let exprs: Vec<&Expr> = alphas.iter().map(|a| &derivatives.cache[a]).collect();
        let mut rows = vec![Vec::with_capacity(schedule.len()); alphas.len()];
        for &l in schedule {
            for (row, sup) in rows.iter_mut().zip(sup_abs_all(&exprs, l, &points)?) {
                row.push(sup);
            }
        }
        let entries = alphas.into_iter().zip(rows).collect();
        Ok(SupTable {
            region: region.clone(),
            grid,
            schedule: schedule.to_vec(),
            entries,
            max_order,
        })
    }

    pub fn region(&self) -> &CompactBox<T> {
        &self.region
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn schedule(&self) -> &[T] {
        &self.schedule
    }

    /// `sup_K |∂^α u_λ|` along the schedule.
    pub fn alpha(&self, alpha: &[usize]) -> Option<&[T]> {
        self.entries.get(alpha).map(Vec::as_slice)
    }

    /// Pointwise maximum over `alphas`.
    pub fn max_over<'b>(&self, alphas: impl IntoIterator<Item = &'b MultiIndex>) -> Vec<T> {
        let mut out = vec![T::zero(); self.schedule.len()];
        for a in alphas {
            for (o, &v) in out.iter_mut().zip(&self.entries[a]) {
                *o = o.max(v);
            }
        }
        out
    }

    /// `P_{K,l}` along the schedule.
    pub fn order(&self, l: usize) -> Vec<T> {
        assert!(l <= self.max_order, "order {l} beyond table");
        self.max_over(&multi_indices(self.region.dimension(), l))
    }
}

/// The net `(P_{K,l}(u_λ))_λ` with its provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledSeminormNet<T> {
    net: SampledNet<T>,
    region: CompactBox<T>,
    order: usize,
    source: String,
}

impl<T: Scalar> SampledSeminormNet<T> {
    pub fn new(net: SampledNet<T>, region: CompactBox<T>, order: usize, source: impl Into<String>) -> Self {
        debug_assert!(net.values().iter().all(|v| *v >= T::zero()));
        SampledSeminormNet {
            net,
            region,
            order,
            source: source.into(),
        }
    }

    pub fn from_table(table: &SupTable<T>, order: usize, source: &str) -> Result<Self, SeminormError> {
        let values = table.order(order);
        let region = table.region().clone();
        let label = format!("P[{region}, {order}]({source})");
        let net = SampledNet::new(table.schedule().to_vec(), values, label)
            .expect("table rows match the schedule");
        Ok(SampledSeminormNet::new(net, region, order, source))
    }

    pub fn net(&self) -> &SampledNet<T> {
        &self.net
    }

    pub fn schedule(&self) -> &[T] {
        self.net.schedule()
    }

    pub fn values(&self) -> &[T] {
        self.net.values()
    }

    pub fn region(&self) -> &CompactBox<T> {
        &self.region
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Printed form of the net `u`.
    pub fn source(&self) -> &str {
        &self.source
    }
}

impl<T: Scalar> fmt::Display for SampledSeminormNet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.net.label())
    }
}

/// `(P_{K,l}(u_λj))_j` on the family's schedule.
pub fn seminorm_net<T: Scalar>(
    u: &NetExpr,
    region: &CompactBox<T>,
    order: usize,
    family: &ScaleFamily<T>,
    grid: Grid,
) -> Result<SampledSeminormNet<T>, SeminormError> {
    check_dimension(u, region)?;
    let table = SupTable::build(&mut Derivatives::new(u), region, order, family.schedule(), grid)?;
    SampledSeminormNet::from_table(&table, order, &u.to_string())
}

fn union<T: Scalar>(a: &PointSet<T>, b: &PointSet<T>) -> PointSet<T> {
    let mut out = a.clone();
    out.extend(b);
    out
}

/// Restriction compatibility for `K2 ⊆ K1`.
///
/// `P_{K1,l}` is taken over the union of both grids, so `K1`'s value is a sup
/// over a superset of `K2`'s points. The `K2` values read back from that
/// union sweep must equal a direct sweep of `K2` bit for bit.
pub fn restriction_check<T: Scalar>(
    u: &NetExpr,
    inner: &CompactBox<T>,
    outer: &CompactBox<T>,
    order: usize,
    lambda: T,
    grid: Grid,
) -> Result<bool, SeminormError> {
    check_dimension(u, inner)?;
    check_dimension(u, outer)?;
    check_lambda(lambda)?;
    if !outer.contains(inner) {
        return Err(SeminormError::NotContained {
            inner: inner.to_string(),
            outer: outer.to_string(),
        });
    }
    let p_inner = grid.points(inner);
    let p_outer = union(&grid.points(outer), &p_inner);
    let offset = p_outer.len() - p_inner.len();
    let mut d = Derivatives::new(u);
    let mut ok = true;
    let (mut sup_inner, mut sup_outer) = (T::zero(), T::zero());
    for alpha in multi_indices(u.dimension(), order) {
        let e = d.get(&alpha);
        let direct = sample(e, lambda, &p_inner)?;
        let restricted = sample(e, lambda, &p_outer)?;
        ok &= direct
            .iter()
            .zip(&restricted[offset..])
            .all(|(a, b)| a == b);
        for v in &direct {
            sup_inner = sup_inner.max(v.abs());
        }
        for v in &restricted {
            sup_outer = sup_outer.max(v.abs());
        }
    }
    Ok(ok && sup_inner <= sup_outer)
}

/// Finite-cover subadditivity `P_{K,l} <= Σ_i P_{K∩K_i,l}`.
///
/// Each `P_{K∩K_i,l}` is a sup over the grid points of `K` lying in `K_i`;
/// every grid point of `K` must lie in some `K_i`.
pub fn cover_subadditivity_check<T: Scalar>(
    u: &NetExpr,
    region: &CompactBox<T>,
    cover: &[CompactBox<T>],
    order: usize,
    lambda: T,
    grid: Grid,
) -> Result<bool, SeminormError> {
    check_dimension(u, region)?;
    for k in cover {
        check_dimension(u, k)?;
    }
    check_lambda(lambda)?;
    let points = grid.points(region);
    if let Some(x) = points
        .iter()
        .find(|x| !cover.iter().any(|k| k.contains_point(x)))
    {
        return Err(SeminormError::CoverGap { point: lossy(x) });
    }
    let mut d = Derivatives::new(u);
    let whole = order_sup(&mut d, order, lambda, &points)?;
    let mut sum = T::zero();
    for k in cover {
        let part = points.filter(|x| k.contains_point(x));
        sum = sum + order_sup(&mut d, order, lambda, &part)?;
    }
    Ok(whole <= sum)
}
