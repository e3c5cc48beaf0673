use thiserror::Error;

use crate::expr::{EvalError, GaugeExpr};
use crate::scalar::Scalar;

pub const DEFAULT_SCHEDULE_START: f64 = 0.5;
pub const DEFAULT_SCHEDULE_RATIO: f64 = 0.5;
pub const DEFAULT_SCHEDULE_LEN: usize = 40;
pub const DEFAULT_TAIL: usize = 10;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum ScaleError {
    #[error("at least one base gauge is required")]
    NoGauges,
    #[error("schedule is empty")]
    EmptySchedule,
    #[error("schedule value {value} at position {index} is outside (0, 1]")]
    OutOfRange { index: usize, value: f64 },
    #[error("schedule is not strictly decreasing at position {index}")]
    NotDecreasing { index: usize },
    #[error("geometric ratio {0} must lie in (0, 1)")]
    BadRatio(f64),
    #[error("tail length {tail} must lie in 1..={len}")]
    BadTail { tail: usize, len: usize },
    #[error("gauge `{gauge}` cannot be evaluated at lambda = {lambda}: {source}")]
    GaugeEval {
        gauge: String,
        lambda: f64,
        source: EvalError,
    },
    #[error("gauge `{gauge}` is not positive at lambda = {lambda} (value {value})")]
    NonPositive {
        gauge: String,
        lambda: f64,
        value: f64,
    },
    #[error("no base gauge decreases towards 0 along the schedule")]
    NoVanishingGauge,
    #[error(
        "hierarchy violated: `{faster}`^{a} < `{slower}`^{b} fails at lambda = {lambda}"
    )]
    HierarchyViolation {
        faster: String,
        slower: String,
        a: i32,
        b: i32,
        lambda: f64,
    },
    #[error("nets sampled on different schedules ({left} vs {right} points)")]
    ScheduleMismatch { left: usize, right: usize },
}

/// A finite, strictly decreasing sequence of indices in (0, 1].
#[derive(Clone, Debug, PartialEq)]
pub struct Schedule<T>(Vec<T>);

impl<T: Scalar> Schedule<T> {
    pub fn new(points: Vec<T>) -> Result<Self, ScaleError> {
        if points.is_empty() {
            return Err(ScaleError::EmptySchedule);
        }
        for (index, &value) in points.iter().enumerate() {
            if !(value > T::zero() && value <= T::one()) {
                return Err(ScaleError::OutOfRange {
                    index,
                    value: value.to_f64_lossy(),
                });
            }
            if index > 0 && value >= points[index - 1] {
                return Err(ScaleError::NotDecreasing { index });
            }
        }
        Ok(Schedule(points))
    }

    /// `start, start·ratio, start·ratio², …` (`len` points).
    pub fn geometric(start: T, ratio: T, len: usize) -> Result<Self, ScaleError> {
        if !(ratio > T::zero() && ratio < T::one()) {
            return Err(ScaleError::BadRatio(ratio.to_f64_lossy()));
        }
        let mut points = Vec::with_capacity(len);
        let mut v = start;
        for _ in 0..len {
            points.push(v);
            v = v * ratio;
        }
        Schedule::new(points)
    }

    /// `λ_j = 2^-j`, `j = 1..=40`.
    pub fn standard() -> Self {
        Schedule::geometric(
            T::from_f64_lossy(DEFAULT_SCHEDULE_START),
            T::from_f64_lossy(DEFAULT_SCHEDULE_RATIO),
            DEFAULT_SCHEDULE_LEN,
        )
        .expect("standard schedule is valid")
    }

    pub fn points(&self) -> &[T] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Base gauges `g1..gk` (fastest-decaying first) sampled on a schedule whose
/// last `tail` points stand for "eventually".
#[derive(Clone, Debug)]
pub struct ScaleFamily<T> {
    gauges: Vec<GaugeExpr>,
    schedule: Vec<T>,
    tail: usize,
    /// `values[j][i]` is `g_i(λ_j)`.
    values: Vec<Vec<T>>,
    vanishing: usize,
}

impl<T: Scalar> ScaleFamily<T> {
    /// Validates positivity, the existence of a vanishing gauge, and the
    /// declared hierarchy (`g_i^a < g_j^b` on the tail for `i < j`, `a, b ∈ {1, 2}`).
    pub fn declare(
        gauges: Vec<GaugeExpr>,
        schedule: Schedule<T>,
        tail: usize,
    ) -> Result<Self, ScaleError> {
        if gauges.is_empty() {
            return Err(ScaleError::NoGauges);
        }
        let points = schedule.0;
        if tail == 0 || tail > points.len() {
            return Err(ScaleError::BadTail {
                tail,
                len: points.len(),
            });
        }
        let mut values = Vec::with_capacity(points.len());
        for &lambda in &points {
            let mut row = Vec::with_capacity(gauges.len());
            for g in &gauges {
                let v = g.evaluate(lambda).map_err(|source| ScaleError::GaugeEval {
                    gauge: g.to_string(),
                    lambda: lambda.to_f64_lossy(),
                    source,
                })?;
                if !(v > T::zero()) || !v.is_finite() {
                    return Err(ScaleError::NonPositive {
                        gauge: g.to_string(),
                        lambda: lambda.to_f64_lossy(),
                        value: v.to_f64_lossy(),
                    });
                }
                row.push(v);
            }
            values.push(row);
        }
        let m = points.len();
        let tail_start = m - tail;
        let vanishing = (0..gauges.len())
            .find(|&i| {
                values[m - 1][i] < values[0][i]
                    && (tail_start + 1..m).all(|j| values[j][i] < values[j - 1][i])
            })
            .ok_or(ScaleError::NoVanishingGauge)?;
        for i in 0..gauges.len() {
            for j in i + 1..gauges.len() {
                for a in 1..=2 {
                    for b in 1..=2 {
                        for row in tail_start..m {
                            if !(values[row][i].powi(a) < values[row][j].powi(b)) {
                                return Err(ScaleError::HierarchyViolation {
                                    faster: gauges[i].to_string(),
                                    slower: gauges[j].to_string(),
                                    a,
                                    b,
                                    lambda: points[row].to_f64_lossy(),
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(ScaleFamily {
            gauges,
            schedule: points,
            tail,
            values,
            vanishing,
        })
    }

    /// Base gauge λ on the standard schedule with the default tail.
    pub fn colombeau() -> Self {
        ScaleFamily::declare(
            vec![GaugeExpr::parse("lambda").unwrap()],
            Schedule::standard(),
            DEFAULT_TAIL,
        )
        .expect("colombeau scale is valid")
    }

    pub fn gauges(&self) -> &[GaugeExpr] {
        &self.gauges
    }

    /// Number of base gauges `k`.
    pub fn arity(&self) -> usize {
        self.gauges.len()
    }

    pub fn schedule(&self) -> &[T] {
        &self.schedule
    }

    pub fn tail_len(&self) -> usize {
        self.tail
    }

    /// Index of the first tail point.
    pub fn tail_start(&self) -> usize {
        self.schedule.len() - self.tail
    }

    pub fn tail_indices(&self) -> std::ops::Range<usize> {
        self.tail_start()..self.schedule.len()
    }

    /// Gauge values at schedule position `j`.
    pub fn gauge_values(&self, j: usize) -> &[T] {
        &self.values[j]
    }

    /// Index of a gauge verified to decrease towards 0.
    pub fn vanishing_gauge(&self) -> usize {
        self.vanishing
    }

    /// Display names of the base gauges.
    pub fn gauge_names(&self) -> Vec<String> {
        self.gauges
            .iter()
            .map(|g| {
                let s = g.to_string();
                if s == "lambda" {
                    s
                } else {
                    format!("[{s}]")
                }
            })
            .collect()
    }

    /// Same gauges and schedule with another tail length.
    pub fn with_tail(&self, tail: usize) -> Result<Self, ScaleError> {
        ScaleFamily::declare(self.gauges.clone(), Schedule(self.schedule.clone()), tail)
    }
}
