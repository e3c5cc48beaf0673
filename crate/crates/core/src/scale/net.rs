use super::{ScaleElement, ScaleError, ScaleFamily};
use crate::expr::{EvalError, Expr};
use crate::scalar::Scalar;

/// A real net sampled on the schedule of a [`ScaleFamily`].
#[derive(Clone, Debug, PartialEq)]
pub struct SampledNet<T> {
    schedule: Vec<T>,
    values: Vec<T>,
    label: String,
}

impl<T: Scalar> SampledNet<T> {
    pub fn new(schedule: Vec<T>, values: Vec<T>, label: impl Into<String>) -> Result<Self, ScaleError> {
        if schedule.len() != values.len() {
            return Err(ScaleError::ScheduleMismatch {
                left: schedule.len(),
                right: values.len(),
            });
        }
        Ok(SampledNet {
            schedule,
            values,
            label: label.into(),
        })
    }

    pub fn from_fn(family: &ScaleFamily<T>, label: impl Into<String>, f: impl Fn(T) -> T) -> Self {
        let schedule = family.schedule().to_vec();
        let values = schedule.iter().map(|&l| f(l)).collect();
        SampledNet {
            schedule,
            values,
            label: label.into(),
        }
    }

    /// Samples a λ-only expression.
    pub fn from_expr(family: &ScaleFamily<T>, e: &Expr) -> Result<Self, EvalError> {
        let schedule = family.schedule().to_vec();
        let values = schedule
            .iter()
            .map(|&l| e.evaluate(l, &[]))
            .collect::<Result<_, _>>()?;
        Ok(SampledNet {
            schedule,
            values,
            label: e.to_string(),
        })
    }

    pub fn from_element(family: &ScaleFamily<T>, e: &ScaleElement) -> Self {
        let values = (0..family.schedule().len())
            .map(|j| e.eval(family.gauge_values(j)))
            .collect();
        SampledNet {
            schedule: family.schedule().to_vec(),
            values,
            label: e.render(&family.gauge_names()),
        }
    }

    pub fn zero(family: &ScaleFamily<T>) -> Self {
        SampledNet::from_fn(family, "0", |_| T::zero())
    }

    pub fn schedule(&self) -> &[T] {
        &self.schedule
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn abs(&self) -> Self {
        self.map(|v| v.abs(), format!("|{}|", self.label))
    }

    pub fn map(&self, f: impl Fn(T) -> T, label: impl Into<String>) -> Self {
        SampledNet {
            schedule: self.schedule.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
            label: label.into(),
        }
    }

    pub fn zip_with(
        &self,
        other: &SampledNet<T>,
        f: impl Fn(T, T) -> T,
        label: impl Into<String>,
    ) -> Result<Self, ScaleError> {
        if self.schedule != other.schedule {
            return Err(ScaleError::ScheduleMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(SampledNet {
            schedule: self.schedule.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
            label: label.into(),
        })
    }

    pub fn add(&self, other: &SampledNet<T>) -> Result<Self, ScaleError> {
        self.zip_with(other, |a, b| a + b, format!("({} + {})", self.label, other.label))
    }

    pub fn mul(&self, other: &SampledNet<T>) -> Result<Self, ScaleError> {
        self.zip_with(other, |a, b| a * b, format!("({} * {})", self.label, other.label))
    }

    pub fn is_identically_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }
}
