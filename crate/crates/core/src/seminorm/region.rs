use std::fmt;

use super::SeminormError;
use crate::scalar::Scalar;

/// Closed axis-aligned box `[a1, b1] × ⋯ × [ad, bd]`.
#[derive(Clone, Debug, PartialEq)]
pub struct CompactBox<T> {
    intervals: Vec<(T, T)>,
}

impl<T: Scalar> CompactBox<T> {
    pub fn new(intervals: Vec<(T, T)>) -> Result<Self, SeminormError> {
        if intervals.is_empty() {
            return Err(SeminormError::EmptyBox);
        }
        for (axis, &(lo, hi)) in intervals.iter().enumerate() {
            if !lo.is_finite() || !hi.is_finite() || lo > hi {
                return Err(SeminormError::BadInterval {
                    axis: axis + 1,
                    lo: lo.to_f64_lossy(),
                    hi: hi.to_f64_lossy(),
                });
            }
        }
        Ok(CompactBox { intervals })
    }

    /// `[lo, hi]^d`.
    pub fn cube(lo: T, hi: T, dimension: usize) -> Result<Self, SeminormError> {
        CompactBox::new(vec![(lo, hi); dimension])
    }

    pub fn dimension(&self) -> usize {
        self.intervals.len()
    }

    pub fn intervals(&self) -> &[(T, T)] {
        &self.intervals
    }

    pub fn contains_point(&self, x: &[T]) -> bool {
        x.len() == self.dimension()
            && self
                .intervals
                .iter()
                .zip(x)
                .all(|(&(lo, hi), &v)| lo <= v && v <= hi)
    }

    pub fn contains(&self, other: &CompactBox<T>) -> bool {
        self.dimension() == other.dimension()
            && self
                .intervals
                .iter()
                .zip(&other.intervals)
                .all(|(&(a, b), &(c, d))| a <= c && d <= b)
    }

    pub fn intersection(&self, other: &CompactBox<T>) -> Option<CompactBox<T>> {
        if self.dimension() != other.dimension() {
            return None;
        }
        let mut out = Vec::with_capacity(self.dimension());
        for (&(a, b), &(c, d)) in self.intervals.iter().zip(&other.intervals) {
            let (lo, hi) = (a.max(c), b.min(d));
            if lo > hi {
                return None;
            }
            out.push((lo, hi));
        }
        Some(CompactBox { intervals: out })
    }

    /// Every interval widened by `margin` on both sides (a sup-norm ball sum).
    pub fn fattened(&self, margin: T) -> CompactBox<T> {
        CompactBox {
            intervals: self
                .intervals
                .iter()
                .map(|&(lo, hi)| (lo - margin, hi + margin))
                .collect(),
        }
    }
}

impl<T: Scalar> fmt::Display for CompactBox<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (lo, hi)) in self.intervals.iter().enumerate() {
            if i > 0 {
                f.write_str("x")?;
            }
            write!(f, "[{lo}, {hi}]")?;
        }
        Ok(())
    }
}

pub const DEFAULT_GRID_POINTS: usize = 401;

/// Uniform grid with `points_per_axis` nodes per axis, endpoints included.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Grid {
    points_per_axis: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            points_per_axis: DEFAULT_GRID_POINTS,
        }
    }
}

impl Grid {
    pub fn new(points_per_axis: usize) -> Result<Self, SeminormError> {
        if points_per_axis < 2 {
            return Err(SeminormError::BadGrid(points_per_axis));
        }
        Ok(Grid { points_per_axis })
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    /// Halves the spacing: `2n - 1` nodes, a superset of the current nodes.
    pub fn refined(&self) -> Grid {
        Grid {
            points_per_axis: 2 * self.points_per_axis - 1,
        }
    }

    /// Node `k` of `n` on `[lo, hi]`; the last node is exactly `hi`.
    pub fn node<T: Scalar>(lo: T, hi: T, k: usize, n: usize) -> T {
        if k + 1 == n {
            hi
        } else {
            let t = T::from_usize(k).unwrap() / T::from_usize(n - 1).unwrap();
            lo + (hi - lo) * t
        }
    }

    pub fn points<T: Scalar>(&self, region: &CompactBox<T>) -> PointSet<T> {
        let n = self.points_per_axis;
        let d = region.dimension();
        let axes: Vec<Vec<T>> = region
            .intervals()
            .iter()
            .map(|&(lo, hi)| {
                if lo == hi {
                    vec![lo]
                } else {
                    (0..n).map(|k| Grid::node(lo, hi, k, n)).collect()
                }
            })
            .collect();
        let total: usize = axes.iter().map(Vec::len).product();
        let mut coords = Vec::with_capacity(total * d);
        let mut idx = vec![0usize; d];
        for _ in 0..total {
            for (axis, &i) in idx.iter().enumerate() {
                coords.push(axes[axis][i]);
            }
            for axis in (0..d).rev() {
                idx[axis] += 1;
                if idx[axis] < axes[axis].len() {
                    break;
                }
                idx[axis] = 0;
            }
        }
        PointSet { dim: d, coords }
    }
}

/// A finite set of points in `R^d`, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet<T> {
    dim: usize,
    coords: Vec<T>,
}

impl<T: Scalar> PointSet<T> {
    pub fn new(dim: usize) -> Self {
        PointSet {
            dim,
            coords: Vec::new(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        if self.dim == 0 {
            0
        } else {
            self.coords.len() / self.dim
        }
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[T]> {
        self.coords.chunks_exact(self.dim.max(1))
    }

    pub fn push(&mut self, x: &[T]) {
        debug_assert_eq!(x.len(), self.dim);
        self.coords.extend_from_slice(x);
    }

    pub fn filter(&self, keep: impl Fn(&[T]) -> bool) -> PointSet<T> {
        let mut out = PointSet::new(self.dim);
        for x in self.iter().filter(|x| keep(x)) {
            out.push(x);
        }
        out
    }

    pub fn extend(&mut self, other: &PointSet<T>) {
        debug_assert_eq!(self.dim, other.dim);
        self.coords.extend_from_slice(&other.coords);
    }
}
