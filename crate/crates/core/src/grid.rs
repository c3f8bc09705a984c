//! Fractional order, uniform grids and sampled functions.

use alloc::vec::Vec;
use core::fmt;

/// Construction errors for the grid types.
#[derive(Clone, Debug, PartialEq)]
pub enum GridError {
    /// Fractional order outside the open interval `(0, 1)`.
    OrderOutOfRange(f64),
    /// `t_end` not positive and finite.
    BadEnd(f64),
    /// Fewer than two intervals.
    TooFewIntervals(usize),
    /// Sample count does not match `n + 1`.
    LengthMismatch {
        /// Nodes on the grid.
        expected: usize,
        /// Samples supplied.
        got: usize,
    },
    /// A sample is NaN or infinite.
    NonFinite {
        /// Node index of the offending sample.
        index: usize,
    },
    /// Sample abscissae are not equally spaced from zero.
    NotUniform {
        /// First row that breaks uniformity.
        index: usize,
    },
}

impl fmt::Display for GridError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridError::OrderOutOfRange(a) => write!(f, "fractional order {a} is not in (0, 1)"),
            GridError::BadEnd(t) => write!(f, "grid end {t} must be positive and finite"),
            GridError::TooFewIntervals(n) => write!(f, "grid needs at least 2 intervals, got {n}"),
            GridError::LengthMismatch { expected, got } => {
                write!(f, "expected {expected} samples, got {got}")
            }
            GridError::NonFinite { index } => write!(f, "sample {index} is not finite"),
            GridError::NotUniform { index } => {
                write!(f, "abscissa at row {index} breaks the uniform spacing")
            }
        }
    }
}

impl core::error::Error for GridError {}

/// Fractional order `α`, strictly inside `(0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct FracOrder(f64);

impl FracOrder {
    /// Validates `0 < alpha < 1`.
    pub fn new(alpha: f64) -> Result<Self, GridError> {
        if alpha > 0.0 && alpha < 1.0 {
            Ok(FracOrder(alpha))
        } else {
            Err(GridError::OrderOutOfRange(alpha))
        }
    }

    /// The order as a float.
    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// `1 - α`, which is again a valid order.
    pub fn complement(self) -> FracOrder {
        FracOrder(1.0 - self.0)
    }
}

/// Uniform grid `t_k = k·h`, `k = 0..=n`, `h = t_end / n`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct UniformGrid {
    t_end: f64,
    n: usize,
}

impl UniformGrid {
    /// Grid on `[0, t_end]` with `n ≥ 2` intervals.
    pub fn new(t_end: f64, n: usize) -> Result<Self, GridError> {
        if !(t_end.is_finite() && t_end > 0.0) {
            return Err(GridError::BadEnd(t_end));
        }
        if n < 2 {
            return Err(GridError::TooFewIntervals(n));
        }
        Ok(UniformGrid { t_end, n })
    }

    /// Grid with spacing `h` covering `[0, n·h]`.
    pub fn with_step(h: f64, n: usize) -> Result<Self, GridError> {
        UniformGrid::new(h * n as f64, n)
    }

    /// Right end of the grid.
    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    /// Number of intervals.
    pub fn intervals(&self) -> usize {
        self.n
    }

    /// Number of nodes, `n + 1`.
    pub fn len(&self) -> usize {
        self.n + 1
    }

    /// Always false; a grid has at least three nodes.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Step size.
    pub fn step(&self) -> f64 {
        self.t_end / self.n as f64
    }

    /// Node `t_k`.
    #[inline]
    pub fn node(&self, k: usize) -> f64 {
        if k == self.n {
            self.t_end
        } else {
            k as f64 * self.step()
        }
    }

    /// Iterator over all nodes.
    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n).map(move |k| self.node(k))
    }

    /// Samples `f` at every node.
    pub fn sample<F: Fn(f64) -> f64>(&self, f: F) -> Result<GridFunction, GridError> {
        GridFunction::new(*self, self.nodes().map(f).collect())
    }
}

/// Node values of a real function on a [`UniformGrid`].
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GridFunction {
    grid: UniformGrid,
    values: Vec<f64>,
}

impl GridFunction {
    /// Checks the length and finiteness of `values`.
    pub fn new(grid: UniformGrid, values: Vec<f64>) -> Result<Self, GridError> {
        if values.len() != grid.len() {
            return Err(GridError::LengthMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(GridError::NonFinite { index });
        }
        Ok(GridFunction { grid, values })
    }

    /// Builds a grid function from `(t, value)` rows, checking that the
    /// abscissae are `0, h, 2h, …` to relative tolerance `1e-9`.
    pub fn from_samples(ts: &[f64], values: Vec<f64>) -> Result<Self, GridError> {
        if ts.len() < 3 {
            return Err(GridError::TooFewIntervals(ts.len().saturating_sub(1)));
        }
        let n = ts.len() - 1;
        let grid = UniformGrid::new(ts[n], n)?;
        let h = grid.step();
        for (k, &t) in ts.iter().enumerate() {
            if (t - grid.node(k)).abs() > 1e-9 * h.max(t.abs()) {
                return Err(GridError::NotUniform { index: k });
            }
        }
        GridFunction::new(grid, values)
    }

    pub(crate) fn from_raw(grid: UniformGrid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        GridFunction { grid, values }
    }

    /// The underlying grid.
    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    /// Node values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Consumes the function, returning the node values.
    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Value at node 0.
    pub fn first(&self) -> f64 {
        self.values[0]
    }

    /// Value at the last node.
    pub fn last(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Iterator over `(t_k, value_k)`.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.grid.nodes().zip(self.values.iter().copied())
    }

    /// `a·self + b·other` on a shared grid.
    pub fn lin_comb(&self, a: f64, other: &GridFunction, b: f64) -> Result<GridFunction, GridError> {
        if self.grid != other.grid {
            return Err(GridError::LengthMismatch {
                expected: self.grid.len(),
                got: other.grid.len(),
            });
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| a * x + b * y)
            .collect();
        GridFunction::new(self.grid, values)
    }

    /// Largest `|self_k - other_k|` over nodes `k ≥ from`.
    pub fn max_abs_diff(&self, other: &GridFunction, from: usize) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .skip(from)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn order_rejects_endpoints() {
        assert!(FracOrder::new(0.0).is_err());
        assert!(FracOrder::new(1.0).is_err());
        assert!(FracOrder::new(f64::NAN).is_err());
        assert_eq!(FracOrder::new(0.25).unwrap().complement().get(), 0.75);
    }

    #[test]
    fn grid_nodes_end_exactly() {
        let g = UniformGrid::new(10.0, 3).unwrap();
        assert_eq!(g.node(3), 10.0);
        assert_eq!(g.len(), 4);
        assert!(UniformGrid::new(1.0, 1).is_err());
        assert!(UniformGrid::new(-1.0, 10).is_err());
    }

    #[test]
    fn grid_function_checks_samples() {
        let g = UniformGrid::new(1.0, 2).unwrap();
        assert!(GridFunction::new(g, vec![0.0, 1.0]).is_err());
        assert_eq!(
            GridFunction::new(g, vec![0.0, f64::INFINITY, 1.0]),
            Err(GridError::NonFinite { index: 1 })
        );
    }

    #[test]
    fn from_samples_requires_uniform_spacing() {
        let ok = GridFunction::from_samples(&[0.0, 0.5, 1.0], vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(ok.grid().step(), 0.5);
        let bad = GridFunction::from_samples(&[0.0, 0.4, 1.0], vec![1.0, 2.0, 3.0]);
        assert_eq!(bad, Err(GridError::NotUniform { index: 1 }));
    }
}
