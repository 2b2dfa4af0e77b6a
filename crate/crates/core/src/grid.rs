//! Sampled functions on strictly increasing grids.

use crate::error::{domain, Result};

/// Node values of a function on a strictly increasing grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: Vec<f64>,
    values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        check_grid(&grid)?;
        if grid.len() != values.len() {
            return domain(format!("grid has {} nodes but {} values were given", grid.len(), values.len()));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Vec<f64>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.iter().map(|&x| f(x)).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn into_parts(self) -> (Vec<f64>, Vec<f64>) {
        (self.grid, self.values)
    }

    /// Same grid, values mapped pointwise.
    pub fn map(&self, f: impl Fn(f64, f64) -> f64) -> Self {
        let values = self.grid.iter().zip(&self.values).map(|(&x, &v)| f(x, v)).collect();
        Self { grid: self.grid.clone(), values }
    }

    /// Piecewise-linear interpolation; `None` outside the grid.
    pub fn interpolate(&self, x: f64) -> Option<f64> {
        interpolate(&self.grid, &self.values, x)
    }
}

pub(crate) fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 2 {
        return domain("a grid needs at least two nodes");
    }
    if let Some(i) = grid.windows(2).position(|w| !(w[1] > w[0])) {
        return domain(format!("grid is not strictly increasing at node {}", i + 1));
    }
    Ok(())
}

/// `n + 1` equispaced nodes from `lo` to `hi`, with both endpoints exact.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / n as f64;
    (0..=n).map(|i| if i == n { hi } else { lo + step * i as f64 }).collect()
}

/// `n + 1` nodes `lo + (hi - lo)(i/n)^r`, clustered at `lo` for `r > 1`.
///
/// Grading restores the convergence order of product rules for data that behave like
/// a fractional power at the left end.
pub fn graded_grid(lo: f64, hi: f64, n: usize, r: f64) -> Vec<f64> {
    (0..=n)
        .map(|i| if i == n { hi } else { lo + (hi - lo) * (i as f64 / n as f64).powf(r) })
        .collect()
}

/// Index of the cell `[grid[k], grid[k+1]]` containing `x`, or `None` outside.
pub(crate) fn locate(grid: &[f64], x: f64) -> Option<usize> {
    let n = grid.len();
    if n < 2 || !(x >= grid[0] && x <= grid[n - 1]) {
        return None;
    }
    let k = grid.partition_point(|&g| g <= x);
    Some(k.saturating_sub(1).min(n - 2))
}

pub(crate) fn interpolate(grid: &[f64], values: &[f64], x: f64) -> Option<f64> {
    let k = locate(grid, x)?;
    let (x0, x1) = (grid[k], grid[k + 1]);
    let t = (x - x0) / (x1 - x0);
    Some(values[k] + t * (values[k + 1] - values[k]))
}
