use crate::error::{domain, Result};
use crate::grid::{check_grid, interpolate, SampledFunction};
use crate::phi::PhiFunction;
use crate::special::ml1;

/// A discrete solution on `[m - σ, n]`; `grid[history_len]` is the node at `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    grid: Vec<f64>,
    values: Vec<f64>,
    history_len: usize,
}

impl Trajectory {
    pub fn new(grid: Vec<f64>, values: Vec<f64>, history_len: usize) -> Result<Self> {
        check_grid(&grid)?;
        if grid.len() != values.len() {
            return domain("trajectory grid and values differ in length");
        }
        if history_len >= grid.len() {
            return domain("history index is past the end of the grid");
        }
        Ok(Self { grid, values, history_len })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Index of the node at `m`.
    pub fn history_len(&self) -> usize {
        self.history_len
    }

    /// Nodes and values on `[m, n]`.
    pub fn main_grid(&self) -> &[f64] {
        &self.grid[self.history_len..]
    }

    pub fn main_values(&self) -> &[f64] {
        &self.values[self.history_len..]
    }

    /// Values on `[m - σ, m]`, including the node at `m`.
    pub fn history_values(&self) -> &[f64] {
        &self.values[..=self.history_len]
    }

    pub fn value_at(&self, ell: f64) -> Option<f64> {
        interpolate(&self.grid, &self.values, ell)
    }

    /// Restriction to `[m, n]`.
    pub fn main_part(&self) -> SampledFunction {
        SampledFunction::new(self.main_grid().to_vec(), self.main_values().to_vec()).expect("grid checked at construction")
    }

    /// Nodewise `self - other` on a shared grid.
    pub fn difference(&self, other: &Trajectory) -> Result<Trajectory> {
        if self.grid != other.grid || self.history_len != other.history_len {
            return domain("trajectories live on different grids");
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(Self { grid: self.grid.clone(), values, history_len: self.history_len })
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `ell,z` CSV over the whole grid, history included. Values use the shortest
    /// representation that parses back to the same `f64`.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(48 * self.grid.len() + 8);
        out.push_str("ell,z\n");
        for (l, z) in self.grid.iter().zip(&self.values) {
            out.push_str(&format!("{l:?},{z:?}\n"));
        }
        out
    }
}

/// Weights `M_μ(β (Φ(max(ℓ, m)) - Φ(m))^μ)` at each node.
pub fn bielecki_weights(grid: &[f64], beta: f64, mu: f64, phi: &PhiFunction, m: f64) -> Result<Vec<f64>> {
    if !(beta > 0.0) {
        return domain(format!("Bielecki weight β must be positive, got {beta}"));
    }
    grid.iter()
        .map(|&ell| if ell <= m { Ok(1.0) } else { ml1(mu, beta * phi.delta(m, ell).powf(mu)) })
        .collect()
}

/// `sup |z(ℓ)| / M_μ(β (Φ(ℓ) - Φ(m))^μ)` with weight 1 on the history segment.
pub fn bielecki_norm(traj: &Trajectory, beta: f64, mu: f64, phi: &PhiFunction, m: f64) -> Result<f64> {
    let w = bielecki_weights(traj.grid(), beta, mu, phi, m)?;
    Ok(weighted_sup(traj.values(), &w))
}

pub(crate) fn weighted_sup(values: &[f64], weights: &[f64]) -> f64 {
    values.iter().zip(weights).fold(0.0, |acc, (v, w)| acc.max(v.abs() / w))
}
