use crate::calculus::transformed_grid;
use crate::error::{domain, Error, Result};
use crate::grid::{locate, uniform_grid, SampledFunction};
use crate::quadrature::ProductRule;

use super::kernel::MlKernel;
use super::problem::{ProblemSpec, SolverConfig};
use super::trajectory::{bielecki_weights, weighted_sup, Trajectory};

const MARCH_MAX_INNER: usize = 500;

/// Result of [`Solver::picard`].
#[derive(Debug, Clone)]
pub struct PicardOutcome {
    pub trajectory: Trajectory,
    pub iterations: usize,
    /// Bielecki norm of the last update.
    pub residual: f64,
    /// Bielecki norm of every update, in order.
    pub residuals: Vec<f64>,
    /// `residuals[k+1] / residuals[k]`, skipping zero denominators.
    pub ratios: Vec<f64>,
}

/// A discretized problem: grid, quadrature weights and delay stencils, built once.
///
/// The grid has `cfg.n_nodes` equal cells on `[m, n]` and about as many cells of
/// the same width on `[m - σ, m]`, with a node exactly at `m`.
#[derive(Debug, Clone)]
pub struct Solver {
    spec: ProblemSpec,
    cfg: SolverConfig,
    beta: f64,
    grid: Vec<f64>,
    hist: usize,
    alpha: Vec<f64>,
    alpha_m: f64,
    rule: ProductRule,
    weights: Vec<f64>,
    /// Per main node: cell on the full grid holding `f(ℓ)` and the offset in it.
    stencils: Vec<(usize, f64)>,
}

impl Solver {
    pub fn new(spec: ProblemSpec, cfg: SolverConfig) -> Result<Self> {
        spec.validate()?;
        cfg.validate(spec.lipschitz)?;
        let n = cfg.n_nodes;
        let h = (spec.n - spec.m) / n as f64;
        let hist_cells = ((spec.sigma / h).round() as usize).max(1);
        let mut grid = uniform_grid(spec.m - spec.sigma, spec.m, hist_cells);
        grid.pop();
        let hist = grid.len();
        grid.extend(uniform_grid(spec.m, spec.n, n));

        transformed_grid(&spec.phi, &grid)?;
        let u = transformed_grid(&spec.phi, &grid[hist..])?;
        let rule = ProductRule::new(&u, &MlKernel::from_spec(&spec))?;

        let alpha: Vec<f64> = grid[..=hist].iter().map(|&x| (spec.history)(x)).collect();
        if let Some(i) = alpha.iter().position(|v| !v.is_finite()) {
            return domain(format!("history is not finite at ℓ = {}", grid[i]));
        }
        let alpha_m = alpha[hist];

        let lo = grid[0];
        let slack = 1e-12 * spec.n.abs().max(spec.sigma).max(1.0);
        let mut stencils = Vec::with_capacity(n + 1);
        for &ell in &grid[hist..] {
            let d = (spec.delay)(ell);
            if !d.is_finite() || d > ell + slack || d < lo - slack {
                return domain(format!(
                    "delay map gives f({ell}) = {d}, outside [m - σ, ℓ] = [{lo}, {ell}]"
                ));
            }
            let d = d.clamp(lo, ell);
            let k = locate(&grid, d).expect("clamped into the grid");
            let t = (d - grid[k]) / (grid[k + 1] - grid[k]);
            stencils.push((k, t));
        }

        let beta = cfg.beta_for(spec.lipschitz);
        let weights = bielecki_weights(&grid, beta, spec.mu, &spec.phi, spec.m)?;
        Ok(Self { spec, cfg, beta, grid, hist, alpha, alpha_m, rule, weights, stencils })
    }

    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn main_grid(&self) -> &[f64] {
        &self.grid[self.hist..]
    }

    pub fn history_len(&self) -> usize {
        self.hist
    }

    /// Weight table of the solution kernel on the main nodes.
    pub fn rule(&self) -> &ProductRule {
        &self.rule
    }

    /// Value at `f(ℓ_j)` for main node `j`, interpolated from full-grid values.
    pub fn delayed(&self, values: &[f64], j: usize) -> f64 {
        let (k, t) = self.stencils[j];
        if t == 0.0 {
            values[k]
        } else {
            values[k] + t * (values[k + 1] - values[k])
        }
    }

    /// `α` on the history nodes and `α(m)` on `[m, n]`.
    pub fn initial_guess(&self) -> Trajectory {
        let mut values = self.alpha.clone();
        values.resize(self.grid.len(), self.alpha_m);
        Trajectory::new(self.grid.clone(), values, self.hist).expect("solver grid is valid")
    }

    pub fn bielecki(&self, traj: &Trajectory) -> f64 {
        weighted_sup(traj.values(), &self.weights)
    }

    fn check_traj(&self, traj: &Trajectory) -> Result<()> {
        if traj.grid() != self.grid.as_slice() || traj.history_len() != self.hist {
            return domain("trajectory grid does not match the solver grid");
        }
        Ok(())
    }

    fn check_forcing(&self, forcing: Option<&[f64]>) -> Result<()> {
        match forcing {
            Some(f) if f.len() != self.grid.len() - self.hist => {
                domain(format!("forcing has {} values, expected {}", f.len(), self.grid.len() - self.hist))
            }
            _ => Ok(()),
        }
    }

    fn with_main(&self, main: Vec<f64>) -> Trajectory {
        let mut values = self.alpha.clone();
        values.extend_from_slice(&main[1..]);
        Trajectory::new(self.grid.clone(), values, self.hist).expect("solver grid is valid")
    }

    /// `Q(ℓ_j, z_j, z(f(ℓ_j))) + θ_j` on the main nodes.
    fn rhs_values(&self, values: &[f64], forcing: Option<&[f64]>) -> Vec<f64> {
        let main = &self.grid[self.hist..];
        (0..main.len())
            .map(|j| {
                let q = (self.spec.rhs)(main[j], values[self.hist + j], self.delayed(values, j));
                q + forcing.map_or(0.0, |f| f[j])
            })
            .collect()
    }

    /// One application of the solution operator, with an optional extra forcing on the main nodes.
    pub fn apply_p(&self, traj: &Trajectory, forcing: Option<&[f64]>) -> Result<Trajectory> {
        self.check_traj(traj)?;
        self.check_forcing(forcing)?;
        let f = self.rhs_values(traj.values(), forcing);
        let main: Vec<f64> = self.rule.apply(&f).into_iter().map(|v| self.alpha_m + v).collect();
        if let Some(j) = main.iter().position(|v| !v.is_finite()) {
            return Err(Error::Overflow(format!("iterate is not finite at ℓ = {}", self.grid[self.hist + j])));
        }
        Ok(self.with_main(main))
    }

    /// `α(m) + ∫ K h` for node values `h` on the main grid; history is `α`.
    pub fn linear(&self, h: &[f64]) -> Result<Trajectory> {
        self.check_forcing(Some(h))?;
        let main = self.rule.apply(h).into_iter().map(|v| self.alpha_m + v).collect();
        Ok(self.with_main(main))
    }

    /// Global Picard iteration from the constant guess `α(m)`.
    pub fn picard(&self, forcing: Option<&[f64]>) -> Result<PicardOutcome> {
        self.check_forcing(forcing)?;
        let mut z = self.initial_guess();
        let mut residuals = Vec::new();
        for k in 1..=self.cfg.max_iter {
            let next = self.apply_p(&z, forcing)?;
            let r = self.bielecki(&next.difference(&z)?);
            residuals.push(r);
            z = next;
            if r <= self.cfg.tol {
                let ratios = ratios(&residuals);
                return Ok(PicardOutcome { trajectory: z, iterations: k, residual: r, residuals, ratios });
            }
        }
        Err(Error::NonConvergence {
            iterations: self.cfg.max_iter,
            residual: *residuals.last().unwrap_or(&f64::INFINITY),
            node: None,
            history: residuals,
        })
    }

    /// Node-by-node solve of the same discrete equations, each node by a damped scalar
    /// fixed-point iteration to `tol / 10`.
    pub fn march(&self, forcing: Option<&[f64]>) -> Result<Trajectory> {
        self.check_forcing(forcing)?;
        let mut values = self.initial_guess().values().to_vec();
        let main = &self.grid[self.hist..];
        let mut f = vec![0.0; main.len()];
        let tol = self.cfg.tol / 10.0;
        let theta = |j: usize| forcing.map_or(0.0, |x| x[j]);
        f[0] = (self.spec.rhs)(main[0], values[self.hist], self.delayed(&values, 0)) + theta(0);
        for i in 1..main.len() {
            let row = self.rule.row(i);
            let known = self.alpha_m + row[..i].iter().zip(&f[..i]).map(|(w, v)| w * v).sum::<f64>();
            let wii = row[i];
            let gain = 2.0 * wii * self.spec.lipschitz;
            let omega = if gain < 0.5 { 1.0 } else { 1.0 / (1.0 + gain) };
            let idx = self.hist + i;
            let mut z = values[idx - 1];
            let mut converged = false;
            let mut last = f64::INFINITY;
            let mut history = Vec::new();
            for _ in 0..MARCH_MAX_INNER {
                values[idx] = z;
                let fi = (self.spec.rhs)(main[i], z, self.delayed(&values, i)) + theta(i);
                let next = z + omega * (known + wii * fi - z);
                last = (next - z).abs();
                history.push(last);
                z = next;
                if last <= tol {
                    converged = true;
                    break;
                }
            }
            if !converged || !z.is_finite() {
                return Err(Error::NonConvergence { iterations: MARCH_MAX_INNER, residual: last, node: Some(idx), history });
            }
            values[idx] = z;
            f[i] = (self.spec.rhs)(main[i], z, self.delayed(&values, i)) + theta(i);
        }
        Trajectory::new(self.grid.clone(), values, self.hist)
    }
}

fn ratios(residuals: &[f64]) -> Vec<f64> {
    residuals.windows(2).filter(|w| w[0] > 0.0).map(|w| w[1] / w[0]).collect()
}

/// Solution `α(m) + ∫_m^ℓ K(ℓ, η) h(η) dη` of the linear problem with forcing `h`,
/// on the grid a solver with `n_nodes` cells would use.
pub fn linear_solution(h: &SampledFunction, alpha_m: f64, spec: &ProblemSpec, n_nodes: usize) -> Result<Trajectory> {
    let cfg = SolverConfig { n_nodes, ..SolverConfig::default() };
    let alpha = spec.history.clone();
    let m = spec.m;
    let spec = spec.clone().with_history(move |x| if x == m { alpha_m } else { alpha(x) });
    let solver = Solver::new(spec, cfg)?;
    let hv = solver
        .main_grid()
        .iter()
        .map(|&x| h.interpolate(x).ok_or_else(|| Error::Domain(format!("forcing is not sampled at ℓ = {x}"))))
        .collect::<Result<Vec<_>>>()?;
    solver.linear(&hv)
}
