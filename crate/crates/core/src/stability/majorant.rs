use crate::calculus::transformed_grid;
use crate::error::{domain, Error, Result};
use crate::grid::SampledFunction;
use crate::phi::PhiFunction;
use crate::quadrature::{PowerKernel, ProductRule};
use crate::solver::{Solver, Trajectory};
use crate::special::{gamma, ml1};

use super::perturbation::envelope;

/// `c2(ℓ) M_μ(Γ(μ) c3 (Φ(ℓ) - Φ(m))^μ)` for nondecreasing `c2`.
pub fn gronwall_majorant(c2: &SampledFunction, c3: f64, mu: f64, phi: &PhiFunction, m: f64) -> Result<SampledFunction> {
    if !(c3 >= 0.0) {
        return domain(format!("c3 must be nonnegative, got {c3}"));
    }
    if let Some(i) = c2.values().windows(2).position(|w| w[1] < w[0]) {
        return domain(format!("c2 decreases between nodes {i} and {}", i + 1));
    }
    let g = gamma(mu)?;
    let values = c2
        .grid()
        .iter()
        .zip(c2.values())
        .map(|(&x, &c)| Ok(c * ml1(mu, g * c3 * phi.delta(m, x).powf(mu))?))
        .collect::<Result<Vec<_>>>()?;
    SampledFunction::new(c2.grid().to_vec(), values)
}

/// The majorant operator `S b = ε M_μ((ΔΦ)^μ) + L_Q I^{μ;Φ}[b + b∘f]`, zero on the history.
#[derive(Debug, Clone)]
pub struct MajorantOperator<'a> {
    solver: &'a Solver,
    rule: ProductRule,
    envelope: Vec<f64>,
}

impl<'a> MajorantOperator<'a> {
    pub fn new(solver: &'a Solver) -> Result<Self> {
        let spec = solver.spec();
        let u = transformed_grid(&spec.phi, solver.main_grid())?;
        let rule = ProductRule::new(&u, &PowerKernel::new(spec.mu)?)?;
        let envelope = solver
            .main_grid()
            .iter()
            .map(|&x| envelope(spec.mu, &spec.phi, spec.m, x))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { solver, rule, envelope })
    }

    /// `M_μ((ΔΦ)^μ)` on the main nodes.
    pub fn envelope(&self) -> &[f64] {
        &self.envelope
    }

    pub fn apply(&self, b: &Trajectory, epsilon: f64) -> Result<Trajectory> {
        let hist = self.solver.history_len();
        if b.grid() != self.solver.grid() {
            return domain("majorant argument is not on the solver grid");
        }
        let values = b.values();
        let sum: Vec<f64> =
            (0..self.envelope.len()).map(|j| values[hist + j] + self.solver.delayed(values, j)).collect();
        let integral = self.rule.apply(&sum);
        let lq = self.solver.spec().lipschitz;
        let mut out = vec![0.0; values.len()];
        for j in 1..self.envelope.len() {
            out[hist + j] = epsilon * self.envelope[j] + lq * integral[j];
        }
        // At ℓ = m the two branches meet; the history branch wins.
        Trajectory::new(b.grid().to_vec(), out, hist)
    }
}

/// Fixed point `b*` of [`MajorantOperator`], iterated from zero.
///
/// The stopping tolerance is `tol · ε`, so the iteration is the same for every `ε`
/// and `b*` is exactly linear in `ε`.
pub fn majorant_fixed_point(epsilon: f64, solver: &Solver) -> Result<Trajectory> {
    if !(epsilon > 0.0) {
        return domain(format!("ε must be positive, got {epsilon}"));
    }
    let op = MajorantOperator::new(solver)?;
    let cfg = solver.config();
    let mut b = Trajectory::new(solver.grid().to_vec(), vec![0.0; solver.grid().len()], solver.history_len())?;
    let mut history = Vec::new();
    for _ in 0..cfg.max_iter {
        let next = op.apply(&b, epsilon)?;
        let r = solver.bielecki(&next.difference(&b)?);
        history.push(r);
        b = next;
        if r <= cfg.tol * epsilon {
            return Ok(b);
        }
    }
    Err(Error::NonConvergence {
        iterations: cfg.max_iter,
        residual: *history.last().unwrap_or(&f64::INFINITY),
        node: None,
        history,
    })
}
