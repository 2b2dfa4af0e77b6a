use std::fmt;
use std::sync::Arc;

use crate::error::{domain, Result};
use crate::phi::PhiFunction;

/// Right-hand side `Q(ℓ, z(ℓ), z(f(ℓ)))`.
pub type Rhs = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;
/// A real function of one variable (delay map, history).
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Data of the delay problem
///
/// ```text
/// D^{μ;Φ} z + ϱ D^{κ;Φ} z = Q(ℓ, z(ℓ), z(f(ℓ))),  ℓ ∈ [m, n]
/// z(ℓ) = α(ℓ),                                   ℓ ∈ [m - σ, m]
/// ```
///
/// with Φ-Caputo derivatives taken from `m`.
#[derive(Clone)]
pub struct ProblemSpec {
    pub mu: f64,
    pub kappa: f64,
    pub rho: f64,
    pub sigma: f64,
    pub m: f64,
    pub n: f64,
    pub phi: PhiFunction,
    pub rhs: Rhs,
    /// Declared constant with `|Q(ℓ,u1,v1) - Q(ℓ,u2,v2)| ≤ L (|u1-u2| + |v1-v2|)`.
    pub lipschitz: f64,
    pub delay: ScalarFn,
    pub history: ScalarFn,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("mu", &self.mu)
            .field("kappa", &self.kappa)
            .field("rho", &self.rho)
            .field("sigma", &self.sigma)
            .field("m", &self.m)
            .field("n", &self.n)
            .field("phi", &self.phi)
            .field("lipschitz", &self.lipschitz)
            .finish_non_exhaustive()
    }
}

impl ProblemSpec {
    /// Zero right-hand side, constant lag `σ`, history `α ≡ 1`, identity scale, `L_Q = 1`.
    pub fn new(mu: f64, kappa: f64, rho: f64, sigma: f64, m: f64, n: f64) -> Self {
        Self {
            mu,
            kappa,
            rho,
            sigma,
            m,
            n,
            phi: PhiFunction::Identity,
            rhs: Arc::new(|_, _, _| 0.0),
            lipschitz: 1.0,
            delay: Arc::new(move |ell| ell - sigma),
            history: Arc::new(|_| 1.0),
        }
    }

    /// The worked example: μ = 0.5, κ = 0.45, ϱ = 1, f(ℓ) = ℓ - σ and
    /// `Q = (sin ℓ / 2)(u + √(1+u²)) + sin v` with `L_Q = 1`, on `[1, 2]`, σ = 0.5, α ≡ 1.
    pub fn worked_example() -> Self {
        Self::new(0.5, 0.45, 1.0, 0.5, 1.0, 2.0).with_rhs(worked_example_rhs, 1.0)
    }

    pub fn with_phi(mut self, phi: PhiFunction) -> Self {
        self.phi = phi;
        self
    }

    pub fn with_rhs(mut self, q: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static, lipschitz: f64) -> Self {
        self.rhs = Arc::new(q);
        self.lipschitz = lipschitz;
        self
    }

    pub fn with_delay(mut self, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.delay = Arc::new(f);
        self
    }

    pub fn with_history(mut self, alpha: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.history = Arc::new(alpha);
        self
    }

    /// Structural checks on the scalar data.
    pub fn validate(&self) -> Result<()> {
        let all = [self.mu, self.kappa, self.rho, self.sigma, self.m, self.n, self.lipschitz];
        if all.iter().any(|v| !v.is_finite()) {
            return domain("problem parameters must be finite");
        }
        if !(0.0 < self.kappa && self.kappa < self.mu && self.mu <= 1.0) {
            return domain(format!("orders must satisfy 0 < κ < μ ≤ 1, got κ = {}, μ = {}", self.kappa, self.mu));
        }
        if !(self.rho > 0.0) {
            return domain(format!("ϱ must be positive, got {}", self.rho));
        }
        if !(self.sigma > 0.0) {
            return domain(format!("delay span σ must be positive, got {}", self.sigma));
        }
        if !(self.m < self.n) {
            return domain(format!("interval must satisfy m < n, got [{}, {}]", self.m, self.n));
        }
        if !(self.lipschitz > 0.0) {
            return domain(format!("Lipschitz constant must be positive, got {}", self.lipschitz));
        }
        Ok(())
    }

    /// `Φ(ℓ) - Φ(m)` clamped at zero.
    pub fn delta_phi(&self, ell: f64) -> f64 {
        self.phi.delta(self.m, ell)
    }
}

pub fn worked_example_rhs(ell: f64, u: f64, v: f64) -> f64 {
    0.5 * ell.sin() * (u + (1.0 + u * u).sqrt()) + v.sin()
}

/// Discretization and stopping parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Number of cells on `[m, n]`.
    pub n_nodes: usize,
    /// Bielecki-norm tolerance on successive iterates.
    pub tol: f64,
    pub max_iter: usize,
    /// Bielecki weight; `None` means `2 L_Q + 1`.
    pub beta: Option<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { n_nodes: 512, tol: 1e-10, max_iter: 100, beta: None }
    }
}

impl SolverConfig {
    pub fn beta_for(&self, lipschitz: f64) -> f64 {
        self.beta.unwrap_or(2.0 * lipschitz + 1.0)
    }

    pub fn validate(&self, lipschitz: f64) -> Result<()> {
        if self.n_nodes < 16 {
            return domain(format!("n_nodes must be at least 16, got {}", self.n_nodes));
        }
        if !(self.tol > 0.0) {
            return domain(format!("tol must be positive, got {}", self.tol));
        }
        if self.max_iter == 0 {
            return domain("max_iter must be at least 1");
        }
        let beta = self.beta_for(lipschitz);
        if !(beta > 0.0) || !contraction_certificate(lipschitz, beta) {
            return domain(format!("β = {beta} violates the contraction condition 2 L_Q / β < 1 with L_Q = {lipschitz}"));
        }
        Ok(())
    }
}

/// `2 L_Q / β < 1`.
pub fn contraction_certificate(lipschitz: f64, beta: f64) -> bool {
    2.0 * lipschitz / beta < 1.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certificate_boundary() {
        assert!(contraction_certificate(1.0, 3.0));
        assert!(!contraction_certificate(1.0, 2.0));
        assert!(contraction_certificate(0.5, 1.0001));
    }

    #[test]
    fn validation_messages() {
        let e = ProblemSpec::new(0.5, 0.6, 1.0, 0.5, 1.0, 2.0).validate().unwrap_err();
        assert!(e.to_string().contains("0 < κ < μ ≤ 1"));
        assert!(ProblemSpec::new(0.5, 0.4, 0.0, 0.5, 1.0, 2.0).validate().is_err());
        assert!(ProblemSpec::new(0.5, 0.4, 1.0, 0.0, 1.0, 2.0).validate().is_err());
        assert!(ProblemSpec::new(0.5, 0.4, 1.0, 0.5, 2.0, 2.0).validate().is_err());
        assert!(ProblemSpec::worked_example().validate().is_ok());
    }

    #[test]
    fn default_beta() {
        let cfg = SolverConfig::default();
        assert_eq!(cfg.beta_for(1.0), 3.0);
        assert!(cfg.validate(1.0).is_ok());
        let cfg = SolverConfig { beta: Some(2.0), ..cfg };
        assert!(cfg.validate(1.0).is_err());
        let cfg = SolverConfig { n_nodes: 8, ..SolverConfig::default() };
        assert!(cfg.validate(1.0).is_err());
    }
}
