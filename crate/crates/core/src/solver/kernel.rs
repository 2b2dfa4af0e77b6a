use crate::error::{domain, Result};
use crate::quadrature::AbelKernel;
use crate::special::ml2;

use super::ProblemSpec;

/// `K(s) = s^{μ-1} M_{μ-κ,μ}(-ϱ s^{μ-κ})` in the transformed variable `s = Φ(ℓ) - Φ(η)`.
#[derive(Debug, Clone, Copy)]
pub struct MlKernel {
    pub mu: f64,
    pub p: f64,
    pub rho: f64,
}

impl MlKernel {
    pub fn new(mu: f64, kappa: f64, rho: f64) -> Self {
        Self { mu, p: mu - kappa, rho }
    }

    pub fn from_spec(spec: &ProblemSpec) -> Self {
        Self::new(spec.mu, spec.kappa, spec.rho)
    }

    pub fn eval(&self, s: f64) -> Result<f64> {
        Ok(s.powf(self.mu - 1.0) * ml2(self.p, self.mu, -self.rho * s.powf(self.p))?)
    }
}

impl AbelKernel for MlKernel {
    fn first_primitive(&self, s: f64) -> Result<f64> {
        if s == 0.0 {
            return Ok(0.0);
        }
        Ok(s.powf(self.mu) * ml2(self.p, self.mu + 1.0, -self.rho * s.powf(self.p))?)
    }

    fn second_primitive(&self, s: f64) -> Result<f64> {
        if s == 0.0 {
            return Ok(0.0);
        }
        Ok(s.powf(self.mu + 1.0) * ml2(self.p, self.mu + 2.0, -self.rho * s.powf(self.p))?)
    }
}

/// The solution kernel `Φ′(η) (Φ(ℓ)-Φ(η))^{μ-1} M_{μ-κ,μ}(-ϱ(Φ(ℓ)-Φ(η))^{μ-κ})` for `η < ℓ`.
pub fn kernel(ell: f64, eta: f64, spec: &ProblemSpec) -> Result<f64> {
    if !(eta < ell) {
        return domain(format!("kernel needs η < ℓ, got η = {eta}, ℓ = {ell}"));
    }
    let s = spec.phi.eval(ell) - spec.phi.eval(eta);
    Ok(spec.phi.deriv(eta) * MlKernel::from_spec(spec).eval(s)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma;

    #[test]
    fn vanishing_damping() {
        let spec = ProblemSpec::new(0.7, 0.2, 1e-12, 0.5, 0.0, 1.0);
        for &(l, e) in &[(1.0f64, 0.0f64), (0.5, 0.49), (0.9, 0.1)] {
            let want = (l - e).powf(-0.3) / gamma(0.7).unwrap();
            assert!((kernel(l, e, &spec).unwrap() - want).abs() < 1e-9 * want.max(1.0));
        }
    }

    #[test]
    fn rejects_diagonal() {
        let spec = ProblemSpec::worked_example();
        assert!(kernel(1.5, 1.5, &spec).is_err());
        assert!(kernel(1.5, 1.6, &spec).is_err());
    }

    #[test]
    fn primitives_differentiate_back() {
        let k = MlKernel::new(0.5, 0.45, 1.0);
        for &s in &[0.01, 0.3, 1.0] {
            let d = 1e-6 * s;
            let k1 = (k.first_primitive(s + d).unwrap() - k.first_primitive(s - d).unwrap()) / (2.0 * d);
            let k2 = (k.second_primitive(s + d).unwrap() - k.second_primitive(s - d).unwrap()) / (2.0 * d);
            assert!((k1 - k.eval(s).unwrap()).abs() < 1e-6 * k1.abs());
            assert!((k2 - k.first_primitive(s).unwrap()).abs() < 1e-6 * k2.abs());
        }
    }
}
