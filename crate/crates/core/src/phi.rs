//! Scale functions Φ for the Φ-fractional operators.

use std::fmt;
use std::sync::Arc;

use crate::error::{domain, Result};

/// A caller-supplied increasing scale function.
pub trait ScaleFunction: Send + Sync + fmt::Debug {
    fn eval(&self, ell: f64) -> f64;
    fn deriv(&self, ell: f64) -> f64;
    /// Closed-form inverse, if known. Needed by the convolution and the Laplace transform.
    fn inverse(&self, _u: f64) -> Option<f64> {
        None
    }
}

/// The increasing function Φ together with Φ′.
///
/// `Power(ρ)` is the odd extension `sign(ℓ)|ℓ|^ρ`, so it is increasing on the
/// whole line and its derivative vanishes at the origin when `ρ > 1`.
#[derive(Clone, Debug)]
pub enum PhiFunction {
    Identity,
    /// `Φ(ℓ) = ln ℓ`, only defined for `ℓ > 0`.
    Logarithmic,
    Power(f64),
    /// `Φ(ℓ) = e^ℓ`.
    Exponential,
    Custom(Arc<dyn ScaleFunction>),
}

impl PartialEq for PhiFunction {
    fn eq(&self, other: &Self) -> bool {
        use PhiFunction::*;
        match (self, other) {
            (Identity, Identity) | (Logarithmic, Logarithmic) | (Exponential, Exponential) => true,
            (Power(a), Power(b)) => a == b,
            (Custom(a), Custom(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

impl fmt::Display for PhiFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhiFunction::Identity => write!(f, "identity"),
            PhiFunction::Logarithmic => write!(f, "logarithmic"),
            PhiFunction::Power(r) => write!(f, "power({r})"),
            PhiFunction::Exponential => write!(f, "exponential"),
            PhiFunction::Custom(c) => write!(f, "custom({c:?})"),
        }
    }
}

impl PhiFunction {
    pub fn custom(f: impl ScaleFunction + 'static) -> Self {
        PhiFunction::Custom(Arc::new(f))
    }

    pub fn eval(&self, ell: f64) -> f64 {
        match self {
            PhiFunction::Identity => ell,
            PhiFunction::Logarithmic => ell.ln(),
            PhiFunction::Power(r) => ell.signum() * ell.abs().powf(*r),
            PhiFunction::Exponential => ell.exp(),
            PhiFunction::Custom(c) => c.eval(ell),
        }
    }

    pub fn deriv(&self, ell: f64) -> f64 {
        match self {
            PhiFunction::Identity => 1.0,
            PhiFunction::Logarithmic => 1.0 / ell,
            PhiFunction::Power(r) => {
                if ell == 0.0 {
                    match r.partial_cmp(&1.0) {
                        Some(std::cmp::Ordering::Greater) => 0.0,
                        Some(std::cmp::Ordering::Equal) => 1.0,
                        _ => f64::INFINITY,
                    }
                } else {
                    r * ell.abs().powf(r - 1.0)
                }
            }
            PhiFunction::Exponential => ell.exp(),
            PhiFunction::Custom(c) => c.deriv(ell),
        }
    }

    /// Φ^{-1}(u). Errors for custom functions without a closed-form inverse and
    /// for values outside the range of Φ.
    pub fn inverse(&self, u: f64) -> Result<f64> {
        let ell = match self {
            PhiFunction::Identity => u,
            PhiFunction::Logarithmic => u.exp(),
            PhiFunction::Power(r) => u.signum() * u.abs().powf(1.0 / r),
            PhiFunction::Exponential => {
                if u <= 0.0 {
                    return domain(format!("exponential scale has no preimage for {u}"));
                }
                u.ln()
            }
            PhiFunction::Custom(c) => match c.inverse(u) {
                Some(x) => x,
                None => return domain("custom scale function has no closed-form inverse"),
            },
        };
        Ok(ell)
    }

    /// Φ(ℓ) - Φ(a) for ℓ ≥ a, clamped at zero.
    pub fn delta(&self, a: f64, ell: f64) -> f64 {
        (self.eval(ell) - self.eval(a)).max(0.0)
    }
}

/// Outcome of [`validate_phi`].
#[derive(Debug, Clone, PartialEq)]
pub enum PhiValidation {
    Valid,
    Violation { index: usize, ell: f64, reason: String },
}

impl PhiValidation {
    pub fn is_valid(&self) -> bool {
        matches!(self, PhiValidation::Valid)
    }
}

/// Samples `n` equispaced points of `[lo, hi]` and checks `Φ′ > 0` and strict
/// monotonicity. Reports the first offending sample.
pub fn validate_phi(phi: &PhiFunction, lo: f64, hi: f64, n: usize) -> Result<PhiValidation> {
    if !(lo < hi) {
        return domain(format!("validate_phi needs lo < hi, got [{lo}, {hi}]"));
    }
    if n < 2 {
        return domain("validate_phi needs at least two samples");
    }
    let step = (hi - lo) / (n - 1) as f64;
    let mut prev: Option<f64> = None;
    for i in 0..n {
        let ell = if i == n - 1 { hi } else { lo + step * i as f64 };
        let value = phi.eval(ell);
        let d = phi.deriv(ell);
        if !value.is_finite() {
            return Ok(PhiValidation::Violation {
                index: i,
                ell,
                reason: format!("Φ({ell}) = {value} is not finite"),
            });
        }
        if !(d > 0.0) {
            return Ok(PhiValidation::Violation { index: i, ell, reason: format!("Φ′({ell}) = {d} is not positive") });
        }
        if let Some(p) = prev {
            if !(value > p) {
                return Ok(PhiValidation::Violation {
                    index: i,
                    ell,
                    reason: format!("Φ is not strictly increasing at {ell}"),
                });
            }
        }
        prev = Some(value);
    }
    Ok(PhiValidation::Valid)
}

/// Checks the scale function on the nodes of an existing grid.
pub fn validate_on_grid(phi: &PhiFunction, grid: &[f64]) -> PhiValidation {
    let mut prev: Option<f64> = None;
    for (i, &ell) in grid.iter().enumerate() {
        let value = phi.eval(ell);
        let d = phi.deriv(ell);
        if !value.is_finite() || !(d > 0.0) || prev.is_some_and(|p| !(value > p)) {
            return PhiValidation::Violation {
                index: i,
                ell,
                reason: format!("Φ({ell}) = {value}, Φ′({ell}) = {d}"),
            };
        }
        prev = Some(value);
    }
    PhiValidation::Valid
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_kinds_validate_on_their_domains() {
        assert!(validate_phi(&PhiFunction::Identity, 0.0, 1.0, 100).unwrap().is_valid());
        assert!(validate_phi(&PhiFunction::Logarithmic, 0.5, 2.0, 100).unwrap().is_valid());
        assert!(validate_phi(&PhiFunction::Exponential, -3.0, 3.0, 100).unwrap().is_valid());
        assert!(validate_phi(&PhiFunction::Power(0.5), 0.1, 3.0, 100).unwrap().is_valid());
    }

    #[test]
    fn squared_power_fails_at_origin() {
        match validate_phi(&PhiFunction::Power(2.0), -1.0, 1.0, 101).unwrap() {
            PhiValidation::Violation { index, ell, .. } => {
                assert_eq!(index, 50);
                assert!(ell.abs() < 1e-15);
            }
            v => panic!("expected a violation, got {v:?}"),
        }
    }

    #[test]
    fn logarithm_needs_positive_domain() {
        let v = validate_phi(&PhiFunction::Logarithmic, 0.0, 1.0, 10).unwrap();
        assert!(matches!(v, PhiValidation::Violation { index: 0, .. }));
    }

    #[test]
    fn bad_sampling_requests() {
        assert!(validate_phi(&PhiFunction::Identity, 1.0, 1.0, 10).is_err());
        assert!(validate_phi(&PhiFunction::Identity, 0.0, 1.0, 1).is_err());
    }

    #[test]
    fn inverses_round_trip() {
        let kinds = [PhiFunction::Identity, PhiFunction::Logarithmic, PhiFunction::Power(1.7), PhiFunction::Exponential];
        for phi in &kinds {
            for &x in &[0.3, 1.0, 2.5] {
                let back = phi.inverse(phi.eval(x)).unwrap();
                assert!((back - x).abs() < 1e-14 * x.max(1.0), "{phi}: {x} -> {back}");
            }
        }
    }

    #[test]
    fn custom_without_inverse() {
        #[derive(Debug)]
        struct Cubic;
        impl ScaleFunction for Cubic {
            fn eval(&self, x: f64) -> f64 {
                x + x * x * x
            }
            fn deriv(&self, x: f64) -> f64 {
                1.0 + 3.0 * x * x
            }
        }
        let phi = PhiFunction::custom(Cubic);
        assert!(validate_phi(&phi, -2.0, 2.0, 50).unwrap().is_valid());
        assert!(phi.inverse(1.0).is_err());
    }
}
