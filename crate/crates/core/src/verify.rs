//! Named identity checks for the Φ-fractional operators and the Laplace transform.
//!
//! Reference values that involve Γ go through a caller-supplied gamma function, so a
//! faulty implementation shows up as failing checks.

use std::fmt;

use crate::calculus::{caputo_derivative, frac_integral};
use crate::error::Result;
use crate::grid::{graded_grid, uniform_grid, SampledFunction};
use crate::laplace::{glt, glt_sampled, phi_convolve, TransformQuery};
use crate::phi::PhiFunction;
use crate::special::{ml1, ml2};

/// Gamma function used for reference values.
pub type GammaFn = dyn Fn(f64) -> Result<f64> + Sync;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Calculus,
    Laplace,
    All,
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "calculus" => Ok(Suite::Calculus),
            "laplace" => Ok(Suite::Laplace),
            "all" => Ok(Suite::All),
            other => Err(format!("unknown suite `{other}` (expected laplace, calculus or all)")),
        }
    }
}

/// One identity check: the observed discrepancy against its tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub error: f64,
    pub tol: f64,
}

impl Check {
    fn new(name: impl Into<String>, error: f64, tol: f64) -> Self {
        Self { name: name.into(), error, tol }
    }

    pub fn pass(&self) -> bool {
        self.error <= self.tol
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.pass() { "PASS" } else { "FAIL" };
        write!(f, "{status}  {:<40} error {:>10.3e}  tol {:.0e}", self.name, self.error, self.tol)
    }
}

fn failed(name: &str, err: crate::Error) -> Check {
    Check::new(format!("{name} ({err})"), f64::INFINITY, 0.0)
}

fn sup_diff(a: &[f64], b: &[f64], skip: usize) -> f64 {
    a.iter().zip(b).skip(skip).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn run(suite: Suite, gamma: &GammaFn) -> Vec<Check> {
    let mut out = Vec::new();
    if matches!(suite, Suite::Calculus | Suite::All) {
        out.extend(calculus_checks(gamma));
    }
    if matches!(suite, Suite::Laplace | Suite::All) {
        out.extend(laplace_checks(gamma));
    }
    out
}

fn guard(name: &str, f: impl FnOnce() -> Result<Check>) -> Check {
    f().unwrap_or_else(|e| failed(name, e))
}

pub fn calculus_checks(gamma: &GammaFn) -> Vec<Check> {
    let mut out = Vec::new();

    out.push(guard("integral of one", || {
        let z = SampledFunction::from_fn(uniform_grid(0.0, 1.0, 511), |_| 1.0)?;
        let got = frac_integral(&z, 0.5, &PhiFunction::Identity, 0.0)?;
        let g = gamma(1.5)?;
        let want: Vec<f64> = z.grid().iter().map(|x| x.sqrt() / g).collect();
        Ok(Check::new("integral of one", sup_diff(got.values(), &want, 0), 1e-6))
    }));

    let power_cases: [(&str, PhiFunction, f64, f64, f64, f64); 3] = [
        ("power law, identity scale", PhiFunction::Identity, 0.0, 1.0, 2.5, 0.5),
        ("power law, logarithmic scale", PhiFunction::Logarithmic, 1.0, std::f64::consts::E, 2.7, 0.3),
        ("power law, exponential scale", PhiFunction::Exponential, 0.0, 1.0, 3.2, 0.8),
    ];
    for (name, phi, m, n, kappa, mu) in power_cases {
        out.push(guard(name, || {
            let u0 = phi.eval(m);
            let z = SampledFunction::from_fn(uniform_grid(m, n, 1023), |x| (phi.eval(x) - u0).powf(kappa - 1.0))?;
            let got = frac_integral(&z, mu, &phi, m)?;
            let c = gamma(kappa)? / gamma(kappa + mu)?;
            let want: Vec<f64> = z.grid().iter().map(|&x| c * (phi.eval(x) - u0).powf(kappa + mu - 1.0)).collect();
            Ok(Check::new(name, sup_diff(got.values(), &want, 0), 1e-5))
        }));
    }

    for beta in [0.5, 1.0, 2.0] {
        let name = format!("eigenfunction, beta = {beta} (relative)");
        out.push(guard(&name, || {
            let mu = 0.5;
            let grid = graded_grid(0.0, 1.0, 1023, 1.0 / mu);
            let z = SampledFunction::from_fn(grid, |x| ml1(mu, beta * x.powf(mu)).unwrap_or(f64::NAN))?;
            let got = frac_integral(&z, mu, &PhiFunction::Identity, 0.0)?;
            let want: Vec<f64> = z.values().iter().map(|v| (v - 1.0) / beta).collect();
            let scale = z.values().iter().fold(1.0, |a: f64, v| a.max(v.abs()));
            Ok(Check::new(name.clone(), sup_diff(got.values(), &want, 0) / scale, 1e-4))
        }));
    }

    out.push(guard("caputo power law", || {
        let z = SampledFunction::from_fn(uniform_grid(0.0, 1.0, 2047), |x| x.powf(0.8))?;
        let got = caputo_derivative(&z, 0.5, &PhiFunction::Identity, 0.0)?;
        let c = gamma(1.8)? / gamma(1.3)?;
        let want: Vec<f64> = z.grid().iter().map(|x| c * x.powf(0.3)).collect();
        Ok(Check::new("caputo power law", sup_diff(got.values(), &want, 2048 / 20), 1e-3))
    }));

    out.push(guard("caputo after integral", || {
        let phi = PhiFunction::Power(1.5);
        // z(m) = 0 keeps I^μ z continuously differentiable, as the difference quotients need
        let z = SampledFunction::from_fn(uniform_grid(0.5, 1.5, 1023), |x| (2.0 * (x - 0.5)).sin())?;
        let back = caputo_derivative(&frac_integral(&z, 0.6, &phi, 0.5)?, 0.6, &phi, 0.5)?;
        Ok(Check::new("caputo after integral", sup_diff(back.values(), z.values(), 1024 / 20), 5e-3))
    }));

    out.push(guard("integral after caputo", || {
        let phi = PhiFunction::Logarithmic;
        let z = SampledFunction::from_fn(uniform_grid(1.0, 2.0, 1023), |x| x.cos())?;
        let back = frac_integral(&caputo_derivative(&z, 0.4, &phi, 1.0)?, 0.4, &phi, 1.0)?;
        let z0 = z.values()[0];
        let want: Vec<f64> = z.values().iter().map(|v| v - z0).collect();
        Ok(Check::new("integral after caputo", sup_diff(back.values(), &want, 0), 5e-3))
    }));

    out.push(guard("linearity", || {
        let grid = uniform_grid(0.0, 1.0, 400);
        let phi = PhiFunction::Exponential;
        let z1 = SampledFunction::from_fn(grid.clone(), |x| x.exp())?;
        let z2 = SampledFunction::from_fn(grid.clone(), |x| 1.0 / (1.0 + x))?;
        let zc = SampledFunction::from_fn(grid, |x| 2.0 * x.exp() - 3.0 / (1.0 + x))?;
        let (i1, i2, ic) = (frac_integral(&z1, 0.3, &phi, 0.0)?, frac_integral(&z2, 0.3, &phi, 0.0)?, frac_integral(&zc, 0.3, &phi, 0.0)?);
        let comb: Vec<f64> = i1.values().iter().zip(i2.values()).map(|(a, b)| 2.0 * a - 3.0 * b).collect();
        Ok(Check::new("linearity", sup_diff(ic.values(), &comb, 0), 1e-12))
    }));
    out
}

const LAMBDAS: [f64; 3] = [1.0, 2.0, 5.0];

fn bump(s: f64) -> f64 {
    if (0.0..=1.0).contains(&s) {
        (std::f64::consts::PI * s).sin().powi(2)
    } else {
        0.0
    }
}

fn ramp(s: f64) -> f64 {
    if (0.0..=1.0).contains(&s) {
        s * (1.0 - s) * (1.0 - s)
    } else {
        0.0
    }
}

pub fn laplace_checks(gamma: &GammaFn) -> Vec<Check> {
    let mut out = Vec::new();
    let id = PhiFunction::Identity;
    let tol = 1e-12;
    for lambda in LAMBDAS {
        let name = format!("transform of one, lambda = {lambda}");
        out.push(guard(&name, || {
            let q = TransformQuery::with_auto_horizon(&id, 0.0, lambda, 1.0, 1e-14)?;
            Ok(Check::new(name.clone(), (glt(|_| 1.0, &id, 0.0, &q)?.value - 1.0 / lambda).abs(), 1e-8))
        }));

        let name = format!("power pair r = 1.5, lambda = {lambda}");
        out.push(guard(&name, || {
            let phi = PhiFunction::Logarithmic;
            let q = TransformQuery::new(lambda, (40.0 / lambda + 5.0f64).exp(), tol)?;
            let got = glt(|x: f64| x.ln().sqrt(), &phi, 1.0, &q)?.value;
            Ok(Check::new(name.clone(), (got - gamma(1.5)? / lambda.powf(1.5)).abs(), 1e-6))
        }));

        let name = format!("decaying ML pair, lambda = {lambda}");
        out.push(guard(&name, || {
            let q = TransformQuery::new(lambda, 40.0 / lambda, tol)?;
            let got = glt(|x: f64| ml1(0.5, -x.sqrt()).unwrap_or(f64::NAN), &id, 0.0, &q)?.value;
            Ok(Check::new(name.clone(), (got - lambda.powf(-0.5) / (lambda.sqrt() + 1.0)).abs(), 1e-4))
        }));

        let name = format!("growing ML pair, lambda = {lambda}");
        out.push(guard(&name, || {
            // rho = 0.5, p = 0.5: valid for lambda^p > rho
            let (p, rho) = (0.5, 0.5);
            let q = TransformQuery::new(lambda, 40.0 / (lambda - 0.25), tol)?;
            let got = glt(|x: f64| ml1(p, rho * x.powf(p)).unwrap_or(f64::NAN), &id, 0.0, &q)?.value;
            Ok(Check::new(name.clone(), (got - lambda.powf(p - 1.0) / (lambda.powf(p) - rho)).abs(), 1e-4))
        }));

        let name = format!("two-parameter pair, lambda = {lambda}");
        out.push(guard(&name, || {
            let (mu, kappa, rho) = (0.5, 0.45, 1.0);
            let (p, qq) = (mu - kappa, mu);
            let q = TransformQuery::new(lambda, 40.0 / lambda, tol)?;
            let got = glt(|x: f64| x.powf(qq - 1.0) * ml2(p, qq, -rho * x.powf(p)).unwrap_or(f64::NAN), &id, 0.0, &q)?.value;
            Ok(Check::new(name.clone(), (got - lambda.powf(p - qq) / (lambda.powf(p) + rho)).abs(), 1e-4))
        }));
    }

    for (label, phi, m) in [("identity", PhiFunction::Identity, 0.0), ("logarithmic", PhiFunction::Logarithmic, 1.0)] {
        let name = format!("convolution theorem, {label} scale");
        out.push(guard(&name, || {
            let u0 = phi.eval(m);
            let end = phi.inverse(u0 + 2.0)?;
            let grid = uniform_grid(m, end, 2047);
            let z1 = SampledFunction::from_fn(grid.clone(), |x| bump(phi.eval(x) - u0))?;
            let z2 = SampledFunction::from_fn(grid, |x| ramp(phi.eval(x) - u0))?;
            let conv = phi_convolve(&z1, &z2, &phi, m)?;
            let horizon = phi.inverse(u0 + 1.0)?;
            let mut worst: f64 = 0.0;
            for lambda in LAMBDAS {
                let q = TransformQuery::new(lambda, horizon, tol)?;
                let l1 = glt(|x| bump(phi.eval(x) - u0), &phi, m, &q)?.value;
                let l2 = glt(|x| ramp(phi.eval(x) - u0), &phi, m, &q)?.value;
                worst = worst.max((glt_sampled(&conv, &phi, m, lambda)? - l1 * l2).abs());
            }
            Ok(Check::new(name.clone(), worst, 1e-4))
        }));
    }

    out.push(guard("transform of fractional integral", || {
        let mu = 0.6;
        let z = SampledFunction::from_fn(uniform_grid(0.0, 40.0, 3999), |x| x * (-x).exp())?;
        let iz = frac_integral(&z, mu, &id, 0.0)?;
        let mut worst: f64 = 0.0;
        for lambda in LAMBDAS {
            // L{s e^{-s}} = 1/(λ+1)²
            let want = 1.0 / ((lambda + 1.0).powi(2) * lambda.powf(mu));
            worst = worst.max((glt_sampled(&iz, &id, 0.0, lambda)? - want).abs());
        }
        Ok(Check::new("transform of fractional integral", worst, 1e-4))
    }));

    out.push(guard("transform of caputo derivative", || {
        let mu = 0.4;
        let z = SampledFunction::from_fn(uniform_grid(0.0, 40.0, 3999), |x| (-x).exp())?;
        let dz = caputo_derivative(&z, mu, &id, 0.0)?;
        let mut worst: f64 = 0.0;
        for lambda in LAMBDAS {
            let lz = 1.0 / (lambda + 1.0);
            let want = lambda.powf(mu) * lz - lambda.powf(mu - 1.0);
            worst = worst.max((glt_sampled(&dz, &id, 0.0, lambda)? - want).abs());
        }
        Ok(Check::new("transform of caputo derivative", worst, 5e-3))
    }));
    out
}
