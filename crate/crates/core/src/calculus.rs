//! Φ-fractional integrals and Φ-Caputo derivatives of sampled functions.

use crate::error::{domain, Result};
use crate::grid::SampledFunction;
use crate::phi::{validate_on_grid, PhiFunction, PhiValidation};
use crate::quadrature::{PowerKernel, ProductRule};

pub(crate) fn check_anchor(grid: &[f64], m: f64) -> Result<()> {
    if (grid[0] - m).abs() > 1e-12 * m.abs().max(1.0) {
        return domain(format!("grid starts at {} but the lower terminal is {m}", grid[0]));
    }
    Ok(())
}

/// Φ evaluated on a grid after checking Φ′ > 0 and monotonicity at every node.
pub(crate) fn transformed_grid(phi: &PhiFunction, grid: &[f64]) -> Result<Vec<f64>> {
    if let PhiValidation::Violation { index, ell, reason } = validate_on_grid(phi, grid) {
        return domain(format!("scale function {phi} is invalid at node {index} (ℓ = {ell}): {reason}"));
    }
    Ok(grid.iter().map(|&x| phi.eval(x)).collect())
}

/// Product rule for `I^{μ;Φ}_{m+}` on the grid of `z`.
pub fn frac_integral_rule(grid: &[f64], mu: f64, phi: &PhiFunction, m: f64) -> Result<ProductRule> {
    if !(mu > 0.0 && mu <= 1.0) {
        return domain(format!("integral order must lie in (0, 1], got {mu}"));
    }
    check_anchor(grid, m)?;
    let u = transformed_grid(phi, grid)?;
    ProductRule::new(&u, &PowerKernel::new(mu)?)
}

/// Φ-fractional Riemann-Liouville integral of order `mu ∈ (0, 1]` with lower terminal `m`.
///
/// ```
/// use fracdelay::{calculus::frac_integral, grid::{uniform_grid, SampledFunction}, phi::PhiFunction};
/// let one = SampledFunction::from_fn(uniform_grid(0.0, 1.0, 64), |_| 1.0).unwrap();
/// let out = frac_integral(&one, 1.0, &PhiFunction::Identity, 0.0).unwrap();
/// assert!((out.values()[64] - 1.0).abs() < 1e-14);
/// ```
pub fn frac_integral(z: &SampledFunction, mu: f64, phi: &PhiFunction, m: f64) -> Result<SampledFunction> {
    let rule = frac_integral_rule(z.grid(), mu, phi, m)?;
    SampledFunction::new(z.grid().to_vec(), rule.apply(z.values()))
}

/// `z′/Φ′` by three-point differences, second order on nonuniform grids.
pub fn phi_derivative(z: &SampledFunction, phi: &PhiFunction) -> Vec<f64> {
    let x = z.grid();
    let y = z.values();
    let n = x.len();
    let mut d = vec![0.0; n];
    if n == 2 {
        let s = (y[1] - y[0]) / (x[1] - x[0]);
        d[0] = s;
        d[1] = s;
    } else {
        for i in 0..n {
            let k = i.clamp(1, n - 2);
            let (x0, x1, x2) = (x[k - 1], x[k], x[k + 1]);
            let (y0, y1, y2) = (y[k - 1], y[k], y[k + 1]);
            let t = x[i];
            // derivative of the quadratic through the three points, evaluated at t
            let l0 = (2.0 * t - x1 - x2) / ((x0 - x1) * (x0 - x2));
            let l1 = (2.0 * t - x0 - x2) / ((x1 - x0) * (x1 - x2));
            let l2 = (2.0 * t - x0 - x1) / ((x2 - x0) * (x2 - x1));
            d[i] = y0 * l0 + y1 * l1 + y2 * l2;
        }
    }
    for (di, &t) in d.iter_mut().zip(x) {
        *di /= phi.deriv(t);
    }
    d
}

/// Φ-Caputo derivative of order `mu ∈ (0, 1)`: `I^{1-μ;Φ}` applied to `z′/Φ′`.
///
/// Uses finite differences, so accuracy is limited by the smoothness of `z` and the mesh.
pub fn caputo_derivative(z: &SampledFunction, mu: f64, phi: &PhiFunction, m: f64) -> Result<SampledFunction> {
    if !(mu > 0.0 && mu < 1.0) {
        return domain(format!("derivative order must lie in (0, 1), got {mu}"));
    }
    check_anchor(z.grid(), m)?;
    transformed_grid(phi, z.grid())?;
    let d = SampledFunction::new(z.grid().to_vec(), phi_derivative(z, phi))?;
    frac_integral(&d, 1.0 - mu, phi, m)
}
