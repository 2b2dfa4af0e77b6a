//! Generalized Laplace transform and Φ-convolution, used to check transform identities.

use crate::calculus::{check_anchor, transformed_grid};
use crate::error::{domain, Error, Result};
use crate::grid::SampledFunction;
use crate::phi::PhiFunction;
use crate::quadrature::integrate;

const MAX_SEGMENTS: usize = 4000;

/// Parameters of a truncated transform evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformQuery {
    pub lambda: f64,
    /// Truncation point `T`; the integral runs over `[m, T]`.
    pub horizon: f64,
    /// Requested absolute quadrature tolerance.
    pub tol: f64,
}

impl TransformQuery {
    pub fn new(lambda: f64, horizon: f64, tol: f64) -> Result<Self> {
        let q = Self { lambda, horizon, tol };
        q.validate_basic()?;
        Ok(q)
    }

    fn validate_basic(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return domain(format!("transform variable must be positive, got {}", self.lambda));
        }
        if !(self.tol > 0.0) {
            return domain(format!("transform tolerance must be positive, got {}", self.tol));
        }
        if !self.horizon.is_finite() {
            return domain("transform horizon must be finite");
        }
        Ok(())
    }

    /// Query whose horizon makes `e^{-λ ΔΦ(T)} · sup|z|` smaller than `tol / 10`.
    pub fn with_auto_horizon(phi: &PhiFunction, m: f64, lambda: f64, sup: f64, tol: f64) -> Result<Self> {
        Self::new(lambda, m, tol)?;
        let span = ((10.0 * sup.max(f64::MIN_POSITIVE) / tol).ln() / lambda).max(0.0);
        let horizon = phi.inverse(phi.eval(m) + span)?;
        Self::new(lambda, horizon, tol)
    }
}

/// Declared bound `|z(ℓ)| ≤ scale · e^{rate (Φ(ℓ) - Φ(m))}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    pub scale: f64,
    pub rate: f64,
}

/// A truncated transform value with its error budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transform {
    pub value: f64,
    /// Quadrature error estimate on `[m, T]`.
    pub quadrature_error: f64,
    /// Bound on the neglected tail over `[T, ∞)`, when an envelope was supplied.
    pub tail_bound: Option<f64>,
}

/// `∫_m^T e^{-λ(Φ(ℓ)-Φ(m))} z(ℓ) Φ′(ℓ) dℓ`, integrated in `u = Φ(ℓ)`.
pub fn glt(z: impl Fn(f64) -> f64, phi: &PhiFunction, m: f64, query: &TransformQuery) -> Result<Transform> {
    glt_inner(z, phi, m, query, None)
}

/// As [`glt`], also bounding the tail beyond the horizon from a declared envelope.
pub fn glt_with_envelope(
    z: impl Fn(f64) -> f64,
    phi: &PhiFunction,
    m: f64,
    query: &TransformQuery,
    envelope: Envelope,
) -> Result<Transform> {
    glt_inner(z, phi, m, query, Some(envelope))
}

fn glt_inner(
    z: impl Fn(f64) -> f64,
    phi: &PhiFunction,
    m: f64,
    query: &TransformQuery,
    envelope: Option<Envelope>,
) -> Result<Transform> {
    query.validate_basic()?;
    if !(query.horizon > m) {
        return domain(format!("horizon {} must exceed the lower terminal {m}", query.horizon));
    }
    let u0 = phi.eval(m);
    let ut = phi.eval(query.horizon);
    if !(u0.is_finite() && ut.is_finite() && ut > u0) {
        return domain(format!("scale function {phi} is not usable on [{m}, {}]", query.horizon));
    }
    // Fail early if the inverse is unavailable.
    phi.inverse(u0)?;
    let lambda = query.lambda;
    let mut bad: Option<Error> = None;
    let integrand = |u: f64| -> f64 {
        match phi.inverse(u) {
            Ok(ell) => (-lambda * (u - u0)).exp() * z(ell),
            Err(e) => {
                bad.get_or_insert(e);
                0.0
            }
        }
    };
    let r = integrate(integrand, u0, ut, query.tol, MAX_SEGMENTS)?;
    if let Some(e) = bad {
        return Err(e);
    }
    if !r.value.is_finite() {
        return domain("transform integrand is not finite on the horizon");
    }
    let tail_bound = envelope.and_then(|env| {
        let excess = lambda - env.rate;
        (excess > 0.0).then(|| env.scale.abs() * (-excess * (ut - u0)).exp() / excess)
    });
    Ok(Transform { value: r.value, quadrature_error: r.error, tail_bound })
}

/// Transform of a sampled function, taken as piecewise linear in `u = Φ(ℓ)` and zero
/// beyond the last node. Exact for that interpolant.
pub fn glt_sampled(z: &SampledFunction, phi: &PhiFunction, m: f64, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return domain(format!("transform variable must be positive, got {lambda}"));
    }
    check_anchor(z.grid(), m)?;
    let u = transformed_grid(phi, z.grid())?;
    let y = z.values();
    let mut acc = 0.0;
    for k in 0..u.len() - 1 {
        let s0 = u[k] - u[0];
        let h = u[k + 1] - u[k];
        let x = lambda * h;
        let e0 = (-lambda * s0).exp();
        // ∫_0^h e^{-λ(s0+t)} dt and ∫_0^h t e^{-λ(s0+t)} dt
        let m0 = e0 * -(-x).exp_m1() / lambda;
        let m1 = e0 * (-(-x).exp_m1() - x * (-x).exp()) / (lambda * lambda);
        let slope = (y[k + 1] - y[k]) / h;
        acc += y[k] * m0 + slope * m1;
    }
    Ok(acc)
}

/// Φ-convolution `∫_m^ℓ Φ′(η) z1(η) z2(Φ^{-1}(Φ(ℓ) + Φ(m) - Φ(η))) dη` at every node.
///
/// Both factors are piecewise linear in `u`; each node's integral is split at the nodes
/// and at their reflections, and Simpson's rule is exact on every piece.
pub fn phi_convolve(z1: &SampledFunction, z2: &SampledFunction, phi: &PhiFunction, m: f64) -> Result<SampledFunction> {
    if z1.grid() != z2.grid() {
        return domain("convolution factors must share one grid");
    }
    check_anchor(z1.grid(), m)?;
    let u = transformed_grid(phi, z1.grid())?;
    let (a, b) = (z1.values(), z2.values());
    let n = u.len();
    let mut out = vec![0.0; n];
    for (i, o) in out.iter_mut().enumerate().skip(1) {
        *o = convolve_node(&u, a, b, i)?;
    }
    SampledFunction::new(z1.grid().to_vec(), out)
}

fn lerp(u: &[f64], y: &[f64], k: usize, x: f64) -> f64 {
    let t = (x - u[k]) / (u[k + 1] - u[k]);
    y[k] + t * (y[k + 1] - y[k])
}

fn convolve_node(u: &[f64], a: &[f64], b: &[f64], i: usize) -> Result<f64> {
    let (lo, hi) = (u[0], u[i]);
    let shift = hi + lo;
    // Reflected breakpoints r_j = shift - u_{i-j}, ascending in j.
    let refl = |j: usize| shift - u[i - j];
    let slack = 1e-12 * (hi - lo).abs().max(hi.abs()).max(1.0);
    if (refl(i) - hi).abs() > slack || (refl(0) - lo).abs() > slack {
        return domain(format!("reflected argument leaves the sampled range at node {i}"));
    }
    let mut total = 0.0;
    let (mut ja, mut jb) = (0usize, 0usize);
    let mut x0 = lo;
    while ja < i && jb < i {
        let next_a = u[ja + 1];
        let next_b = if jb + 1 == i { hi } else { refl(jb + 1) };
        let x1 = next_a.min(next_b);
        if x1 > x0 {
            let xm = 0.5 * (x0 + x1);
            // x in a-cell ja; shift - x in b-cell i - jb - 1
            let kb = i - jb - 1;
            let f = |x: f64| lerp(u, a, ja, x) * lerp(u, b, kb, (shift - x).clamp(u[kb], u[kb + 1]));
            total += (x1 - x0) / 6.0 * (f(x0) + 4.0 * f(xm) + f(x1));
            x0 = x1;
        }
        if next_a <= x1 {
            ja += 1;
        }
        if next_b <= x1 {
            jb += 1;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::uniform_grid;
    use crate::special::{gamma, ml2};

    #[test]
    fn transform_of_one() {
        let phi = PhiFunction::Identity;
        let q = TransformQuery::with_auto_horizon(&phi, 0.0, 2.0, 1.0, 1e-14).unwrap();
        assert!((-2.0 * q.horizon).exp() < 1e-14);
        let t = glt(|_| 1.0, &phi, 0.0, &q).unwrap();
        assert!((t.value - 0.5).abs() < 1e-8);
    }

    #[test]
    fn power_pair_on_log_scale() {
        let phi = PhiFunction::Logarithmic;
        let q = TransformQuery::new(1.0, 60f64.exp(), 1e-11).unwrap();
        let t = glt(|x: f64| x.ln().sqrt(), &phi, 1.0, &q).unwrap();
        assert!((t.value - gamma(1.5).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn mittag_leffler_pair() {
        let phi = PhiFunction::Identity;
        let q = TransformQuery::new(2.0, 30.0, 1e-11).unwrap();
        let t = glt(|x: f64| ml2(0.5, 1.0, -x.sqrt()).unwrap(), &phi, 0.0, &q).unwrap();
        let exact = 2f64.powf(-0.5) / (2f64.sqrt() + 1.0);
        assert!((t.value - exact).abs() < 1e-5);
    }

    #[test]
    fn tail_bound_from_envelope() {
        let phi = PhiFunction::Identity;
        let q = TransformQuery::new(3.0, 5.0, 1e-10).unwrap();
        let t = glt_with_envelope(|x: f64| x.exp(), &phi, 0.0, &q, Envelope { scale: 1.0, rate: 1.0 }).unwrap();
        let tail = 0.5 * (-10f64).exp();
        assert!((t.value + tail - 0.5).abs() < 1e-9);
        assert!(t.tail_bound.unwrap() >= tail * (1.0 - 1e-12));
    }

    #[test]
    fn invalid_queries() {
        assert!(TransformQuery::new(0.0, 1.0, 1e-8).is_err());
        assert!(TransformQuery::new(1.0, 1.0, 0.0).is_err());
        let q = TransformQuery::new(1.0, 0.5, 1e-8).unwrap();
        assert!(glt(|_| 1.0, &PhiFunction::Identity, 1.0, &q).is_err());
    }

    #[test]
    fn sampled_transform_exact_for_lines() {
        let grid = uniform_grid(0.0, 4.0, 37);
        let z = SampledFunction::from_fn(grid, |x| 1.0 + 2.0 * x).unwrap();
        let got = glt_sampled(&z, &PhiFunction::Identity, 0.0, 1.5).unwrap();
        let q = TransformQuery::new(1.5, 4.0, 1e-13).unwrap();
        let want = glt(|x| 1.0 + 2.0 * x, &PhiFunction::Identity, 0.0, &q).unwrap().value;
        assert!((got - want).abs() < 1e-12);
    }

    #[test]
    fn convolution_basics() {
        let grid = uniform_grid(0.0, 1.0, 100);
        let one = SampledFunction::from_fn(grid.clone(), |_| 1.0).unwrap();
        let zero = SampledFunction::from_fn(grid.clone(), |_| 0.0).unwrap();
        let phi = PhiFunction::Identity;
        let c = phi_convolve(&one, &one, &phi, 0.0).unwrap();
        for (x, v) in grid.iter().zip(c.values()) {
            assert!((v - x).abs() < 1e-10);
        }
        let c = phi_convolve(&zero, &one, &phi, 0.0).unwrap();
        assert!(c.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn convolution_of_square_roots() {
        let grid = uniform_grid(0.0, 1.0, 1023);
        let z = SampledFunction::from_fn(grid.clone(), f64::sqrt).unwrap();
        let c = phi_convolve(&z, &z, &PhiFunction::Identity, 0.0).unwrap();
        let k = std::f64::consts::PI / 8.0;
        for (x, v) in grid.iter().zip(c.values()) {
            assert!((v - k * x * x).abs() < 1e-4);
        }
    }

    #[test]
    fn convolution_is_symmetric_on_exponential_scale() {
        let grid = uniform_grid(0.0, 1.0, 80);
        let phi = PhiFunction::Exponential;
        let z1 = SampledFunction::from_fn(grid.clone(), |x| x.cos()).unwrap();
        let z2 = SampledFunction::from_fn(grid.clone(), |x| 1.0 + x * x).unwrap();
        let a = phi_convolve(&z1, &z2, &phi, 0.0).unwrap();
        let b = phi_convolve(&z2, &z1, &phi, 0.0).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn convolution_requires_shared_grid() {
        let z1 = SampledFunction::from_fn(uniform_grid(0.0, 1.0, 10), |_| 1.0).unwrap();
        let z2 = SampledFunction::from_fn(uniform_grid(0.0, 1.0, 11), |_| 1.0).unwrap();
        assert!(phi_convolve(&z1, &z2, &PhiFunction::Identity, 0.0).is_err());
    }
}
