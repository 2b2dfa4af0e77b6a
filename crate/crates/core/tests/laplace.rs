//! Generalized Laplace transform pairs and the convolution theorem.

use std::f64::consts::PI;

use fracdelay::grid::{uniform_grid, SampledFunction};
use fracdelay::laplace::{glt, glt_sampled, phi_convolve, TransformQuery};
use fracdelay::phi::PhiFunction;
use fracdelay::special::{gamma, ml1};

#[test]
fn transform_of_one() {
    let id = PhiFunction::Identity;
    let q = TransformQuery::with_auto_horizon(&id, 0.0, 2.0, 1.0, 1e-14).unwrap();
    let t = glt(|_| 1.0, &id, 0.0, &q).unwrap();
    assert!((t.value - 0.5).abs() < 1e-8, "{}", t.value);
}

#[test]
fn power_pair_on_log_scale() {
    let phi = PhiFunction::Logarithmic;
    let q = TransformQuery::new(1.0, 45f64.exp(), 1e-12).unwrap();
    let t = glt(|x: f64| x.ln().sqrt(), &phi, 1.0, &q).unwrap();
    assert!((t.value - gamma(1.5).unwrap()).abs() < 1e-6, "{}", t.value);
}

#[test]
fn mittag_leffler_pair() {
    let id = PhiFunction::Identity;
    let q = TransformQuery::new(2.0, 20.0, 1e-12).unwrap();
    let t = glt(|x: f64| ml1(0.5, -x.sqrt()).unwrap(), &id, 0.0, &q).unwrap();
    assert!((t.value - 0.292_893_2).abs() < 1e-5, "{}", t.value);
}

#[test]
fn square_root_self_convolution() {
    let grid = uniform_grid(0.0, 1.0, 1024);
    let z = SampledFunction::from_fn(grid, f64::sqrt).unwrap();
    let c = phi_convolve(&z, &z, &PhiFunction::Identity, 0.0).unwrap();
    for (l, v) in c.grid().iter().zip(c.values()) {
        assert!((v - PI / 8.0 * l * l).abs() < 1e-4, "{l}: {v}");
    }
}

#[test]
fn convolution_on_power_scale() {
    let phi = PhiFunction::Power(2.0);
    let (m, end) = (1.0, 5f64.sqrt());
    let s = |x: f64| phi.eval(x) - 1.0;
    let grid = uniform_grid(m, end, 2000);
    let z1 = SampledFunction::from_fn(grid.clone(), |x| (-s(x)).exp()).unwrap();
    let z2 = SampledFunction::from_fn(grid, |x| s(x) * (-2.0 * s(x)).exp()).unwrap();
    let conv = phi_convolve(&z1, &z2, &phi, m).unwrap();
    for (&x, v) in conv.grid().iter().zip(conv.values()) {
        let want = (-s(x)).exp() * (1.0 - (1.0 + s(x)) * (-s(x)).exp());
        assert!((v - want).abs() < 1e-5, "{x}: {v} vs {want}");
    }
    // transform of the truncated convolution against the same integral done directly
    let direct = TransformQuery::new(2.0, end, 1e-12).unwrap();
    let want = glt(|x| (-s(x)).exp() * (1.0 - (1.0 + s(x)) * (-s(x)).exp()), &phi, m, &direct).unwrap().value;
    assert!((glt_sampled(&conv, &phi, m, 2.0).unwrap() - want).abs() < 1e-5);
}
