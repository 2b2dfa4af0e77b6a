//! Φ-fractional integrals and derivatives through the public API.

use fracdelay::calculus::{caputo_derivative, frac_integral};
use fracdelay::grid::{graded_grid, uniform_grid, SampledFunction};
use fracdelay::phi::{validate_phi, PhiFunction};
use fracdelay::special::gamma;
use proptest::prelude::*;

fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn semigroup_on_the_log_scale() {
    let phi = PhiFunction::Logarithmic;
    let (a, b) = (0.3, 0.45);
    let grid = graded_grid(1.0, 3.0, 1023, 1.0 / a);
    let z = SampledFunction::from_fn(grid.clone(), |l| 1.0 + l.ln()).unwrap();
    let twice = frac_integral(&frac_integral(&z, b, &phi, 1.0).unwrap(), a, &phi, 1.0).unwrap();
    let once = frac_integral(&z, a + b, &phi, 1.0).unwrap();
    let err = sup_diff(twice.values(), once.values());
    assert!(err < 1e-5, "{err:e}");
}

#[test]
fn caputo_of_power_on_exponential_scale() {
    let phi = PhiFunction::Exponential;
    let (mu, kappa) = (0.6, 2.5);
    let z = SampledFunction::from_fn(uniform_grid(0.0, 1.0, 1024), |l| phi.delta(0.0, l).powf(kappa)).unwrap();
    let d = caputo_derivative(&z, mu, &phi, 0.0).unwrap();
    let c = gamma(kappa + 1.0).unwrap() / gamma(kappa + 1.0 - mu).unwrap();
    let want: Vec<f64> = z.grid().iter().map(|&l| c * phi.delta(0.0, l).powf(kappa - mu)).collect();
    let err = sup_diff(d.values(), &want);
    assert!(err < 1e-3, "{err:e}");
}

#[test]
fn integral_reduces_to_classical_at_order_one() {
    let z = SampledFunction::from_fn(uniform_grid(0.0, 2.0, 400), |l| l.cos()).unwrap();
    let iz = frac_integral(&z, 1.0, &PhiFunction::Identity, 0.0).unwrap();
    let err = iz.grid().iter().zip(iz.values()).map(|(&l, v)| (v - l.sin()).abs()).fold(0.0, f64::max);
    assert!(err < 1e-5, "{err:e}");
}

#[test]
fn non_monotone_scale_is_reported() {
    let v = validate_phi(&PhiFunction::Power(2.0), -1.0, 1.0, 101).unwrap();
    assert!(!v.is_valid());
    assert!(validate_phi(&PhiFunction::Logarithmic, 0.5, 4.0, 101).unwrap().is_valid());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn integral_is_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, mu in 0.05f64..1.0) {
        let grid = uniform_grid(0.5, 2.0, 96);
        let phi = PhiFunction::Power(1.5);
        let f = SampledFunction::from_fn(grid.clone(), |l| l.sin()).unwrap();
        let g = SampledFunction::from_fn(grid.clone(), |l| l * l).unwrap();
        let h = SampledFunction::from_fn(grid, |l| a * l.sin() + b * l * l).unwrap();
        let (i_f, i_g, i_h) = (
            frac_integral(&f, mu, &phi, 0.5).unwrap(),
            frac_integral(&g, mu, &phi, 0.5).unwrap(),
            frac_integral(&h, mu, &phi, 0.5).unwrap(),
        );
        for k in 0..i_h.len() {
            let want = a * i_f.values()[k] + b * i_g.values()[k];
            prop_assert!((i_h.values()[k] - want).abs() <= 1e-12 * (1.0 + want.abs()));
        }
    }

    #[test]
    fn integral_of_nonnegative_is_nonnegative(mu in 0.05f64..1.0, w in 0.5f64..6.0) {
        let z = SampledFunction::from_fn(uniform_grid(0.0, 1.0, 64), |l| (w * l).sin().abs()).unwrap();
        let iz = frac_integral(&z, mu, &PhiFunction::Identity, 0.0).unwrap();
        prop_assert!(iz.values().iter().all(|&v| v >= 0.0));
    }
}
