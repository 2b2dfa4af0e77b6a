//! A user-defined scale function: Φ(ℓ) = ℓ + ℓ^3/3.
//!
//! cargo run --release --example custom_scale

use fracdelay::calculus::frac_integral;
use fracdelay::grid::{uniform_grid, SampledFunction};
use fracdelay::phi::{validate_phi, PhiFunction, ScaleFunction};
use fracdelay::solver::{ProblemSpec, Solver, SolverConfig};
use fracdelay::special::gamma;

#[derive(Debug)]
struct Cubic;

impl ScaleFunction for Cubic {
    fn eval(&self, ell: f64) -> f64 {
        ell + ell.powi(3) / 3.0
    }
    fn deriv(&self, ell: f64) -> f64 {
        1.0 + ell * ell
    }
}

fn main() -> fracdelay::Result<()> {
    let phi = PhiFunction::custom(Cubic);
    println!("valid on [-2, 2]: {}", validate_phi(&phi, -2.0, 2.0, 400)?.is_valid());

    let mu = 0.7;
    let z = SampledFunction::from_fn(uniform_grid(0.0, 1.5, 600), |_| 1.0)?;
    let iz = frac_integral(&z, mu, &phi, 0.0)?;
    let end = iz.values().last().unwrap();
    println!("I^{mu} 1 at 1.5: {end:.10} vs {:.10}", phi.delta(0.0, 1.5).powf(mu) / gamma(mu + 1.0)?);

    let spec = ProblemSpec::new(0.9, 0.4, 1.0, 0.5, 0.5, 1.5)
        .with_phi(phi)
        .with_rhs(|l, u, v| (l - u).tanh() + 0.5 * v.cos(), 1.0)
        .with_history(|l| l * l);
    let out = Solver::new(spec, SolverConfig::default())?.picard(None)?;
    println!("z(1.5) = {:.8} after {} iterations", out.trajectory.values().last().unwrap(), out.iterations);
    Ok(())
}
