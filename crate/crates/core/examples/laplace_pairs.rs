//! Generalized Laplace transforms of elementary functions.
//!
//! cargo run --release --example laplace_pairs

use fracdelay::grid::{uniform_grid, SampledFunction};
use fracdelay::laplace::{glt, glt_sampled, phi_convolve, TransformQuery};
use fracdelay::phi::PhiFunction;
use fracdelay::special::{gamma, ml1, ml2};

fn main() -> fracdelay::Result<()> {
    let id = PhiFunction::Identity;
    let log = PhiFunction::Logarithmic;
    println!("{:>4} {:>22} {:>22} {:>22}", "λ", "1", "(ln ℓ)^{1/2}", "E_{1/2}(-s^{1/2})");
    for lambda in [1.0, 2.0, 5.0] {
        let q = TransformQuery::with_auto_horizon(&id, 0.0, lambda, 1.0, 1e-14)?;
        let one = glt(|_| 1.0, &id, 0.0, &q)?.value - 1.0 / lambda;
        let q = TransformQuery::new(lambda, (40.0 / lambda + 5.0f64).exp(), 1e-12)?;
        let power = glt(|x: f64| x.ln().sqrt(), &log, 1.0, &q)?.value - gamma(1.5)? / lambda.powf(1.5);
        let q = TransformQuery::new(lambda, 40.0 / lambda, 1e-12)?;
        let ml = glt(|s: f64| ml1(0.5, -s.sqrt()).unwrap(), &id, 0.0, &q)?.value - 1.0 / (lambda.sqrt() * (lambda.sqrt() + 1.0));
        println!("{lambda:>4} {one:>22.3e} {power:>22.3e} {ml:>22.3e}");
    }

    // the kernel of the solution formula and its transform
    let (mu, kappa, rho) = (0.5, 0.45, 1.0);
    let (p, q) = (mu - kappa, mu);
    let query = TransformQuery::new(2.0, 30.0, 1e-12)?;
    let t = glt(|s: f64| s.powf(q - 1.0) * ml2(p, q, -rho * s.powf(p)).unwrap(), &id, 0.0, &query)?;
    println!("\nkernel transform at λ = 2: {:.10} vs {:.10}", t.value, 2f64.powf(p - q) / (2f64.powf(p) + rho));

    let z = SampledFunction::from_fn(uniform_grid(0.0, 1.0, 1024), f64::sqrt)?;
    let c = phi_convolve(&z, &z, &id, 0.0)?;
    println!("√s * √s at s = 1: {:.8} (π/8 = {:.8})", c.values()[1024], std::f64::consts::PI / 8.0);
    println!("transform of the sampled convolution at λ = 1: {:.8}", glt_sampled(&c, &id, 0.0, 1.0)?);
    Ok(())
}
