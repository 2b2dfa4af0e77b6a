//! Φ-fractional integral and Caputo derivative of power laws on four scales.
//!
//! cargo run --release --example frac_calculus

use fracdelay::calculus::{caputo_derivative, frac_integral};
use fracdelay::grid::{graded_grid, SampledFunction};
use fracdelay::phi::PhiFunction;
use fracdelay::special::gamma;

fn main() -> fracdelay::Result<()> {
    let (mu, kappa) = (0.4, 1.8);
    let scales = [
        (PhiFunction::Identity, 0.0, 1.0),
        (PhiFunction::Logarithmic, 1.0, std::f64::consts::E),
        (PhiFunction::Power(1.5), 0.5, 1.5),
        (PhiFunction::Exponential, 0.0, 1.0),
    ];
    let c = gamma(kappa)? / gamma(kappa + mu)?;
    println!("I^{mu} of (ΔΦ)^{:.1} against Γ(κ)/Γ(κ+μ) (ΔΦ)^{:.1}", kappa - 1.0, kappa + mu - 1.0);
    for (phi, lo, hi) in &scales {
        for nodes in [128, 256, 512] {
            // grade towards the left end where the data are singular
            let grid = graded_grid(*lo, *hi, nodes, 2.0 / (kappa - 1.0 + mu));
            let z = SampledFunction::from_fn(grid, |x| phi.delta(*lo, x).powf(kappa - 1.0))?;
            let iz = frac_integral(&z, mu, phi, *lo)?;
            let err = iz
                .grid()
                .iter()
                .zip(iz.values())
                .map(|(&x, v)| (v - c * phi.delta(*lo, x).powf(kappa + mu - 1.0)).abs())
                .fold(0.0, f64::max);
            println!("  {phi:<12} {nodes:>4} nodes  {err:.3e}");
        }
    }

    let phi = PhiFunction::Logarithmic;
    let grid = graded_grid(1.0, 3.0, 1024, 1.0);
    let z = SampledFunction::from_fn(grid, |x| x.ln().powi(2))?;
    let d = caputo_derivative(&z, 0.5, &phi, 1.0)?;
    let want = |x: f64| 2.0 / gamma(2.5).unwrap() * x.ln().powf(1.5);
    println!("\nHadamard-Caputo of (ln ℓ)^2, order 1/2");
    for k in [256, 512, 768, 1024] {
        let x = d.grid()[k];
        println!("  ℓ = {x:.3}: {:.8} vs {:.8}", d.values()[k], want(x));
    }
    Ok(())
}
