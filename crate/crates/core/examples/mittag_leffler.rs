//! A few Mittag-Leffler values, and the closed forms they reduce to.
//!
//! cargo run --example mittag_leffler

use fracdelay::special::{gamma, ml1, ml2, MittagLeffler};

fn main() -> fracdelay::Result<()> {
    println!("{:>6} {:>8} {:>24}", "p", "theta", "E_p(theta)");
    for (p, t) in [(0.5, -1.0), (0.5, -30.0), (0.9, -5.0), (1.0, 2.0), (1.5, -10.0), (2.0, -4.0)] {
        println!("{p:>6} {t:>8} {:>24.16e}", ml1(p, t)?);
    }

    println!("\nE_1(x) = e^x, E_2(-x^2) = cos x");
    for x in [0.5, 1.0, 3.0] {
        println!("  x = {x}: {:.3e} {:.3e}", (ml1(1.0, x)? - x.exp()).abs(), (ml1(2.0, -x * x)? - x.cos()).abs());
    }

    let series = MittagLeffler::default();
    for t in [-0.3, -2.0, -6.0] {
        // plain summation loses to cancellation by θ = -6; the default switches to a contour integral
        println!("E_{{1/2}}({t}): series {:.16e}, default {:.16e}", series.series(0.5, 1.0, t)?, ml1(0.5, t)?);
    }
    println!("E_{{0.6, 2.5}}(0) = 1/Γ(2.5) = {:.16} ({:.16})", ml2(0.6, 2.5, 0.0)?, 1.0 / gamma(2.5)?);

    match ml1(0.2, 1e3) {
        Ok(v) => println!("E_0.2(1000) = {v}"),
        Err(e) => println!("E_0.2(1000): {e}"),
    }
    Ok(())
}
