//! Gamma function for positive real arguments.
//!
//! Lanczos approximation with g = 7 and nine coefficients. Arguments below
//! one half are shifted up with `Γ(x) = Γ(x + 1) / x`; no reflection is needed
//! because only positive arguments are accepted.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Largest argument whose gamma value is a finite `f64`.
pub const GAMMA_MAX_ARG: f64 = 171.624_376_956_302_7;

fn lanczos_sum(x: f64) -> f64 {
    // x here is the shifted argument (x - 1 in the usual notation)
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    acc
}

fn check_arg(x: f64) -> Result<()> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::Domain(format!("gamma requires x > 0, got {x}")));
    }
    Ok(())
}

/// Γ(x) for x > 0.
pub fn gamma(x: f64) -> Result<f64> {
    check_arg(x)?;
    if x > GAMMA_MAX_ARG {
        return Err(Error::Overflow(format!("gamma({x}) exceeds f64 range")));
    }
    if x.fract() == 0.0 {
        // (x-1)! by repeated products: exact through 22!
        return Ok((2..x as u32).fold(1.0, |acc, k| acc * k as f64));
    }
    if x < 0.5 {
        return Ok(gamma_shifted(x + 1.0) / x);
    }
    Ok(gamma_shifted(x))
}

fn gamma_shifted(x: f64) -> f64 {
    let xm = x - 1.0;
    let t = xm + LANCZOS_G + 0.5;
    // split the power so that t^(x - 1/2) does not overflow before exp(-t) is applied
    let half = t.powf((xm + 0.5) / 2.0);
    (2.0 * PI).sqrt() * half * ((-t).exp() * half) * lanczos_sum(xm)
}

/// ln Γ(x) for x > 0. Finite for every positive finite argument.
pub fn ln_gamma(x: f64) -> Result<f64> {
    check_arg(x)?;
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    if x < 0.5 {
        return Ok(ln_gamma_shifted(x + 1.0) - x.ln());
    }
    Ok(ln_gamma_shifted(x))
}

fn ln_gamma_shifted(x: f64) -> f64 {
    let xm = x - 1.0;
    let t = xm + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (xm + 0.5) * t.ln() - t + lanczos_sum(xm).ln()
}

/// 1/Γ(x) for x > 0, returning 0 beyond the overflow threshold.
pub fn rgamma(x: f64) -> Result<f64> {
    check_arg(x)?;
    if x > GAMMA_MAX_ARG {
        return Ok((-ln_gamma(x)?).exp());
    }
    Ok(1.0 / gamma(x)?)
}
