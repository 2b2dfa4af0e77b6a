//! One- and two-parameter Mittag-Leffler functions for real arguments.
//!
//! `E_{p,q}(θ) = Σ_k θ^k / Γ(pk + q)`.
//!
//! Three routes, chosen from the argument:
//!
//! * `θ = 0` returns `1/Γ(q)`.
//! * Short negative arguments (`-0.5 ≤ θ < 0`) and positive arguments whose
//!   series terminates within the term cap are summed directly with
//!   Neumaier-compensated accumulation. Terms are formed in log space, so
//!   neither `θ^k` nor `Γ(pk + q)` has to be representable on its own.
//! * Everything else goes through the parabolic-contour inversion in
//!   [`super::contour`], which stays accurate where the alternating series
//!   loses all digits to cancellation (small `p`, moderately large `|θ|`).
//!
//! Positive arguments with `θ^{1/p}` beyond the argument cap overflow `f64`
//! and are reported as [`Error::Overflow`].

use super::contour::ml_contour;
use super::gamma::{ln_gamma, rgamma};
use crate::error::{Error, Result};

/// Parameters of a Mittag-Leffler function. `q = None` is the one-parameter form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlParams {
    pub p: f64,
    pub q: Option<f64>,
}

impl MlParams {
    pub fn one(p: f64) -> Self {
        Self { p, q: None }
    }

    pub fn two(p: f64, q: f64) -> Self {
        Self { p, q: Some(q) }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > 0.0) || !self.p.is_finite() {
            return Err(Error::Domain(format!("Mittag-Leffler order p must be > 0, got {}", self.p)));
        }
        if let Some(q) = self.q {
            if !(q > 0.0) || !q.is_finite() {
                return Err(Error::Domain(format!("Mittag-Leffler parameter q must be > 0, got {q}")));
            }
        }
        Ok(())
    }

    pub fn eval(&self, theta: f64) -> Result<f64> {
        MittagLeffler::default().eval(self.p, self.q.unwrap_or(1.0), theta)
    }
}

/// Evaluation settings for [`ml1`]/[`ml2`]. The defaults are used by the free functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MittagLeffler {
    /// Largest admissible `θ^{1/p}` for positive arguments.
    pub arg_cap: f64,
    /// Hard cap on the number of series terms.
    pub max_terms: usize,
    /// Negative arguments with `|θ|` up to this radius are summed as a series.
    pub negative_series_radius: f64,
}

impl Default for MittagLeffler {
    fn default() -> Self {
        Self { arg_cap: 700.0, max_terms: 10_000, negative_series_radius: 0.5 }
    }
}

impl MittagLeffler {
    pub fn eval(&self, p: f64, q: f64, theta: f64) -> Result<f64> {
        MlParams::two(p, q).validate()?;
        if theta.is_nan() {
            return Err(Error::Domain("Mittag-Leffler argument is NaN".into()));
        }
        if theta == 0.0 {
            return rgamma(q);
        }
        if p == 1.0 && q == 1.0 && theta <= self.arg_cap {
            return Ok(theta.exp());
        }
        if theta < 0.0 {
            if -theta <= self.negative_series_radius {
                return self.series(p, q, theta);
            }
            return ml_contour(p, q, theta);
        }
        let transformed = theta.powf(1.0 / p);
        if transformed > self.arg_cap {
            return Err(Error::Overflow(format!(
                "E({p}, {q}; {theta}): θ^(1/p) = {transformed:e} exceeds the argument cap {}",
                self.arg_cap
            )));
        }
        if self.series_terms_estimate(p, transformed) < 0.8 * self.max_terms as f64 {
            self.series(p, q, theta)
        } else {
            ml_contour(p, q, theta)
        }
    }

    /// Rough index at which the positive series has decayed below round-off.
    fn series_terms_estimate(&self, p: f64, transformed: f64) -> f64 {
        let peak = transformed / p;
        peak + (80.0 * peak.max(1.0) / p).sqrt() + 40.0 / p
    }

    /// Direct summation. Stops once a term is below `1e-16 |sum|` while the
    /// terms are decreasing; fails with [`Error::Accuracy`] at the term cap.
    pub fn series(&self, p: f64, q: f64, theta: f64) -> Result<f64> {
        let ln_abs = theta.abs().ln();
        let negative = theta < 0.0;
        let mut acc = Neumaier::default();
        let mut prev_mag = f64::INFINITY;
        for k in 0..self.max_terms {
            let kf = k as f64;
            let mag = if k == 0 {
                rgamma(q)?
            } else {
                (kf * ln_abs - ln_gamma(p * kf + q)?).exp()
            };
            if mag.is_infinite() {
                return Err(Error::Overflow(format!("E({p}, {q}; {theta}) series term overflow")));
            }
            let term = if negative && k % 2 == 1 { -mag } else { mag };
            acc.add(term);
            let sum = acc.total();
            if k > 0 && mag < prev_mag && mag <= 1e-16 * sum.abs() {
                if !sum.is_finite() {
                    return Err(Error::Overflow(format!("E({p}, {q}; {theta}) is not representable")));
                }
                return Ok(sum);
            }
            if mag == 0.0 && k > 0 && mag < prev_mag {
                return Ok(sum);
            }
            prev_mag = mag;
        }
        Err(Error::Accuracy(format!(
            "E({p}, {q}; {theta}) series did not settle within {} terms",
            self.max_terms
        )))
    }
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Default, Clone, Copy)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// One-parameter Mittag-Leffler function `E_p(θ)`; same code path as `ml2(p, 1, θ)`.
pub fn ml1(p: f64, theta: f64) -> Result<f64> {
    ml2(p, 1.0, theta)
}

/// Two-parameter Mittag-Leffler function `E_{p,q}(θ)`.
pub fn ml2(p: f64, q: f64, theta: f64) -> Result<f64> {
    MittagLeffler::default().eval(p, q, theta)
}

/// Leading terms of the expansion of `E_{p,q}(θ)` as `θ → -∞` for `0 < p < 1`:
/// `-Σ_{k=1}^{terms} θ^{-k} / Γ(q - pk)`, skipping poles of `1/Γ`.
pub fn ml2_negative_asymptotic(p: f64, q: f64, theta: f64, terms: usize) -> f64 {
    (1..=terms)
        .map(|k| {
            let arg = q - p * k as f64;
            -theta.powi(-(k as i32)) * recip_gamma_any(arg)
        })
        .sum()
}

// 1/Γ on the whole real line, zero at the poles.
fn recip_gamma_any(x: f64) -> f64 {
    if x > 0.0 {
        return rgamma(x).unwrap_or(0.0);
    }
    if x == x.floor() {
        return 0.0;
    }
    // reflection: 1/Γ(x) = Γ(1 - x) sin(πx) / π
    let g = super::gamma::gamma(1.0 - x).unwrap_or(f64::INFINITY);
    g * (std::f64::consts::PI * x).sin() / std::f64::consts::PI
}
