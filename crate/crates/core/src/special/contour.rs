//! Mittag-Leffler evaluation by inverting its Laplace transform along an
//! optimal parabolic contour.
//!
//! `E_{p,q}(z) = (1/2πi) ∫_C e^s s^{p-q} / (s^p - z) ds`, integrated with the
//! trapezoidal rule on `s(u) = μ (1 + iu)^2`. Poles `s^p = z` lying to the right
//! of the chosen parabola contribute residues `s^{1-q} e^s / p`. The parabola
//! parameters are picked per region between consecutive singularities so that
//! the trapezoidal error and the round-off amplification both stay below the
//! target, following Garrappa's error analysis.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LOG_MACHINE_EPS: f64 = -36.043_653_389_117_154;
const TARGET_LOG_EPS: f64 = -34.538_776_394_910_684; // ln(1e-15)
const MAX_NODES: f64 = 200.0;

#[derive(Debug, Clone, Copy)]
struct Parabola {
    mu: f64,
    h: f64,
    n: f64,
}

impl Parabola {
    const NONE: Parabola = Parabola { mu: 0.0, h: 0.0, n: f64::INFINITY };
}

/// Evaluates `E_{p,q}(z)` for real `z` by contour integration.
pub(crate) fn ml_contour(p: f64, q: f64, z: f64) -> Result<f64> {
    let arg = if z < 0.0 { PI } else { 0.0 };
    let modulus = z.abs().powf(1.0 / p);

    // poles of s^p = z on the principal sheet
    let kmin = (-p / 2.0 - arg / (2.0 * PI)).ceil() as i64;
    let kmax = (p / 2.0 - arg / (2.0 * PI)).floor() as i64;
    let mut poles: Vec<(Complex64, f64)> = (kmin..=kmax)
        .map(|k| {
            let s = Complex64::from_polar(modulus, (arg + 2.0 * PI * k as f64) / p);
            (s, (s.re + s.norm()) / 2.0)
        })
        .filter(|&(_, phi)| phi > 1e-15)
        .collect();
    poles.sort_by(|a, b| a.1.total_cmp(&b.1));

    // singular points: the branch point at the origin followed by the poles
    let mut sing: Vec<Complex64> = vec![Complex64::new(0.0, 0.0)];
    let mut phi: Vec<f64> = vec![0.0];
    for (s, ph) in &poles {
        sing.push(*s);
        phi.push(*ph);
    }
    let regions = sing.len();
    let mut strength_left = vec![1.0; regions];
    strength_left[0] = (-2.0 * (p - q + 1.0)).max(0.0);
    let mut strength_right = vec![1.0; regions];
    phi.push(f64::INFINITY);
    strength_right[regions - 1] = f64::INFINITY;

    let admissible: Vec<usize> = (0..regions)
        .filter(|&j| phi[j] < TARGET_LOG_EPS - LOG_MACHINE_EPS && phi[j] < phi[j + 1])
        .collect();
    if admissible.is_empty() {
        return Err(Error::Accuracy(format!(
            "no admissible contour for E({p}, {q}; {z})"
        )));
    }

    let mut log_eps = TARGET_LOG_EPS;
    let (best_region, par) = loop {
        let mut best: Option<(usize, Parabola)> = None;
        for &j in &admissible {
            let par = if j + 1 < regions {
                bounded_region(phi[j], phi[j + 1], strength_left[j], strength_right[j], log_eps)
            } else {
                unbounded_region(phi[j], strength_left[j], log_eps)
            };
            if best.is_none_or(|(_, b)| par.n < b.n) {
                best = Some((j, par));
            }
        }
        let (j, par) = best.expect("admissible is non-empty");
        if par.n <= MAX_NODES {
            break (j, par);
        }
        log_eps += std::f64::consts::LN_10;
        if log_eps > -2.0 {
            return Err(Error::Accuracy(format!(
                "contour quadrature for E({p}, {q}; {z}) needs more than {MAX_NODES} nodes"
            )));
        }
    };

    let integral = trapezoid(p, q, z, par);
    let residues: f64 = sing[best_region + 1..]
        .iter()
        .map(|&s| (s.powf(1.0 - q) * s.exp() / p).re)
        .sum();
    let value = integral + residues;
    if !value.is_finite() {
        return Err(Error::Overflow(format!("E({p}, {q}; {z}) is not representable")));
    }
    Ok(value)
}

fn trapezoid(p: f64, q: f64, z: f64, par: Parabola) -> f64 {
    let n = par.n as i64;
    let term = |u: f64| -> Complex64 {
        let iu1 = Complex64::new(1.0, u);
        let s = par.mu * iu1 * iu1;
        let ds = Complex64::new(-2.0 * par.mu * u, 2.0 * par.mu);
        s.exp() * s.powf(p - q) / (s.powf(p) - z) * ds
    };
    // for real z the integrand at -u is minus the conjugate of the one at u,
    // so the sum is purely imaginary
    let mut sum_im = term(0.0).im;
    for k in 1..=n {
        sum_im += 2.0 * term(par.h * k as f64).im;
    }
    par.h * sum_im / (2.0 * PI)
}

fn bounded_region(phi_j: f64, phi_j1: f64, pj: f64, qj: f64, mut log_eps: f64) -> Parabola {
    const FAC: f64 = 1.01;
    let f_max = (log_eps - LOG_MACHINE_EPS).exp();
    let sq_phi_j = phi_j.sqrt();
    let threshold = 2.0 * (log_eps - LOG_MACHINE_EPS).sqrt();
    let sq_phi_j1 = phi_j1.sqrt().min(threshold - sq_phi_j);

    let (sq_bar_j, sq_bar_j1, f_bar) = if pj < 1e-14 && qj < 1e-14 {
        (sq_phi_j, sq_phi_j1, 1.0)
    } else if pj < 1e-14 {
        let f_min = if sq_phi_j > 0.0 {
            FAC * (sq_phi_j / (sq_phi_j1 - sq_phi_j)).powf(qj)
        } else {
            FAC
        };
        if f_min >= f_max {
            return Parabola::NONE;
        }
        let f_bar = f_min + f_min / f_max * (f_max - f_min);
        let fq = f_bar.powf(-1.0 / qj);
        (sq_phi_j, (2.0 * sq_phi_j1 - fq * sq_phi_j) / (2.0 + fq), f_bar)
    } else if qj < 1e-14 {
        let f_min = FAC * (sq_phi_j1 / (sq_phi_j1 - sq_phi_j)).powf(pj);
        if f_min >= f_max {
            return Parabola::NONE;
        }
        let f_bar = f_min + f_min / f_max * (f_max - f_min);
        let fp = f_bar.powf(-1.0 / pj);
        ((2.0 * sq_phi_j + fp * sq_phi_j1) / (2.0 - fp), sq_phi_j1, f_bar)
    } else {
        let mut f_min = FAC * (sq_phi_j + sq_phi_j1) / (sq_phi_j1 - sq_phi_j).powf(pj.max(qj));
        if f_min >= f_max {
            return Parabola::NONE;
        }
        f_min = f_min.max(1.5);
        let f_bar = f_min + f_min / f_max * (f_max - f_min);
        let fp = f_bar.powf(-1.0 / pj);
        let fq = f_bar.powf(-1.0 / qj);
        let w = -phi_j1 / log_eps;
        let den = 2.0 + w - (1.0 + w) * fp + fq;
        let a = ((2.0 + w + fq) * sq_phi_j + fp * sq_phi_j1) / den;
        let b = (-(1.0 + w) * fq * sq_phi_j + (2.0 + w - (1.0 + w) * fp) * sq_phi_j1) / den;
        (a, b, f_bar)
    };

    log_eps -= f_bar.ln();
    let w = -sq_bar_j1 * sq_bar_j1 / log_eps;
    let mu = (((1.0 + w) * sq_bar_j + sq_bar_j1) / (2.0 + w)).powi(2);
    let h = -2.0 * PI / log_eps * (sq_bar_j1 - sq_bar_j) / ((1.0 + w) * sq_bar_j + sq_bar_j1);
    let n = ((1.0 - log_eps / mu).sqrt() / h).ceil();
    if !(mu > 0.0 && h > 0.0 && n.is_finite()) {
        return Parabola::NONE;
    }
    Parabola { mu, h, n }
}

fn unbounded_region(phi_j: f64, pj: f64, log_eps: f64) -> Parabola {
    const F_MIN: f64 = 1.0;
    const F_MAX: f64 = 10.0;
    const F_TAR: f64 = 5.0;
    let sq_phi_j = phi_j.sqrt();
    let mut phi_bar = if phi_j > 0.0 { phi_j * 1.01 } else { 0.01 };
    let mut sq_phi_bar = phi_bar.sqrt();

    let mut n;
    let mut a;
    let mut sq_mu;
    let mut guard = 0;
    loop {
        let log_eps_phi = log_eps / phi_bar;
        n = (phi_bar / PI * (1.0 - 1.5 * log_eps_phi + (1.0 - 2.0 * log_eps_phi).sqrt())).ceil();
        a = PI * n / phi_bar;
        sq_mu = sq_phi_bar * (4.0 - a).abs() / (7.0 - (1.0 + 12.0 * a).sqrt()).abs();
        let f_bar = ((sq_phi_bar - sq_phi_j) / sq_mu).powf(-pj);
        guard += 1;
        if pj < 1e-14 || (F_MIN < f_bar && f_bar < F_MAX) || guard > 100 {
            break;
        }
        sq_phi_bar = F_TAR.powf(-1.0 / pj) * sq_mu + sq_phi_j;
        phi_bar = sq_phi_bar * sq_phi_bar;
    }
    let mut mu = sq_mu * sq_mu;
    let mut h = (-3.0 * a - 2.0 + 2.0 * (1.0 + 12.0 * a).sqrt()) / (4.0 - a) / n;

    // keep the round-off amplification e^mu * eps below the target
    let threshold = log_eps - LOG_MACHINE_EPS;
    if mu > threshold {
        let shift = if pj.abs() < 1e-14 { 0.0 } else { F_TAR.powf(-1.0 / pj) * mu.sqrt() };
        let phi_bar = (shift + sq_phi_j).powi(2);
        if phi_bar < threshold {
            let w = (LOG_MACHINE_EPS / (LOG_MACHINE_EPS - log_eps)).sqrt();
            let u = (-phi_bar / LOG_MACHINE_EPS).sqrt();
            mu = threshold;
            n = (w * log_eps / 2.0 / PI / (u * w - 1.0)).ceil();
            h = w / n;
        } else {
            return Parabola::NONE;
        }
    }
    Parabola { mu, h, n }
}
