use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Result};
use crate::phi::PhiFunction;
use crate::special::ml1;

/// Shape `g` of a perturbation `Θ = ε M_μ((ΔΦ)^μ) g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Waveform {
    /// `g ≡ 1`: the perturbation sits exactly on its bound.
    Saturating,
    /// A seeded mixture of at most five sinusoids in `Φ(ℓ)` with `Σ|a_k| ≤ 1`.
    Seeded(u64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Tone {
    amplitude: f64,
    frequency: f64,
    phase: f64,
}

/// An admissible disturbance with `|Θ(ℓ)| ≤ ε M_μ((Φ(ℓ) - Φ(m))^μ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Perturbation {
    pub epsilon: f64,
    pub mu: f64,
    pub phi: PhiFunction,
    pub m: f64,
    pub waveform: Waveform,
    tones: Vec<Tone>,
}

impl Perturbation {
    /// The bound `M_μ((Φ(ℓ) - Φ(m))^μ)` without the factor `ε`.
    pub fn envelope(&self, ell: f64) -> Result<f64> {
        envelope(self.mu, &self.phi, self.m, ell)
    }

    /// `g(ℓ)`, with `|g| ≤ 1`.
    pub fn shape(&self, ell: f64) -> f64 {
        if self.tones.is_empty() {
            return 1.0;
        }
        let s = self.phi.delta(self.m, ell);
        self.tones.iter().map(|t| t.amplitude * (t.frequency * s + t.phase).sin()).sum()
    }

    pub fn eval(&self, ell: f64) -> Result<f64> {
        Ok(self.epsilon * self.envelope(ell)? * self.shape(ell))
    }

    pub fn sample(&self, grid: &[f64]) -> Result<Vec<f64>> {
        grid.iter().map(|&x| self.eval(x)).collect()
    }
}

pub(crate) fn envelope(mu: f64, phi: &PhiFunction, m: f64, ell: f64) -> Result<f64> {
    ml1(mu, phi.delta(m, ell).powf(mu))
}

/// Builds `Θ = ε M_μ((ΔΦ)^μ) g` for the given waveform. Same seed, same `Θ`.
pub fn admissible_perturbation(
    epsilon: f64,
    mu: f64,
    phi: &PhiFunction,
    m: f64,
    waveform: Waveform,
) -> Result<Perturbation> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return domain(format!("perturbation amplitude must be positive, got {epsilon}"));
    }
    if !(mu > 0.0 && mu <= 1.0) {
        return domain(format!("order must lie in (0, 1], got {mu}"));
    }
    let tones = match waveform {
        Waveform::Saturating => Vec::new(),
        Waveform::Seeded(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let count = rng.gen_range(1..=5);
            let mut tones: Vec<Tone> = (0..count)
                .map(|_| Tone {
                    amplitude: rng.gen_range(-1.0..1.0),
                    frequency: rng.gen_range(0.5..12.0),
                    phase: rng.gen_range(0.0..TAU),
                })
                .collect();
            let total: f64 = tones.iter().map(|t| t.amplitude.abs()).sum();
            let target = rng.gen_range(0.5..=1.0);
            for t in &mut tones {
                t.amplitude *= target / total.max(f64::MIN_POSITIVE);
            }
            tones
        }
    };
    Ok(Perturbation { epsilon, mu, phi: phi.clone(), m, waveform, tones })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::uniform_grid;

    #[test]
    fn bound_holds_for_many_seeds() {
        let grid = uniform_grid(1.0, 2.0, 200);
        for seed in 0..50 {
            let p = admissible_perturbation(0.01, 0.5, &PhiFunction::Identity, 1.0, Waveform::Seeded(seed)).unwrap();
            for &x in &grid {
                assert!(p.eval(x).unwrap().abs() <= 0.01 * p.envelope(x).unwrap() * (1.0 + 1e-15));
            }
        }
    }

    #[test]
    fn saturating_is_on_the_bound() {
        let p = admissible_perturbation(0.5, 0.7, &PhiFunction::Exponential, 0.0, Waveform::Saturating).unwrap();
        for &x in &[0.0, 0.3, 1.0] {
            assert_eq!(p.eval(x).unwrap(), 0.5 * p.envelope(x).unwrap());
        }
    }

    #[test]
    fn seeded_is_deterministic() {
        let grid = uniform_grid(1.0, 2.0, 64);
        let a = admissible_perturbation(1e-2, 0.5, &PhiFunction::Identity, 1.0, Waveform::Seeded(42)).unwrap();
        let b = admissible_perturbation(1e-2, 0.5, &PhiFunction::Identity, 1.0, Waveform::Seeded(42)).unwrap();
        assert_eq!(a.sample(&grid).unwrap(), b.sample(&grid).unwrap());
        let c = admissible_perturbation(1e-2, 0.5, &PhiFunction::Identity, 1.0, Waveform::Seeded(43)).unwrap();
        assert_ne!(a.sample(&grid).unwrap(), c.sample(&grid).unwrap());
    }

    #[test]
    fn rejects_zero_amplitude() {
        assert!(admissible_perturbation(0.0, 0.5, &PhiFunction::Identity, 1.0, Waveform::Saturating).is_err());
    }

    #[test]
    fn tiny_amplitude_is_tiny() {
        let p = admissible_perturbation(1e-9, 0.5, &PhiFunction::Identity, 1.0, Waveform::Seeded(1)).unwrap();
        assert!(p.eval(2.0).unwrap().abs() < 1e-8);
    }
}
