use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::phi::PhiFunction;
use crate::solver::{PicardOutcome, ProblemSpec, Solver, SolverConfig, Trajectory};
use crate::special::ml1;

use super::majorant::{majorant_fixed_point, MajorantOperator};
use super::perturbation::{admissible_perturbation, Perturbation, Waveform};

/// Relative slack on `worst_ratio ≤ c_ml`.
pub const CERTIFICATION_SLACK: f64 = 0.01;

/// `c_{M_μ} = M_μ(2 L_Q (Φ(n) - Φ(m))^μ)`.
pub fn uhml_constant(lipschitz: f64, mu: f64, phi: &PhiFunction, m: f64, n: f64) -> Result<f64> {
    if !(lipschitz > 0.0) {
        return domain(format!("Lipschitz constant must be positive, got {lipschitz}"));
    }
    if !(m < n) {
        return domain(format!("interval must satisfy m < n, got [{m}, {n}]"));
    }
    ml1(mu, 2.0 * lipschitz * phi.delta(m, n).powf(mu))
}

/// Solves the problem with `Θ` added to the right-hand side.
pub fn perturbed_solve(solver: &Solver, pert: &Perturbation) -> Result<PicardOutcome> {
    let theta = pert.sample(solver.main_grid())?;
    solver.picard(Some(&theta))
}

/// Outcome of [`verify_lhus`].
#[derive(Debug, Clone, PartialEq)]
pub struct LhusCheck {
    /// `|z̃(ℓ) - z̃(m) - ∫ K Q(η, z̃, z̃∘f)|` on the main nodes.
    pub residual: Vec<f64>,
    /// Largest `residual - ε M_μ((ΔΦ)^μ)`.
    pub max_violation: f64,
    pub slack: f64,
    pub pass: bool,
}

/// Checks that `z̃` satisfies the integral inequality with envelope `ε M_μ((ΔΦ)^μ)`.
pub fn verify_lhus(tilde: &Trajectory, solver: &Solver, pert: &Perturbation) -> Result<LhusCheck> {
    let spec = solver.spec();
    let hist = solver.history_len();
    let values = tilde.values();
    let main = solver.main_grid();
    let f: Vec<f64> = (0..main.len()).map(|j| (spec.rhs)(main[j], values[hist + j], solver.delayed(values, j))).collect();
    let integral = solver.rule().apply(&f);
    let z_m = values[hist];
    let mut residual = Vec::with_capacity(main.len());
    let mut max_violation = f64::NEG_INFINITY;
    let mut env_max: f64 = 0.0;
    for j in 0..main.len() {
        let r = (values[hist + j] - z_m - integral[j]).abs();
        let env = pert.epsilon * pert.envelope(main[j])?;
        env_max = env_max.max(env);
        max_violation = max_violation.max(r - env);
        residual.push(r);
    }
    let slack = 1e-6 * env_max + solver.config().tol * ml1(spec.mu, solver.beta() * spec.delta_phi(spec.n).powf(spec.mu))?;
    Ok(LhusCheck { residual, max_violation, slack, pass: max_violation <= slack })
}

/// Per-trial data of a [`StabilityReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub waveform: Waveform,
    pub worst_ratio: f64,
    pub history_max_dev: f64,
    /// Largest `|z̃ - z| - b*` over the nodes; at most the solver tolerance when dominated.
    pub majorant_excess: f64,
    /// Picard failure message, if the trial did not converge.
    pub failure: Option<String>,
}

/// Result of [`verify_uhml`].
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub epsilon: f64,
    pub c_ml: f64,
    pub trials: usize,
    pub worst_ratio: f64,
    pub history_max_dev: f64,
    pub majorant_excess: f64,
    pub failed_trials: usize,
    pub pass: bool,
    pub outcomes: Vec<TrialOutcome>,
}

impl StabilityReport {
    /// `key: value` lines.
    pub fn to_text(&self) -> String {
        format!(
            "epsilon: {:e}\nc_ml: {:.17e}\ntrials: {}\nworst_ratio: {:.17e}\nhistory_max_dev: {:e}\nmajorant_excess: {:e}\nfailed_trials: {}\npass: {}\n",
            self.epsilon,
            self.c_ml,
            self.trials,
            self.worst_ratio,
            self.history_max_dev,
            self.majorant_excess,
            self.failed_trials,
            self.pass
        )
    }
}

/// The waveform of trial `k`: trial 0 saturates the bound, later trials are seeded
/// from `seed + k`.
pub fn trial_waveform(seed: u64, k: usize) -> Waveform {
    if k == 0 {
        Waveform::Saturating
    } else {
        Waveform::Seeded(seed.wrapping_add(k as u64))
    }
}

/// Runs `trials` perturbed solves against one shared unperturbed solution and compares
/// the deviations with `c_ml ε M_μ((ΔΦ)^μ)` and with the majorant `b*`.
pub fn verify_uhml(spec: &ProblemSpec, epsilon: f64, trials: usize, cfg: &SolverConfig, seed: u64) -> Result<StabilityReport> {
    if trials == 0 {
        return domain("at least one trial is required");
    }
    let solver = Solver::new(spec.clone(), *cfg)?;
    let c_ml = uhml_constant(spec.lipschitz, spec.mu, &spec.phi, spec.m, spec.n)?;
    let base = solver.picard(None)?.trajectory;
    let b_star = majorant_fixed_point(epsilon, &solver)?;
    let envelope = MajorantOperator::new(&solver)?.envelope().to_vec();
    let hist = solver.history_len();

    let outcomes: Vec<TrialOutcome> = (0..trials)
        .into_par_iter()
        .map(|k| -> Result<TrialOutcome> {
            let waveform = trial_waveform(seed, k);
            let pert = admissible_perturbation(epsilon, spec.mu, &spec.phi, spec.m, waveform)?;
            let tilde = match perturbed_solve(&solver, &pert) {
                Ok(out) => out.trajectory,
                Err(e @ Error::NonConvergence { .. }) => {
                    return Ok(TrialOutcome {
                        waveform,
                        worst_ratio: f64::NAN,
                        history_max_dev: f64::NAN,
                        majorant_excess: f64::NAN,
                        failure: Some(e.to_string()),
                    })
                }
                Err(e) => return Err(e),
            };
            let dev = tilde.difference(&base)?;
            let d = dev.values();
            let history_max_dev = d[..=hist].iter().fold(0.0, |a: f64, v| a.max(v.abs()));
            let mut worst_ratio: f64 = 0.0;
            let mut majorant_excess = f64::NEG_INFINITY;
            for j in 0..envelope.len() {
                let dj = d[hist + j].abs();
                worst_ratio = worst_ratio.max(dj / (epsilon * envelope[j]));
                majorant_excess = majorant_excess.max(dj - b_star.values()[hist + j]);
            }
            Ok(TrialOutcome { waveform, worst_ratio, history_max_dev, majorant_excess, failure: None })
        })
        .collect::<Result<Vec<_>>>()?;

    let ok: Vec<&TrialOutcome> = outcomes.iter().filter(|o| o.failure.is_none()).collect();
    let failed_trials = outcomes.len() - ok.len();
    let worst_ratio = ok.iter().map(|o| o.worst_ratio).fold(0.0, f64::max);
    let history_max_dev = ok.iter().map(|o| o.history_max_dev).fold(0.0, f64::max);
    let majorant_excess = ok.iter().map(|o| o.majorant_excess).fold(f64::NEG_INFINITY, f64::max);
    let pass = failed_trials == 0 && worst_ratio <= c_ml * (1.0 + CERTIFICATION_SLACK) && history_max_dev == 0.0;
    Ok(StabilityReport {
        epsilon,
        c_ml,
        trials,
        worst_ratio,
        history_max_dev,
        majorant_excess,
        failed_trials,
        pass,
        outcomes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_examples() {
        let c = uhml_constant(1.0, 1.0, &PhiFunction::Identity, 0.0, 1.0).unwrap();
        assert!((c - 2f64.exp()).abs() < 1e-12);
        let c = uhml_constant(1e-12, 0.5, &PhiFunction::Identity, 1.0, 2.0).unwrap();
        assert!((c - 1.0).abs() < 1e-10);
        assert!(uhml_constant(0.0, 0.5, &PhiFunction::Identity, 1.0, 2.0).is_err());
    }

    #[test]
    fn null_perturbation_is_bitwise_neutral() {
        let solver = Solver::new(ProblemSpec::worked_example(), SolverConfig { n_nodes: 64, ..Default::default() }).unwrap();
        let a = solver.picard(None).unwrap().trajectory;
        let zeros = vec![0.0; solver.main_grid().len()];
        let b = solver.picard(Some(&zeros)).unwrap().trajectory;
        assert_eq!(a, b);
    }

    #[test]
    fn tiny_epsilon_single_trial() {
        let cfg = SolverConfig { n_nodes: 64, ..Default::default() };
        let r = verify_uhml(&ProblemSpec::worked_example(), 1e-9, 1, &cfg, 7).unwrap();
        assert!(r.pass);
        assert!(r.worst_ratio < r.c_ml);
        assert_eq!(r.history_max_dev, 0.0);
        assert!(r.to_text().contains("pass: true"));
    }
}
