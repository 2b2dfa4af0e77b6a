//! Perturbation trials against the Ulam-Hyers-Mittag-Leffler bound.
//!
//! cargo run --release --example stability

use fracdelay::solver::{ProblemSpec, Solver, SolverConfig};
use fracdelay::stability::{admissible_perturbation, perturbed_solve, verify_lhus, verify_uhml, Waveform};

fn main() -> fracdelay::Result<()> {
    let spec = ProblemSpec::worked_example();
    let cfg = SolverConfig::default();
    for eps in [1e-3, 1e-2, 1e-1] {
        let report = verify_uhml(&spec, eps, 20, &cfg, 42)?;
        println!("ε = {eps:e}\n{}", report.to_text());
    }

    // one perturbed solve in detail
    let solver = Solver::new(spec.clone(), cfg)?;
    let pert = admissible_perturbation(1e-2, spec.mu, &spec.phi, spec.m, Waveform::Seeded(3))?;
    let tilde = perturbed_solve(&solver, &pert)?.trajectory;
    let check = verify_lhus(&tilde, &solver, &pert)?;
    println!("integral inequality: max violation {:.3e} (slack {:.1e}), pass {}", check.max_violation, check.slack, check.pass);
    Ok(())
}
