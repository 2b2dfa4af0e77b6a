//! The majorant fixed point b*, the Gronwall bound and c ε M_μ((ΔΦ)^μ), node by node.
//!
//! cargo run --release --example gronwall_chain

use fracdelay::grid::SampledFunction;
use fracdelay::solver::{ProblemSpec, Solver, SolverConfig};
use fracdelay::special::gamma;
use fracdelay::stability::{gronwall_majorant, majorant_fixed_point, uhml_constant, MajorantOperator};

fn main() -> fracdelay::Result<()> {
    let spec = ProblemSpec::worked_example();
    let solver = Solver::new(spec.clone(), SolverConfig { n_nodes: 256, ..Default::default() })?;
    let eps = 1e-2;
    let env = MajorantOperator::new(&solver)?.envelope().to_vec();
    let b = majorant_fixed_point(eps, &solver)?;
    let c2 = SampledFunction::new(solver.main_grid().to_vec(), env.iter().map(|e| eps * e).collect())?;
    let g = gronwall_majorant(&c2, 2.0 * spec.lipschitz / gamma(spec.mu)?, spec.mu, &spec.phi, spec.m)?;
    let c = uhml_constant(spec.lipschitz, spec.mu, &spec.phi, spec.m, spec.n)?;
    let hist = solver.history_len();

    println!("c = {c:.6}");
    println!("{:>8} {:>14} {:>14} {:>14}", "ℓ", "b*", "gronwall", "c ε env");
    for j in (0..env.len()).step_by(32) {
        let x = solver.main_grid()[j];
        println!("{x:>8.4} {:>14.6e} {:>14.6e} {:>14.6e}", b.values()[hist + j], g.values()[j], c * eps * env[j]);
    }
    Ok(())
}
