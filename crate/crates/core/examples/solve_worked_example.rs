//! Solves the μ = 0.5, κ = 0.45 delay problem on [1, 2] and compares Picard with
//! the node-by-node march.
//!
//! cargo run --release --example solve_worked_example

use fracdelay::solver::{ProblemSpec, Solver, SolverConfig};
use fracdelay::special::gamma;

fn main() -> fracdelay::Result<()> {
    let spec = ProblemSpec::worked_example();
    let classical = 2.0 * spec.lipschitz * spec.delta_phi(spec.n).powf(spec.mu) / gamma(spec.mu + 1.0)?;
    println!("2 L (ΔΦ)^μ / Γ(μ+1) = {classical:.4}, 2 L / β = {:.4}", 2.0 / 3.0);

    for n in [64, 128, 256, 512, 1024] {
        let solver = Solver::new(spec.clone(), SolverConfig { n_nodes: n, ..Default::default() })?;
        let out = solver.picard(None)?;
        let march = solver.march(None)?;
        let gap = out.trajectory.difference(&march)?.sup_norm();
        let z_end = *out.trajectory.values().last().unwrap();
        println!("{n:>5} nodes: z(2) = {z_end:.10}, {} iterations, march gap {gap:.2e}", out.iterations);
    }

    let solver = Solver::new(spec, SolverConfig::default())?;
    let out = solver.picard(None)?;
    println!("\nresiduals:");
    for (k, r) in out.residuals.iter().enumerate() {
        println!("  {:>2} {r:.3e}", k + 1);
    }
    println!("\n   ℓ        z");
    for x in [0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0] {
        println!("{x:>5} {:.8}", out.trajectory.value_at(x).unwrap());
    }
    Ok(())
}
