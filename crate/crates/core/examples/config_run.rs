//! Loads a run configuration, prints its canonical form and solves it.
//!
//! cargo run --release --example config_run -- crates/core/configs/log_scale.cfg

use fracdelay::config::{refute_lipschitz, RunConfig};
use fracdelay::solver::Solver;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/configs/log_scale.cfg").into());
    let cfg = RunConfig::parse(&std::fs::read_to_string(&path)?)?;
    print!("{}", cfg.to_canonical());

    let spec = cfg.problem_spec();
    if let Some(r) = refute_lipschitz(&spec, 4000, 10.0, 0) {
        println!("declared Lipschitz constant refuted: ratio {:.4}", r.ratio);
    }
    let out = Solver::new(spec, cfg.solver)?.picard(None)?;
    println!("\n{} iterations, residual {:.2e}", out.iterations, out.residual);
    let csv = out.trajectory.to_csv();
    for line in csv.lines().step_by(40) {
        println!("{line}");
    }
    Ok(())
}
