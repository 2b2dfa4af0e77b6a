use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fracdelay::config::{refute_lipschitz, RunConfig};
use fracdelay::solver::Solver;
use fracdelay::special::{gamma, ml1, ml2};
use fracdelay::stability::verify_uhml;
use fracdelay::verify::{self, Suite};
use fracdelay::Error;

const EXIT_CONFIG: u8 = 2;
const EXIT_NONCONVERGENCE: u8 = 3;
const EXIT_UNSTABLE: u8 = 4;

#[derive(Parser)]
#[command(name = "fracdelay", version, about = "Fractional delay equations with Φ-Caputo derivatives")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the problem in a config file and write the trajectory as CSV.
    Solve {
        config: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the perturbation trials of the config's stability block.
    Stability {
        config: PathBuf,
        /// Report file; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate E_p(θ), or E_{p,q}(θ) when q is given.
    #[command(allow_negative_numbers = true)]
    Mlf {
        /// p, optionally followed by q, then θ (use `--` before a negative θ).
        #[arg(required = true, num_args = 2..=3)]
        args: Vec<f64>,
    },
    /// Run an identity suite: calculus, laplace or all.
    Verify {
        suite: Suite,
        /// Scale the gamma function by (1 + x) when computing reference values.
        #[arg(long, hide = true)]
        fault_gamma: Option<f64>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NonConvergence { .. } => EXIT_NONCONVERGENCE,
            _ => EXIT_CONFIG,
        };
        Failure { code, message: e.to_string() }
    }
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

fn load(path: &Path) -> Result<RunConfig, Failure> {
    let text = fs::read_to_string(path).map_err(|e| fail(EXIT_CONFIG, format!("{}: {e}", path.display())))?;
    let cfg = RunConfig::parse(&text)?;
    let seed = cfg.stability.map_or(0, |s| s.seed);
    if let Some(r) = refute_lipschitz(&cfg.problem_spec(), 4000, 10.0, seed) {
        return Err(fail(
            EXIT_CONFIG,
            format!(
                "problem.lipschitz: declared L_Q = {} is refuted at ell = {}, (u, v) = {:?} vs {:?}: ratio {:.6e}",
                cfg.problem.lipschitz, r.ell, r.first, r.second, r.ratio
            ),
        ));
    }
    Ok(cfg)
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| fail(EXIT_CONFIG, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// 17 significant digits, positional notation for moderate magnitudes.
fn sig17(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    if (1e-5..1e17).contains(&a) {
        let decimals = (16 - a.log10().floor() as i32).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.16e}")
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Solve { config, output } => {
            let cfg = load(&config)?;
            let solver = Solver::new(cfg.problem_spec(), cfg.solver)?;
            let out = solver.picard(None)?;
            emit(output.as_deref(), &out.trajectory.to_csv())?;
            let ratios: Vec<String> = out.ratios.iter().map(|r| format!("{r:.4}")).collect();
            let summary = format!(
                "iterations: {}\nresidual: {:e}\nratios: [{}]",
                out.iterations,
                out.residual,
                ratios.join(", ")
            );
            if output.is_some() {
                println!("{summary}");
            } else {
                eprintln!("{summary}");
            }
            Ok(0)
        }
        Command::Stability { config, output } => {
            let cfg = load(&config)?;
            let Some(st) = cfg.stability else {
                return Err(fail(EXIT_CONFIG, "stability.epsilon: the config has no stability block"));
            };
            let report = verify_uhml(&cfg.problem_spec(), st.epsilon, st.trials, &cfg.solver, st.seed)?;
            emit(output.as_deref(), &report.to_text())?;
            Ok(if report.pass { 0 } else { EXIT_UNSTABLE })
        }
        Command::Mlf { args } => {
            let value = match args[..] {
                [p, theta] => ml1(p, theta)?,
                [p, q, theta] => ml2(p, q, theta)?,
                _ => unreachable!("clap enforces two or three values"),
            };
            println!("{}", sig17(value));
            Ok(0)
        }
        Command::Verify { suite, fault_gamma } => {
            let factor = 1.0 + fault_gamma.unwrap_or(0.0);
            let g = move |x: f64| gamma(x).map(|v| v * factor);
            let checks = verify::run(suite, &g);
            for c in &checks {
                println!("{c}");
            }
            let failed = checks.iter().filter(|c| !c.pass()).count();
            println!("{} checks, {failed} failed", checks.len());
            Ok(if failed == 0 { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
