//! Config parsing and canonical round trips.

use fracdelay::config::{DelayKind, HistoryKind, ProblemConfig, RhsKind, RunConfig, StabilityConfig};
use fracdelay::phi::PhiFunction;
use fracdelay::solver::SolverConfig;
use proptest::prelude::*;

fn phi_strategy() -> impl Strategy<Value = PhiFunction> {
    prop_oneof![
        Just(PhiFunction::Identity),
        Just(PhiFunction::Logarithmic),
        Just(PhiFunction::Exponential),
        (0.2f64..3.0).prop_map(PhiFunction::Power),
    ]
}

fn rhs_strategy() -> impl Strategy<Value = RhsKind> {
    prop_oneof![
        Just(RhsKind::Zero),
        Just(RhsKind::WorkedExample),
        (-5.0f64..5.0).prop_map(RhsKind::Constant),
        (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(a, b)| RhsKind::Linear(a, b)),
    ]
}

prop_compose! {
    fn config()(
        mu in 0.2f64..=1.0,
        kfrac in 0.05f64..0.95,
        rho in 0.1f64..4.0,
        sigma in 0.1f64..1.0,
        m in 1.5f64..3.0,
        len in 0.2f64..2.0,
        phi in phi_strategy(),
        q in rhs_strategy(),
        prop_delay in prop::option::of(0.7f64..1.0),
        coeffs in prop::collection::vec(-3.0f64..3.0, 1..4),
        nodes in 16usize..2000,
        beta in prop::option::of(5.0f64..20.0),
        stab in prop::option::of((1e-6f64..0.1, 1usize..50, any::<u64>())),
    ) -> RunConfig {
        let lipschitz = q.default_lipschitz();
        RunConfig {
            problem: ProblemConfig {
                mu,
                kappa: mu * kfrac,
                rho,
                sigma,
                m,
                n: m + len,
                phi,
                q,
                lipschitz,
                // f(m) has to land on the history interval
                delay: match prop_delay {
                    Some(f) if f * m >= m - sigma => DelayKind::Proportional(f),
                    _ => DelayKind::Lag,
                },
                history: if coeffs.len() == 1 { HistoryKind::Constant(coeffs[0]) } else { HistoryKind::Poly(coeffs) },
            },
            solver: SolverConfig { n_nodes: nodes, beta: beta.map(|b| b * lipschitz), ..SolverConfig::default() },
            stability: stab.map(|(epsilon, trials, seed)| StabilityConfig { epsilon, trials, seed }),
        }
    }
}

proptest! {
    #[test]
    fn canonical_form_round_trips(cfg in config()) {
        let text = cfg.to_canonical();
        let parsed = RunConfig::parse(&text).unwrap();
        prop_assert_eq!(&parsed, &cfg);
        prop_assert_eq!(parsed.to_canonical(), text);
    }
}

#[test]
fn comments_and_spacing_are_ignored() {
    let text = "  # header\nproblem.mu=0.5   # inline\n\nproblem.kappa =0.45\nproblem.rho= 1\nproblem.sigma = 0.5\nproblem.m = 1\nproblem.n = 2\n";
    let cfg = RunConfig::parse(text).unwrap();
    assert_eq!(cfg.problem.kappa, 0.45);
    assert_eq!(cfg.problem.q, RhsKind::Zero);
    assert!(cfg.stability.is_none());
}

#[test]
fn errors_name_the_field() {
    let base = "problem.mu = 0.5\nproblem.kappa = 0.45\nproblem.rho = 1\nproblem.sigma = 0.5\nproblem.m = 1\nproblem.n = 2\n";
    for (extra, field) in [
        ("problem.phi = cubic\n", "problem.phi"),
        ("problem.delay = proportional(0.1)\n", "problem.delay"),
        ("solver.nodes = 4\n", "solver.nodes"),
        ("solver.tol = -1\n", "solver.tol"),
        ("stability.trials = 3\n", "stability.epsilon"),
        ("problem.history = poly()\n", "problem.history"),
        ("problem.q = linear(1)\n", "problem.q"),
    ] {
        let err = RunConfig::parse(&format!("{base}{extra}")).unwrap_err().to_string();
        assert!(err.contains(field), "{extra}: {err}");
    }
    let err = RunConfig::parse(&base.replace("problem.rho = 1\n", "")).unwrap_err().to_string();
    assert!(err.contains("problem.rho"), "{err}");
}
