//! Flat `section.key = value` run configurations.
//!
//! ```text
//! # worked example
//! problem.mu = 0.5
//! problem.kappa = 0.45
//! problem.rho = 1
//! problem.sigma = 0.5
//! problem.m = 1
//! problem.n = 2
//! problem.q = worked_example
//! solver.nodes = 512
//! stability.epsilon = 0.01
//! ```
//!
//! `problem.phi` is one of `identity`, `logarithmic`, `power(ρ)`, `exponential`;
//! `problem.q` one of `zero`, `constant(c)`, `linear(a, b)` (`a u + b v`),
//! `worked_example`; `problem.delay` is `lag` (`ℓ - σ`) or `proportional(q)` (`q ℓ`);
//! `problem.history` is `constant(c)` or `poly(c0, c1, ...)` in powers of `ℓ - m`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::phi::PhiFunction;
use crate::solver::{worked_example_rhs, ProblemSpec, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RhsKind {
    Zero,
    Constant(f64),
    Linear(f64, f64),
    WorkedExample,
}

impl RhsKind {
    /// Lipschitz constant assumed when the config does not declare one.
    pub fn default_lipschitz(&self) -> f64 {
        match self {
            RhsKind::Linear(a, b) if a.abs().max(b.abs()) > 0.0 => a.abs().max(b.abs()),
            _ => 1.0,
        }
    }

    fn render(&self) -> String {
        match self {
            RhsKind::Zero => "zero".into(),
            RhsKind::Constant(c) => format!("constant({c:?})"),
            RhsKind::Linear(a, b) => format!("linear({a:?}, {b:?})"),
            RhsKind::WorkedExample => "worked_example".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DelayKind {
    Lag,
    Proportional(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum HistoryKind {
    Constant(f64),
    Poly(Vec<f64>),
}

impl HistoryKind {
    fn render(&self) -> String {
        match self {
            HistoryKind::Constant(c) => format!("constant({c:?})"),
            HistoryKind::Poly(cs) => format!("poly({})", join(cs)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemConfig {
    pub mu: f64,
    pub kappa: f64,
    pub rho: f64,
    pub sigma: f64,
    pub m: f64,
    pub n: f64,
    pub phi: PhiFunction,
    pub q: RhsKind,
    pub lipschitz: f64,
    pub delay: DelayKind,
    pub history: HistoryKind,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityConfig {
    pub epsilon: f64,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: ProblemConfig,
    pub solver: SolverConfig,
    pub stability: Option<StabilityConfig>,
}

const KEYS: [&str; 18] = [
    "problem.mu",
    "problem.kappa",
    "problem.rho",
    "problem.sigma",
    "problem.m",
    "problem.n",
    "problem.phi",
    "problem.q",
    "problem.lipschitz",
    "problem.delay",
    "problem.history",
    "solver.nodes",
    "solver.tol",
    "solver.max_iter",
    "solver.beta",
    "stability.epsilon",
    "stability.trials",
    "stability.seed",
];

fn cfg_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(", ")
}

fn number(key: &str, v: &str) -> Result<f64> {
    match v.trim().parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => cfg_err(format!("{key}: expected a finite number, got `{v}`")),
    }
}

fn integer<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim().parse::<T>().or_else(|_| cfg_err(format!("{key}: expected a nonnegative integer, got `{v}`")))
}

/// Splits `name(a, b)` into `("name", [a, b])`; a bare `name` has no arguments.
fn call(key: &str, v: &str) -> Result<(String, Vec<f64>)> {
    let v = v.trim();
    match v.find('(') {
        None => Ok((v.to_string(), Vec::new())),
        Some(open) => {
            let Some(inner) = v[open + 1..].strip_suffix(')') else {
                return cfg_err(format!("{key}: unbalanced parentheses in `{v}`"));
            };
            let args = if inner.trim().is_empty() {
                Vec::new()
            } else {
                inner.split(',').map(|a| number(key, a)).collect::<Result<Vec<_>>>()?
            };
            Ok((v[..open].trim().to_string(), args))
        }
    }
}

fn arity(key: &str, name: &str, args: &[f64], n: usize) -> Result<()> {
    if args.len() != n {
        return cfg_err(format!("{key}: `{name}` takes {n} argument(s), got {}", args.len()));
    }
    Ok(())
}

fn parse_phi(key: &str, v: &str) -> Result<PhiFunction> {
    let (name, args) = call(key, v)?;
    let phi = match name.as_str() {
        "identity" => PhiFunction::Identity,
        "logarithmic" => PhiFunction::Logarithmic,
        "exponential" => PhiFunction::Exponential,
        "power" => {
            arity(key, &name, &args, 1)?;
            if !(args[0] > 0.0) {
                return cfg_err(format!("{key}: power exponent must be positive"));
            }
            PhiFunction::Power(args[0])
        }
        _ => return cfg_err(format!("{key}: unknown scale `{v}` (identity, logarithmic, power(ρ), exponential)")),
    };
    if !matches!(name.as_str(), "power") {
        arity(key, &name, &args, 0)?;
    }
    Ok(phi)
}

fn render_phi(phi: &PhiFunction) -> String {
    match phi {
        PhiFunction::Power(r) => format!("power({r:?})"),
        other => other.to_string(),
    }
}

fn parse_rhs(key: &str, v: &str) -> Result<RhsKind> {
    let (name, args) = call(key, v)?;
    match name.as_str() {
        "zero" => arity(key, &name, &args, 0).map(|_| RhsKind::Zero),
        "constant" => arity(key, &name, &args, 1).map(|_| RhsKind::Constant(args[0])),
        "linear" => arity(key, &name, &args, 2).map(|_| RhsKind::Linear(args[0], args[1])),
        "worked_example" | "paper_example" => arity(key, &name, &args, 0).map(|_| RhsKind::WorkedExample),
        _ => cfg_err(format!("{key}: unknown right-hand side `{v}` (zero, constant(c), linear(a, b), worked_example)")),
    }
}

fn parse_delay(key: &str, v: &str) -> Result<DelayKind> {
    let (name, args) = call(key, v)?;
    match name.as_str() {
        "lag" => arity(key, &name, &args, 0).map(|_| DelayKind::Lag),
        "proportional" => {
            arity(key, &name, &args, 1)?;
            if !(args[0] > 0.0 && args[0] <= 1.0) {
                return cfg_err(format!("{key}: proportional factor must lie in (0, 1]"));
            }
            Ok(DelayKind::Proportional(args[0]))
        }
        _ => cfg_err(format!("{key}: unknown delay `{v}` (lag, proportional(q))")),
    }
}

fn parse_history(key: &str, v: &str) -> Result<HistoryKind> {
    let (name, args) = call(key, v)?;
    match name.as_str() {
        "constant" => arity(key, &name, &args, 1).map(|_| HistoryKind::Constant(args[0])),
        "poly" if !args.is_empty() => Ok(HistoryKind::Poly(args)),
        "poly" => cfg_err(format!("{key}: poly needs at least one coefficient")),
        _ => cfg_err(format!("{key}: unknown history `{v}` (constant(c), poly(c0, c1, ...))")),
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut map: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return cfg_err(format!("line {}: expected `section.key = value`", i + 1));
            };
            let k = k.trim();
            let Some(known) = KEYS.iter().find(|&&x| x == k) else {
                return cfg_err(format!("line {}: unknown key `{k}`", i + 1));
            };
            if map.insert(known, (i + 1, v.trim())).is_some() {
                return cfg_err(format!("line {}: duplicate key `{k}`", i + 1));
            }
        }
        let get = |k: &str| map.get(k).map(|&(_, v)| v);
        let req = |k: &str| get(k).map_or_else(|| cfg_err(format!("{k}: missing required key")), |v| number(k, v));

        let q = get("problem.q").map_or(Ok(RhsKind::Zero), |v| parse_rhs("problem.q", v))?;
        let lipschitz = match get("problem.lipschitz") {
            Some(v) => number("problem.lipschitz", v)?,
            None => q.default_lipschitz(),
        };
        let problem = ProblemConfig {
            mu: req("problem.mu")?,
            kappa: req("problem.kappa")?,
            rho: req("problem.rho")?,
            sigma: req("problem.sigma")?,
            m: req("problem.m")?,
            n: req("problem.n")?,
            phi: get("problem.phi").map_or(Ok(PhiFunction::Identity), |v| parse_phi("problem.phi", v))?,
            q,
            lipschitz,
            delay: get("problem.delay").map_or(Ok(DelayKind::Lag), |v| parse_delay("problem.delay", v))?,
            history: get("problem.history")
                .map_or(Ok(HistoryKind::Constant(1.0)), |v| parse_history("problem.history", v))?,
        };

        let d = SolverConfig::default();
        let solver = SolverConfig {
            n_nodes: get("solver.nodes").map_or(Ok(d.n_nodes), |v| integer("solver.nodes", v))?,
            tol: get("solver.tol").map_or(Ok(d.tol), |v| number("solver.tol", v))?,
            max_iter: get("solver.max_iter").map_or(Ok(d.max_iter), |v| integer("solver.max_iter", v))?,
            beta: get("solver.beta").map(|v| number("solver.beta", v)).transpose()?,
        };

        let any_stab = KEYS.iter().filter(|k| k.starts_with("stability.")).any(|k| map.contains_key(k));
        let stability = if any_stab {
            Some(StabilityConfig {
                epsilon: get("stability.epsilon")
                    .map_or_else(|| cfg_err("stability.epsilon: missing required key"), |v| number("stability.epsilon", v))?,
                trials: get("stability.trials").map_or(Ok(20), |v| integer("stability.trials", v))?,
                seed: get("stability.seed").map_or(Ok(0), |v| integer("stability.seed", v))?,
            })
        } else {
            None
        };
        let cfg = Self { problem, solver, stability };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Field-level checks, with messages naming the offending key.
    pub fn validate(&self) -> Result<()> {
        let p = &self.problem;
        if !(0.0 < p.kappa && p.kappa < p.mu && p.mu <= 1.0) {
            return cfg_err(format!("problem.kappa/problem.mu: need 0 < κ < μ ≤ 1, got κ = {}, μ = {}", p.kappa, p.mu));
        }
        if !(p.rho > 0.0) {
            return cfg_err("problem.rho: must be positive");
        }
        if !(p.sigma > 0.0) {
            return cfg_err("problem.sigma: must be positive");
        }
        if !(p.m < p.n) {
            return cfg_err("problem.m/problem.n: need m < n");
        }
        if !(p.lipschitz > 0.0) {
            return cfg_err("problem.lipschitz: must be positive");
        }
        if let PhiFunction::Logarithmic = p.phi {
            if !(p.m - p.sigma > 0.0) {
                return cfg_err("problem.phi: logarithmic scale needs m - σ > 0");
            }
        }
        if let DelayKind::Proportional(q) = p.delay {
            let lo = p.m - p.sigma;
            if !(q * p.m >= lo && q * p.n >= lo && p.m >= 0.0) {
                return cfg_err(format!("problem.delay: proportional({q}) leaves [m - σ, n] on [m, n]"));
            }
        }
        let s = &self.solver;
        if s.n_nodes < 16 {
            return cfg_err("solver.nodes: must be at least 16");
        }
        if !(s.tol > 0.0) {
            return cfg_err("solver.tol: must be positive");
        }
        if s.max_iter == 0 {
            return cfg_err("solver.max_iter: must be at least 1");
        }
        let beta = s.beta_for(p.lipschitz);
        if !(2.0 * p.lipschitz / beta < 1.0) {
            return cfg_err(format!("solver.beta: β = {beta} violates 2 L_Q / β < 1 (L_Q = {})", p.lipschitz));
        }
        if let Some(st) = &self.stability {
            if !(st.epsilon > 0.0) {
                return cfg_err("stability.epsilon: must be positive");
            }
            if st.trials == 0 {
                return cfg_err("stability.trials: must be at least 1");
            }
        }
        Ok(())
    }

    /// Canonical text with every key written out; parsing it gives back `self`.
    pub fn to_canonical(&self) -> String {
        let p = &self.problem;
        let mut out = String::new();
        let mut line = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        line("problem.mu", format!("{:?}", p.mu));
        line("problem.kappa", format!("{:?}", p.kappa));
        line("problem.rho", format!("{:?}", p.rho));
        line("problem.sigma", format!("{:?}", p.sigma));
        line("problem.m", format!("{:?}", p.m));
        line("problem.n", format!("{:?}", p.n));
        line("problem.phi", render_phi(&p.phi));
        line("problem.q", p.q.render());
        line("problem.lipschitz", format!("{:?}", p.lipschitz));
        line(
            "problem.delay",
            match p.delay {
                DelayKind::Lag => "lag".into(),
                DelayKind::Proportional(q) => format!("proportional({q:?})"),
            },
        );
        line("problem.history", p.history.render());
        line("solver.nodes", self.solver.n_nodes.to_string());
        line("solver.tol", format!("{:?}", self.solver.tol));
        line("solver.max_iter", self.solver.max_iter.to_string());
        if let Some(b) = self.solver.beta {
            line("solver.beta", format!("{b:?}"));
        }
        if let Some(st) = &self.stability {
            line("stability.epsilon", format!("{:?}", st.epsilon));
            line("stability.trials", st.trials.to_string());
            line("stability.seed", st.seed.to_string());
        }
        out
    }

    /// The library problem described by this config.
    pub fn problem_spec(&self) -> ProblemSpec {
        let p = &self.problem;
        let mut spec = ProblemSpec::new(p.mu, p.kappa, p.rho, p.sigma, p.m, p.n).with_phi(p.phi.clone());
        spec = match p.q {
            RhsKind::Zero => spec.with_rhs(|_, _, _| 0.0, p.lipschitz),
            RhsKind::Constant(c) => spec.with_rhs(move |_, _, _| c, p.lipschitz),
            RhsKind::Linear(a, b) => spec.with_rhs(move |_, u, v| a * u + b * v, p.lipschitz),
            RhsKind::WorkedExample => spec.with_rhs(worked_example_rhs, p.lipschitz),
        };
        spec = match p.delay {
            DelayKind::Lag => spec,
            DelayKind::Proportional(q) => spec.with_delay(move |l| q * l),
        };
        let m = p.m;
        match &p.history {
            HistoryKind::Constant(c) => {
                let c = *c;
                spec.with_history(move |_| c)
            }
            HistoryKind::Poly(cs) => {
                let cs = cs.clone();
                spec.with_history(move |l| cs.iter().rev().fold(0.0, |acc, c| acc * (l - m) + c))
            }
        }
    }
}

/// A sampled pair showing that the declared Lipschitz constant is too small.
#[derive(Debug, Clone, PartialEq)]
pub struct Refutation {
    pub ell: f64,
    pub first: (f64, f64),
    pub second: (f64, f64),
    pub ratio: f64,
}

/// Probes `|Q(ℓ,u1,v1) - Q(ℓ,u2,v2)| / (|u1-u2| + |v1-v2|)` at random pairs. Can only
/// refute the declared constant, never confirm it.
pub fn refute_lipschitz(spec: &ProblemSpec, samples: usize, radius: f64, seed: u64) -> Option<Refutation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: Option<Refutation> = None;
    for k in 0..samples {
        let ell = rng.gen_range(spec.m..=spec.n);
        let (u1, v1) = (rng.gen_range(-radius..radius), rng.gen_range(-radius..radius));
        // mix wide and nearby pairs
        let scale = if k % 2 == 0 { radius } else { 1e-3 * radius };
        let (u2, v2) = (u1 + rng.gen_range(-scale..scale), v1 + rng.gen_range(-scale..scale));
        let den = (u1 - u2).abs() + (v1 - v2).abs();
        if den == 0.0 {
            continue;
        }
        let ratio = ((spec.rhs)(ell, u1, v1) - (spec.rhs)(ell, u2, v2)).abs() / den;
        if ratio > spec.lipschitz * (1.0 + 1e-9) && worst.as_ref().is_none_or(|w| ratio > w.ratio) {
            worst = Some(Refutation { ell, first: (u1, v1), second: (u2, v2), ratio });
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = "\
# worked example
problem.mu = 0.5
problem.kappa = 0.45
problem.rho = 1
problem.sigma = 0.5
problem.m = 1
problem.n = 2
problem.q = worked_example
solver.nodes = 512
stability.epsilon = 0.01
stability.trials = 20
stability.seed = 42
";

    #[test]
    fn parses_example_with_defaults() {
        let c = RunConfig::parse(EXAMPLE).unwrap();
        assert_eq!(c.problem.q, RhsKind::WorkedExample);
        assert_eq!(c.problem.lipschitz, 1.0);
        assert_eq!(c.problem.phi, PhiFunction::Identity);
        assert_eq!(c.solver.beta_for(1.0), 3.0);
        assert_eq!(c.stability.unwrap().trials, 20);
    }

    #[test]
    fn canonical_round_trip() {
        let c = RunConfig::parse(EXAMPLE).unwrap();
        let text = c.to_canonical();
        let again = RunConfig::parse(&text).unwrap();
        assert_eq!(again, c);
        assert_eq!(again.to_canonical(), text);
        let odd = "problem.mu=0.7\nproblem.kappa=0.1\nproblem.rho=2\nproblem.sigma=0.3\nproblem.m=0.5\nproblem.n=1.5\n\
                   problem.phi = power(1.25)\nproblem.q = linear(-0.5, 0.25)\nproblem.delay = proportional(0.8)\n\
                   problem.history = poly(1, -2, 0.5)\nsolver.beta = 4\n";
        let c = RunConfig::parse(odd).unwrap();
        assert_eq!(c.problem.lipschitz, 0.5);
        assert_eq!(RunConfig::parse(&c.to_canonical()).unwrap(), c);
    }

    #[test]
    fn rejects_unknown_and_malformed() {
        let e = RunConfig::parse(&format!("{EXAMPLE}problem.colour = red\n")).unwrap_err();
        assert!(e.to_string().contains("problem.colour"));
        let e = RunConfig::parse(&EXAMPLE.replace("problem.kappa = 0.45", "problem.kappa = 0.5")).unwrap_err();
        assert!(e.to_string().contains("0 < κ < μ ≤ 1"));
        let e = RunConfig::parse(&EXAMPLE.replace("problem.rho = 1", "problem.rho = abc")).unwrap_err();
        assert!(e.to_string().contains("problem.rho"));
        assert!(RunConfig::parse(&EXAMPLE.replace("problem.m = 1\n", "")).is_err());
        assert!(RunConfig::parse(&format!("{EXAMPLE}solver.beta = 2\n")).is_err());
        assert!(RunConfig::parse(&EXAMPLE.replace("worked_example", "cubic")).is_err());
    }

    #[test]
    fn history_polynomial() {
        let c = RunConfig::parse(&format!("{EXAMPLE}problem.history = poly(1, 2, 3)\n")).unwrap();
        let spec = c.problem_spec();
        assert_eq!((spec.history)(1.0), 1.0);
        assert_eq!((spec.history)(0.5), 1.0 - 1.0 + 0.75);
    }

    #[test]
    fn refuter() {
        let spec = ProblemSpec::worked_example();
        assert!(refute_lipschitz(&spec, 2000, 10.0, 1).is_none());
        let bad = RunConfig::parse(&format!("{EXAMPLE}problem.lipschitz = 1e-6\n")).unwrap().problem_spec();
        let r = refute_lipschitz(&bad, 2000, 10.0, 1).unwrap();
        assert!(r.ratio > 1e-6);
    }
}
