//! The `fracdelay` binary: outputs and exit codes.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const PRESET: &str = "\
# worked example
problem.mu = 0.5
problem.kappa = 0.45
problem.rho = 1
problem.sigma = 0.5
problem.m = 1
problem.n = 2
problem.q = paper_example
solver.nodes = 512
stability.epsilon = 0.01
stability.trials = 20
stability.seed = 7
";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fracdelay"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read_csv(path: &Path) -> Vec<(f64, f64)> {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("ell,z"));
    assert!(!text.contains('\r'));
    lines
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect()
}

#[test]
fn solve_writes_full_trajectory() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "preset.cfg", PRESET);
    let out_path = dir.path().join("z.csv");
    let o = run(&["solve", &cfg, "-o", out_path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("iterations: 12"));
    let rows = read_csv(&out_path);
    assert_eq!(rows.first().unwrap().0, 0.5);
    assert_eq!(rows.last().unwrap().0, 2.0);
    let at_m = rows.iter().find(|r| r.0 == 1.0).unwrap();
    assert_eq!(at_m.1, 1.0);
    assert!((rows.last().unwrap().1 - 2.84391).abs() < 1e-4);
}

#[test]
fn zero_rhs_holds_the_initial_value() {
    let dir = TempDir::new().unwrap();
    let text = PRESET.replace("paper_example", "zero") + "problem.history = poly(3, -1, 0.5)\n";
    let cfg = write(&dir, "zero.cfg", &text);
    let o = run(&["solve", &cfg]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = stdout(&o);
    for line in csv.lines().skip(1) {
        let (l, z) = line.split_once(',').unwrap();
        if l.parse::<f64>().unwrap() >= 1.0 {
            assert_eq!(z, "3.0");
        }
    }
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "preset.cfg", PRESET);
    let a = run(&["solve", &cfg]);
    let b = run(&["solve", &cfg]);
    assert_eq!(a.stdout, b.stdout);
    let a = run(&["stability", &cfg]);
    let b = run(&["stability", &cfg]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn stability_report_and_pass() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "preset.cfg", PRESET);
    let report = dir.path().join("report.txt");
    let o = run(&["stability", &cfg, "-o", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(report).unwrap();
    for key in ["epsilon", "c_ml", "trials", "worst_ratio", "history_max_dev", "pass"] {
        assert!(text.lines().any(|l| l.starts_with(&format!("{key}: "))), "{key} missing:\n{text}");
    }
    assert!(text.contains("pass: true"));
    assert!(text.contains("history_max_dev: 0e0"));
}

#[test]
fn tiny_perturbation_single_trial() {
    let dir = TempDir::new().unwrap();
    let text = PRESET.replace("epsilon = 0.01", "epsilon = 1e-9").replace("trials = 20", "trials = 1");
    let o = run(&["stability", &write(&dir, "tiny.cfg", &text)]);
    assert_eq!(o.status.code(), Some(0));
    let ratio: f64 = stdout(&o).lines().find_map(|l| l.strip_prefix("worst_ratio: ")).unwrap().parse().unwrap();
    assert!(ratio < 1.0);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad_kappa = write(&dir, "k.cfg", &PRESET.replace("kappa = 0.45", "kappa = 0.6"));
    let o = run(&["solve", &bad_kappa]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("0 < κ < μ ≤ 1"));

    let unknown = write(&dir, "u.cfg", &format!("{PRESET}solver.speed = 3\n"));
    assert_eq!(run(&["solve", &unknown]).status.code(), Some(2));
    assert_eq!(run(&["solve", dir.path().join("missing.cfg").to_str().unwrap()]).status.code(), Some(2));

    let wrong_l = write(&dir, "l.cfg", &format!("{PRESET}problem.lipschitz = 1e-6\n"));
    let o = run(&["stability", &wrong_l]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("refuted"));

    let capped = write(&dir, "c.cfg", &format!("{PRESET}solver.max_iter = 3\n"));
    assert_eq!(run(&["solve", &capped]).status.code(), Some(3));

    // the base solution is identically zero and b* stops at a tolerance relative to ε,
    // so with a huge ε only the perturbed trials hit the iteration cap
    let text = PRESET.replace("paper_example", "linear(0.5, 0.5)").replace("epsilon = 0.01", "epsilon = 1e8")
        + "problem.history = constant(0)\nsolver.max_iter = 16\n";
    let o = run(&["stability", &write(&dir, "f.cfg", &text)]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
    assert!(stdout(&o).contains("pass: false"));

    let no_block = write(&dir, "n.cfg", &PRESET.lines().filter(|l| !l.starts_with("stability")).collect::<Vec<_>>().join("\n"));
    assert_eq!(run(&["stability", &no_block]).status.code(), Some(2));
}

#[test]
fn mlf_values() {
    let value = |args: &[&str]| -> f64 {
        let o = run(args);
        assert!(o.status.success(), "{args:?}: {}", stderr(&o));
        stdout(&o).trim().parse().unwrap()
    };
    assert_eq!(value(&["mlf", "1", "--", "1"]), std::f64::consts::E);
    assert!((value(&["mlf", "0.5", "--", "-1"]) - 0.427_583_576_155_807).abs() < 1e-10);
    assert!((value(&["mlf", "0.6", "2.5", "0"]) - 0.752_252_778_063_675_1).abs() < 1e-14);
    assert!((value(&["mlf", "0.5", "-1"]) - 0.427_583_576_155_807).abs() < 1e-10);
    let o = run(&["mlf", "1", "--", "1"]);
    assert_eq!(stdout(&o).trim().chars().filter(char::is_ascii_digit).count(), 17);
    assert_eq!(run(&["mlf", "-0.5", "--", "1"]).status.code(), Some(2));
    assert_eq!(run(&["mlf", "0.5", "0", "1"]).status.code(), Some(2));
}

#[test]
fn verify_suites() {
    let o = run(&["verify", "calculus"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count() >= 5);
    let o = run(&["verify", "all", "--fault-gamma", "1e-3"]);
    assert!(!o.status.success());
    assert!(stdout(&o).lines().any(|l| l.starts_with("FAIL") && l.contains("integral of one")));
}
