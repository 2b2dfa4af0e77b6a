//! Volterra formulation of the delay problem and its fixed-point solvers.

mod engine;
mod kernel;
mod problem;
mod trajectory;

pub use engine::{linear_solution, PicardOutcome, Solver};
pub use kernel::{kernel, MlKernel};
pub use problem::{contraction_certificate, worked_example_rhs, ProblemSpec, Rhs, ScalarFn, SolverConfig};
pub use trajectory::{bielecki_norm, bielecki_weights, Trajectory};
