use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain an operation accepts.
    #[error("domain error: {0}")]
    Domain(String),
    /// A run configuration could not be read or is invalid; the message names the field.
    #[error("config error: {0}")]
    Config(String),
    /// The result is not representable as a finite `f64`.
    #[error("overflow: {0}")]
    Overflow(String),
    /// The requested accuracy could not be certified.
    #[error("accuracy error: {0}")]
    Accuracy(String),
    /// A fixed-point iteration stopped at its cap without meeting the tolerance.
    #[error("no convergence after {iterations} iterations (residual {residual:e}){}", node_suffix(.node))]
    NonConvergence {
        iterations: usize,
        residual: f64,
        /// Grid node at which a sequential solve stalled, if any.
        node: Option<usize>,
        /// Residual after each iteration.
        history: Vec<f64>,
    },
}

fn node_suffix(node: &Option<usize>) -> String {
    match node {
        Some(i) => format!(" at node {i}"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
