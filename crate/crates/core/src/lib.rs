//! Numerics for multi-term fractional delay equations with Φ-Caputo derivatives.
//!
//! The crate is organised bottom-up: [`special`] (gamma, Mittag-Leffler), [`phi`] and
//! [`calculus`] (Φ-fractional operators on grids), [`laplace`] (generalized Laplace
//! transform and convolution), [`solver`] (Volterra formulation, Picard and marching
//! solvers) and [`stability`] (Ulam-Hyers-Mittag-Leffler checks).

// `!(x > 0.0)` is used on purpose so NaN is rejected too; tabulated constants keep
// their published digits.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod calculus;
pub mod config;
pub mod error;
pub mod grid;
pub mod laplace;
pub mod phi;
pub mod quadrature;
pub mod solver;
pub mod special;
pub mod stability;
pub mod verify;

pub use error::{Error, Result};
