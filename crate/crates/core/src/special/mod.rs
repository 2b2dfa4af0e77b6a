//! Gamma and Mittag-Leffler functions.

mod contour;
pub mod gamma;
pub mod mittag_leffler;

pub use gamma::{gamma, ln_gamma, rgamma};
pub use mittag_leffler::{ml1, ml2, MittagLeffler, MlParams};
