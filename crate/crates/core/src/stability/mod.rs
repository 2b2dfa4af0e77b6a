//! Ulam-Hyers-Mittag-Leffler stability checks.

mod majorant;
mod perturbation;
mod uhml;

pub use majorant::{gronwall_majorant, majorant_fixed_point, MajorantOperator};
pub use perturbation::{admissible_perturbation, Perturbation, Waveform};
pub use uhml::{
    perturbed_solve, trial_waveform, uhml_constant, verify_lhus, verify_uhml, LhusCheck, StabilityReport, TrialOutcome,
    CERTIFICATION_SLACK,
};
