//! The two-arm interferometric scheme: configuration, closed-form expected
//! intensities, a quadrature oracle for them and the shot simulator.
//!
//! Mode 0 is the signal arm (source input, process), mode 1 the reference arm
//! (vacuum input, reference phase). With a balanced recombining beam
//! splitter the difference signal is `∝ cos(Φ − φ_ref)`; with two
//! phase-locked amplifiers the interference moves into the sum as
//! `∝ cos(Φ + φ_ref)`.

mod chain;
mod expected;
mod oracle;
mod params;
mod plan;
pub mod printed;
mod scheme;
mod simulate;

pub use chain::{detector_intensities, output_state};
pub use expected::{
    active_arm_variances, active_terms, expected_active, expected_active_calibration, expected_direct,
    expected_passive, expected_passive_calibration, passive_arm_variances, ActiveTerms,
};
pub use oracle::{oracle_calibration, oracle_expected, ORACLE_NODES, ORACLE_TOL};
pub use params::ProcessParams;
pub use plan::{ExperimentPlan, Setting, SettingStats, ShotStats};
pub use scheme::{Coupler, Layout, NoiseSpec, SchemeConfig};
pub use simulate::{simulate_blocks, simulate_shots, ShotSimulator};

/// Phase-averaged (or sample-mean) detector difference and sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Intensities {
    pub minus: f64,
    pub plus: f64,
}
