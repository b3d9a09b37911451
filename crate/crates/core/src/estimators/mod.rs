//! Moment estimators: invert mean detector readings into `(Φ̂, q̂, d̂)`.
//!
//! Every estimator is a pure function of [`Readings`] (mean difference and
//! sum at reference phases `0` and `π/2`) and known setup constants. The
//! optical design enters through [`SchemeModel`], so each pipeline works for
//! both the beam-splitter and the amplifier scheme.
//!
//! Finite-sample readings can fall outside the model's range. Those cases are
//! clamped and recorded in [`EstimateReport::flags`] rather than reported as
//! errors, so Monte-Carlo statistics include them.

mod channel;
mod efficiency;
mod ideal;
mod model;
mod process;
mod readings;

pub use channel::{calibrate_channel, estimate_with_channel_noise, ChannelCalibration, ChannelEstimate};
pub use efficiency::{correct_efficiency, correct_efficiency_all};
pub use ideal::{estimate_ideal, estimate_ideal_active, estimate_ideal_passive};
pub use model::SchemeModel;
pub use process::{estimate_combined, estimate_with_known_process, estimate_with_process_noise};
pub use readings::Readings;

use std::fmt;

/// Smallest transmittance an estimate is clamped to.
pub const MIN_TRANSMITTANCE: f64 = 1e-6;

/// Diagnostic conditions raised while estimating.
#[derive(Debug, Clone, PartialEq)]
pub enum Flag {
    /// The amplitude ratio `c` fell below 2; `q̂` was set to 1.
    SqueezingClamped { c: f64 },
    /// The displacement radicand was negative; `d̂` was set to 0.
    DisplacementClamped { radicand: f64 },
    /// A transmittance estimate left `(0, 1]` and was clamped.
    TransmittanceClamped { raw: f64 },
    /// Lossless channel: the ancilla noise cannot be seen and defaults to 1.
    NoiseIndeterminate,
    /// The two sources are too close in strength for a stable difference.
    IllConditioned { delta_v: f64 },
    /// Amplifier arm variances follow the moment propagation
    /// (`V cosh²r + sinh²r`) rather than the printed `cosh(r)V + sinh(r)`.
    CorrectedFormula,
    /// Displacement and process noise cannot be separated; `d̂` is withheld.
    DisplacementUnidentifiable,
}

impl Flag {
    /// Whether the flag marks a clamped estimate.
    pub fn is_clamp(&self) -> bool {
        matches!(
            self,
            Flag::SqueezingClamped { .. } | Flag::DisplacementClamped { .. } | Flag::TransmittanceClamped { .. }
        )
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flag::SqueezingClamped { c } => write!(f, "c = {c} < 2, q clamped to 1"),
            Flag::DisplacementClamped { radicand } => write!(f, "d radicand {radicand} < 0, d clamped to 0"),
            Flag::TransmittanceClamped { raw } => write!(f, "transmittance estimate {raw} clamped"),
            Flag::NoiseIndeterminate => write!(f, "lossless channel, noise variance indeterminate (set to 1)"),
            Flag::IllConditioned { delta_v } => write!(f, "source strengths differ by only {delta_v}"),
            Flag::CorrectedFormula => write!(f, "amplifier arm variances from moment propagation"),
            Flag::DisplacementUnidentifiable => write!(f, "displacement not identifiable alongside process noise"),
        }
    }
}

/// A nuisance value fixed by assumption rather than estimated.
#[derive(Debug, Clone, PartialEq)]
pub struct Assumption {
    pub parameter: &'static str,
    pub value: f64,
}

/// Output of one estimation pipeline run.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    /// `Φ̂ ∈ [0, 2π)`.
    pub phase: f64,
    /// `q̂ ≥ 1`.
    pub squeezing: Option<f64>,
    /// `d̂ ≥ 0`.
    pub displacement: Option<f64>,
    /// Channel loss and noise used for correction, if any.
    pub channel: Option<ChannelEstimate>,
    /// Transmittance inside the process, if estimated.
    pub process_transmittance: Option<f64>,
    pub flags: Vec<Flag>,
    pub assumptions: Vec<Assumption>,
}

impl EstimateReport {
    pub fn clamped(&self) -> bool {
        self.flags.iter().any(Flag::is_clamp)
    }
}

/// Root `q ≥ 1` of `q + 1/q = c`.
pub(crate) fn squeezing_from_ratio(c: f64, flags: &mut Vec<Flag>) -> f64 {
    if c < 2.0 {
        flags.push(Flag::SqueezingClamped { c });
        1.0
    } else {
        (c + (c * c - 4.0).sqrt()) / 2.0
    }
}

pub(crate) fn displacement_from_square(d2: f64, flags: &mut Vec<Flag>) -> f64 {
    if d2 < 0.0 {
        flags.push(Flag::DisplacementClamped { radicand: d2 });
        0.0
    } else {
        d2.sqrt()
    }
}

pub(crate) fn q2_sum(q: f64) -> f64 {
    q * q + 1.0 / (q * q)
}
