use crate::error::{invalid, Error, Result};
use crate::interferometer::{active_arm_variances, passive_arm_variances, Intensities};

use super::Readings;

/// How the optical design maps the source and process onto the readings.
///
/// Both designs share one structure: an interference vector of length
/// `gain(V)·√T_p·(q + 1/q)` pointing along `Φ`, and a signal-arm energy
/// `T_p·((q² + 1/q²)V_S + d²) + 2(1 − T_p)V_εp` that can be read off the
/// phase-independent parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchemeModel {
    /// Beam splitter `μ`, balanced recombining beam splitter.
    Passive { mu: f64 },
    /// Phase-locked amplifiers with gains `r1` and `r2`.
    Active { r1: f64, r2: f64 },
}

impl SchemeModel {
    pub fn validate(&self, v: f64) -> Result<()> {
        if !(v.is_finite() && v > 1.0) {
            return Err(Error::Degenerate(format!(
                "source second moment V = {v} carries no photons to interfere"
            )));
        }
        match *self {
            SchemeModel::Passive { mu } if !(mu > 0.0 && mu < 1.0) => Err(Error::Degenerate(format!(
                "beam-splitter parameter mu = {mu} leaves one arm empty"
            ))),
            SchemeModel::Active { r1, r2 } if !(r1 >= 0.0 && r2 >= 0.0 && r1.is_finite() && r2.is_finite()) => {
                Err(invalid("r", r1.min(r2), "amplifier gains must be finite and non-negative"))
            }
            SchemeModel::Active { r1, r2 } if r1 == 0.0 || r2 == 0.0 => Err(Error::Degenerate(
                "an amplifier with zero gain couples nothing, no interference".into(),
            )),
            _ => Ok(()),
        }
    }

    /// `(V_S, V_R)`.
    pub fn arm_variances(&self, v: f64) -> (f64, f64) {
        match *self {
            SchemeModel::Passive { mu } => passive_arm_variances(v, mu),
            SchemeModel::Active { r1, .. } => active_arm_variances(v, r1),
        }
    }

    /// Interference amplitude per unit `q + 1/q`.
    pub fn gain(&self, v: f64) -> f64 {
        match *self {
            SchemeModel::Passive { mu } => (v - 1.0) / 2.0 * (mu * (1.0 - mu)).sqrt(),
            SchemeModel::Active { r1, r2 } => (2.0 * r1).sinh() * (2.0 * r2).sinh() * (v + 1.0) / 4.0,
        }
    }

    /// Weight of channel noise in the phase-independent sum.
    pub(crate) fn noise_weight(&self) -> f64 {
        match *self {
            SchemeModel::Passive { .. } => 1.0,
            SchemeModel::Active { r2, .. } => (2.0 * r2).cosh(),
        }
    }

    /// Second-moment sum of the signal arm after the process, from readings
    /// taken through an ideal channel.
    pub fn signal_energy(&self, r: &Readings, v: f64) -> f64 {
        let (_, vr) = self.arm_variances(v);
        match self {
            SchemeModel::Passive { .. } => 4.0 * r.mean_plus() + 4.0 - 2.0 * vr,
            SchemeModel::Active { .. } => 4.0 * r.mean_minus() + 2.0 * vr,
        }
    }

    /// `(A cos Φ, A sin Φ)` with `A = gain(V)·√T_p·(q + 1/q)`.
    pub fn interference_vector(&self, r: &Readings, v: f64) -> (f64, f64) {
        match *self {
            SchemeModel::Passive { .. } => (r.minus_0, r.minus_90),
            SchemeModel::Active { r2, .. } => {
                let (_, vr) = self.arm_variances(v);
                let baseline = (2.0 * r2).cosh() * (self.signal_energy(r, v) + 2.0 * vr) / 4.0 - 1.0;
                (r.plus_0 - baseline, -(r.plus_90 - baseline))
            }
        }
    }

    /// Ideal-channel bypass readings at reference phase 0.
    pub(crate) fn bypass_ideal(&self, v: f64) -> Intensities {
        let (vs, vr) = self.arm_variances(v);
        match *self {
            SchemeModel::Passive { .. } => Intensities {
                minus: 2.0 * self.gain(v),
                plus: (2.0 * vs + 2.0 * vr) / 4.0 - 1.0,
            },
            SchemeModel::Active { r2, .. } => Intensities {
                minus: (2.0 * vs - 2.0 * vr) / 4.0,
                plus: (2.0 * r2).cosh() * (2.0 * vs + 2.0 * vr) / 4.0 + 2.0 * self.gain(v) - 1.0,
            },
        }
    }
}
