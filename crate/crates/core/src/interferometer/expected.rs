//! Closed-form phase-averaged detector intensities.

use super::params::ProcessParams;
use super::scheme::NoiseSpec;
use super::Intensities;
use crate::error::{invalid, Error, Result};

fn check_source(v: f64) -> Result<()> {
    if !(v >= 1.0 && v.is_finite()) {
        return Err(invalid("V", v, "source second moment must be finite and at least 1"));
    }
    Ok(())
}

fn check_mu(mu: f64) -> Result<()> {
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::Degenerate(format!(
            "beam-splitter parameter mu = {mu} leaves one arm empty, no interference"
        )));
    }
    Ok(())
}

fn check_gain(name: &'static str, r: f64) -> Result<()> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(invalid(name, r, "amplifier gain must be finite and non-negative"));
    }
    Ok(())
}

/// Signal and reference variances after a beam splitter `μ`:
/// `V_S = μV + 1 − μ`, `V_R = μ + V − μV`.
pub fn passive_arm_variances(v: f64, mu: f64) -> (f64, f64) {
    (mu * v + 1.0 - mu, mu + v - mu * v)
}

/// Signal and reference variances after an amplifier of gain `r`:
/// `V_S = V cosh²r + sinh²r`, `V_R = V sinh²r + cosh²r`.
pub fn active_arm_variances(v: f64, r: f64) -> (f64, f64) {
    let (c2, s2) = (r.cosh().powi(2), r.sinh().powi(2));
    (v * c2 + s2, v * s2 + c2)
}

/// Mean photon number when the process acts on the source alone:
/// `((q² + 1/q²)V + d²)/4 − 1/2`.
pub fn expected_direct(v: f64, q: f64, d: f64) -> Result<f64> {
    check_source(v)?;
    if !(q > 0.0 && q.is_finite()) {
        return Err(invalid("q", q, "must be finite and positive"));
    }
    Ok(((q * q + 1.0 / (q * q)) * v + d * d) / 4.0 - 0.5)
}

/// Second-moment sum `Vₓ + Vₚ + |m|²` of the signal arm after the process and
/// its noise, for signal variance `vs`.
fn processed_signal(p: &ProcessParams, vs: f64, noise: &NoiseSpec) -> f64 {
    let proc = noise.process_or_ideal();
    let t = proc.transmittance();
    t * (p.q2_sum() * vs + p.d() * p.d()) + 2.0 * proc.added_variance()
}

/// Expected difference and sum of the two detectors for the beam-splitter
/// scheme with reference phase `phi_ref`.
///
/// With channel transmittance `T_c` and process transmittance `T_p`:
///
/// - `⟨i₋⟩ = T_c √T_p · (V−1)/2 · √(μ(1−μ)) · (q + 1/q) · cos(Φ − φ_ref)`
/// - `⟨i₊⟩ = T_c·(T_p·((q²+1/q²)V_S + d²) + 2(1−T_p)V_εp + 2V_R)/4 + (1−T_c)V_εc − 1`
///
/// both multiplied by the detector efficiency.
pub fn expected_passive(p: &ProcessParams, v: f64, mu: f64, phi_ref: f64, noise: &NoiseSpec) -> Result<Intensities> {
    check_source(v)?;
    check_mu(mu)?;
    let (vs, vr) = passive_arm_variances(v, mu);
    let ch = noise.channel_or_ideal();
    let tc = ch.transmittance();
    let tp = noise.process_or_ideal().transmittance();
    let k = (mu * (1.0 - mu)).sqrt();
    let minus = tc * tp.sqrt() * (v - 1.0) / 2.0 * k * p.q_sum() * (p.phi() - phi_ref).cos();
    let plus = tc * (processed_signal(p, vs, noise) + 2.0 * vr) / 4.0 + ch.added_variance() - 1.0;
    Ok(Intensities {
        minus: noise.efficiency * minus,
        plus: noise.efficiency * plus,
    })
}

/// Bypass round of the beam-splitter scheme: the process and its noise are
/// absent, only the channel acts.
pub fn expected_passive_calibration(v: f64, mu: f64, phi_ref: f64, noise: &NoiseSpec) -> Result<Intensities> {
    expected_passive(&ProcessParams::identity(), v, mu, phi_ref, &noise.without_process())
}

/// The three pieces of the amplifier scheme's expectations, before the
/// detector efficiency is applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActiveTerms {
    /// `⟨i₋⟩`.
    pub minus: f64,
    /// Phase-independent part of `⟨i₊⟩`.
    pub plus_baseline: f64,
    /// Interference part of `⟨i₊⟩`.
    pub interference: f64,
}

impl ActiveTerms {
    pub fn plus(&self) -> f64 {
        self.plus_baseline + self.interference
    }
}

/// Expected intensities of the two-amplifier scheme, split into terms.
///
/// With `S = T_c(T_p X + 2(1−T_p)V_εp) + 2(1−T_c)V_εc`,
/// `R = 2T_c V_R + 2(1−T_c)V_εc`, `X = (q²+1/q²)V_S + d²`:
///
/// - `⟨i₋⟩ = (S − R)/4`
/// - baseline `cosh(2r₂)(S + R)/4 − 1`
/// - interference `sinh(2r₂) sinh(2r₁) T_c √T_p (V+1)/4 (q + 1/q) cos(Φ + φ_ref)`
pub fn active_terms(p: &ProcessParams, v: f64, r1: f64, r2: f64, phi_ref: f64, noise: &NoiseSpec) -> Result<ActiveTerms> {
    check_source(v)?;
    check_gain("r1", r1)?;
    check_gain("r2", r2)?;
    let (vs, vr) = active_arm_variances(v, r1);
    let ch = noise.channel_or_ideal();
    let tc = ch.transmittance();
    let tp = noise.process_or_ideal().transmittance();
    let s = tc * processed_signal(p, vs, noise) + 2.0 * ch.added_variance();
    let r = tc * 2.0 * vr + 2.0 * ch.added_variance();
    let interference = (2.0 * r2).sinh() * (2.0 * r1).sinh() * tc * tp.sqrt() * (v + 1.0) / 4.0
        * p.q_sum()
        * (p.phi() + phi_ref).cos();
    Ok(ActiveTerms {
        minus: (s - r) / 4.0,
        plus_baseline: (2.0 * r2).cosh() * (s + r) / 4.0 - 1.0,
        interference,
    })
}

/// Expected difference and sum for the two-amplifier scheme.
pub fn expected_active(p: &ProcessParams, v: f64, r1: f64, r2: f64, phi_ref: f64, noise: &NoiseSpec) -> Result<Intensities> {
    let t = active_terms(p, v, r1, r2, phi_ref, noise)?;
    Ok(Intensities {
        minus: noise.efficiency * t.minus,
        plus: noise.efficiency * t.plus(),
    })
}

/// Bypass round of the amplifier scheme.
pub fn expected_active_calibration(v: f64, r1: f64, r2: f64, phi_ref: f64, noise: &NoiseSpec) -> Result<Intensities> {
    expected_active(&ProcessParams::identity(), v, r1, r2, phi_ref, &noise.without_process())
}
