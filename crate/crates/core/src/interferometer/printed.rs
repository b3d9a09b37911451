//! Reference forms of the expectation formulas, kept for auditing against
//! the oracle. Where a printed form disagrees with the
//! oracle, the implementation in [`super::expected`] uses the corrected form.

use super::expected::passive_arm_variances;
use super::params::ProcessParams;

/// Direct scheme, printed with a `−1` offset (the oracle gives `−1/2`).
pub fn direct(v: f64, q: f64, d: f64) -> f64 {
    ((q * q + 1.0 / (q * q)) * v + d * d) / 4.0 - 1.0
}

/// Beam-splitter scheme, ideal.
pub fn passive(p: &ProcessParams, v: f64, mu: f64, phi_ref: f64) -> (f64, f64) {
    let (vs, vr) = passive_arm_variances(v, mu);
    let minus = (v - 1.0) / 2.0 * (mu * (1.0 - mu)).sqrt() * p.q_sum() * (p.phi() - phi_ref).cos();
    let plus = (p.q2_sum() * vs + 2.0 * vr + p.d() * p.d()) / 4.0 - 1.0;
    (minus, plus)
}

/// Arm variances of the amplifier scheme as printed:
/// `V_S = cosh(r)V + sinh(r)`, `V_R = sinh(r)V + cosh(r)`.
pub fn active_arm_variances(v: f64, r: f64) -> (f64, f64) {
    (r.cosh() * v + r.sinh(), r.sinh() * v + r.cosh())
}

/// Amplifier scheme, ideal, as `(⟨i₋⟩, baseline of ⟨i₊⟩, interference)`.
pub fn active_terms(p: &ProcessParams, v: f64, r1: f64, r2: f64, phi_ref: f64) -> (f64, f64, f64) {
    let (vs, vr) = active_arm_variances(v, r1);
    let x = p.q2_sum() * vs + p.d() * p.d();
    let minus = (x - 2.0 * vr) / 4.0;
    let baseline = (2.0 * r2).cosh() * (x + 2.0 * vr) / 4.0 - 1.0;
    let interference = (2.0 * r2).sinh() * (2.0 * r1).sinh() * (v + 1.0) / 4.0 * p.q_sum() * (p.phi() + phi_ref).cos();
    (minus, baseline, interference)
}

/// Calibration-round sum as printed: `T·V/2 + V_ε(1−T) − 1`.
pub fn calibration_plus(v: f64, t: f64, v_eps: f64) -> f64 {
    t * v / 2.0 + v_eps * (1.0 - t) - 1.0
}
