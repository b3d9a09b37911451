use std::f64::consts::TAU;

use super::{displacement_from_square, q2_sum, squeezing_from_ratio, EstimateReport, Flag, Readings, SchemeModel};
use crate::error::Result;

/// Inversion with a known process transmittance `t` and added variance
/// `added = (1 − T)V_ε`.
pub(crate) fn invert(model: &SchemeModel, r: &Readings, v: f64, t: f64, added: f64) -> Result<EstimateReport> {
    model.validate(v)?;
    let mut flags = Vec::new();
    if matches!(model, SchemeModel::Active { .. }) {
        flags.push(Flag::CorrectedFormula);
    }
    let (x, y) = model.interference_vector(r, v);
    let c = x.hypot(y) / (model.gain(v) * t.sqrt());
    let q = squeezing_from_ratio(c, &mut flags);
    let (vs, _) = model.arm_variances(v);
    let energy = (model.signal_energy(r, v) - 2.0 * added) / t;
    let d = displacement_from_square(energy - q2_sum(q) * vs, &mut flags);
    Ok(EstimateReport {
        phase: y.atan2(x).rem_euclid(TAU),
        squeezing: Some(q),
        displacement: Some(d),
        channel: None,
        process_transmittance: None,
        flags,
        assumptions: Vec::new(),
    })
}

/// Estimates `(Φ, q, d)` assuming a lossless, noiseless setup.
pub fn estimate_ideal(model: &SchemeModel, readings: &Readings, v: f64) -> Result<EstimateReport> {
    invert(model, readings, v, 1.0, 0.0)
}

/// Beam-splitter scheme:
/// `Φ̂ = atan2(⟨i₋⟩_{π/2}, ⟨i₋⟩_0)`,
/// `q̂ = (c + √(c² − 4))/2` with `c = 2·|(⟨i₋⟩_0, ⟨i₋⟩_{π/2})| / (√(μ(1−μ))(V − 1))`,
/// `d̂ = √(4⟨i₊⟩ + 4 − (q̂² + 1/q̂²)V_S − 2V_R)` with `⟨i₊⟩` pooled over both
/// phases.
pub fn estimate_ideal_passive(readings: &Readings, v: f64, mu: f64) -> Result<EstimateReport> {
    estimate_ideal(&SchemeModel::Passive { mu }, readings, v)
}

/// Amplifier scheme with equal gains `r`. `⟨i₋⟩` gives
/// `X = (q² + 1/q²)V_S + d²`; the residuals of `⟨i₊⟩` around
/// `cosh(2r)(X + 2V_R)/4 − 1` give the interference vector.
pub fn estimate_ideal_active(readings: &Readings, v: f64, r: f64) -> Result<EstimateReport> {
    estimate_ideal(&SchemeModel::Active { r1: r, r2: r }, readings, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn phase_of_pure_cosine_is_zero() {
        let r = Readings {
            minus_0: 10.0,
            minus_90: 0.0,
            plus_0: 40.0,
            plus_90: 40.0,
        };
        assert_eq!(estimate_ideal_passive(&r, 75.0, 0.3).unwrap().phase, 0.0);
    }

    #[test]
    fn boundary_ratio_gives_unit_squeezing() {
        // c = 2 exactly: amplitude equals (V − 1)√(μ(1−μ)).
        let v = 75.0;
        let mu = 0.5;
        let r = Readings {
            minus_0: (v - 1.0) * 0.5,
            minus_90: 0.0,
            plus_0: 40.0,
            plus_90: 40.0,
        };
        let rep = estimate_ideal_passive(&r, v, mu).unwrap();
        assert_eq!(rep.squeezing, Some(1.0));
        assert!(!rep.flags.iter().any(|f| matches!(f, Flag::SqueezingClamped { .. })));
    }

    #[test]
    fn degenerate_setups_are_errors() {
        let r = Readings {
            minus_0: 1.0,
            minus_90: 0.0,
            plus_0: 1.0,
            plus_90: 1.0,
        };
        assert!(matches!(estimate_ideal_passive(&r, 1.0, 0.3), Err(Error::Degenerate(_))));
        assert!(matches!(estimate_ideal_passive(&r, 5.0, 0.0), Err(Error::Degenerate(_))));
        assert!(matches!(estimate_ideal_active(&r, 5.0, 0.0), Err(Error::Degenerate(_))));
    }

    #[test]
    fn clamps_are_flagged() {
        let r = Readings {
            minus_0: 0.1,
            minus_90: 0.0,
            plus_0: -1.0,
            plus_90: -1.0,
        };
        let rep = estimate_ideal_passive(&r, 75.0, 0.3).unwrap();
        assert_eq!(rep.squeezing, Some(1.0));
        assert_eq!(rep.displacement, Some(0.0));
        assert!(rep.clamped());
        assert_eq!(rep.flags.len(), 2);
    }
}
