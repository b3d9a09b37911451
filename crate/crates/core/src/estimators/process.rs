use std::f64::consts::TAU;

use super::channel::{calibrate_channel, remove_channel};
use super::ideal::invert;
use super::{
    displacement_from_square, q2_sum, squeezing_from_ratio, Assumption, EstimateReport, Flag, Readings, SchemeModel,
    MIN_TRANSMITTANCE,
};
use crate::error::{Error, Result};
use crate::gaussian::NoiseChannel;
use crate::interferometer::Intensities;

/// Relative source-strength gap below which the two-source difference is
/// flagged as ill-conditioned.
const MIN_RELATIVE_GAP: f64 = 0.1;

/// Inversion with a known process loss and noise.
pub fn estimate_with_known_process(
    model: &SchemeModel,
    readings: &Readings,
    v: f64,
    process: &NoiseChannel,
) -> Result<EstimateReport> {
    let mut report = invert(model, readings, v, process.transmittance(), process.added_variance())?;
    report.process_transmittance = Some(process.transmittance());
    Ok(report)
}

struct TwoSource {
    phase: f64,
    q: f64,
    t: f64,
    flags: Vec<Flag>,
}

/// `Φ̂`, `q̂`, `T̂` from two rounds with sources `v1 ≠ v2`.
///
/// The energy difference gives `Q = T(q² + 1/q²)`, the pooled interference
/// amplitude gives `P = √T(q + 1/q)`, and `(q + 1/q)² − (q² + 1/q²) = 2`
/// separates them: `T̂ = (P² − Q)/2`.
fn two_source(model: &SchemeModel, v1: f64, r1: &Readings, v2: f64, r2: &Readings) -> Result<TwoSource> {
    model.validate(v1)?;
    model.validate(v2)?;
    let mut flags = Vec::new();
    if matches!(model, SchemeModel::Active { .. }) {
        flags.push(Flag::CorrectedFormula);
    }
    let delta_vs = model.arm_variances(v2).0 - model.arm_variances(v1).0;
    if delta_vs == 0.0 {
        return Err(Error::Degenerate("the two sources have equal strength".into()));
    }
    let delta_v = v2 - v1;
    if delta_v.abs() < MIN_RELATIVE_GAP * v1.max(v2) {
        flags.push(Flag::IllConditioned { delta_v });
    }
    let q_energy = (model.signal_energy(r2, v2) - model.signal_energy(r1, v1)) / delta_vs;
    let (x1, y1) = model.interference_vector(r1, v1);
    let (x2, y2) = model.interference_vector(r2, v2);
    let (x, y) = (x1 + x2, y1 + y2);
    let p = x.hypot(y) / (model.gain(v1) + model.gain(v2));
    let raw = (p * p - q_energy) / 2.0;
    let t = if raw < MIN_TRANSMITTANCE || raw.is_nan() {
        flags.push(Flag::TransmittanceClamped { raw });
        MIN_TRANSMITTANCE
    } else {
        raw
    };
    let q = squeezing_from_ratio(p / t.sqrt(), &mut flags);
    Ok(TwoSource {
        phase: y.atan2(x).rem_euclid(TAU),
        q,
        t,
        flags,
    })
}

/// Process-type loss and noise, handled with two source strengths.
///
/// `Φ̂`, `q̂` and the process transmittance `T̂` need no knowledge of the
/// noise. Displacement and process noise both only add energy, so `d̂`
/// assumes the process noise variance `assumed_v_eps` (1 attributes all
/// excess energy to the displacement); the assumption is recorded.
pub fn estimate_with_process_noise(
    model: &SchemeModel,
    v1: f64,
    r1: &Readings,
    v2: f64,
    r2: &Readings,
    assumed_v_eps: f64,
) -> Result<EstimateReport> {
    let TwoSource { phase, q, t, mut flags } = two_source(model, v1, r1, v2, r2)?;
    let d2 = [(v1, r1), (v2, r2)]
        .iter()
        .map(|(v, r)| {
            let vs = model.arm_variances(*v).0;
            (model.signal_energy(r, *v) - 2.0 * (1.0 - t) * assumed_v_eps - t * q2_sum(q) * vs) / t
        })
        .sum::<f64>()
        / 2.0;
    let d = displacement_from_square(d2, &mut flags);
    Ok(EstimateReport {
        phase,
        squeezing: Some(q),
        displacement: Some(d),
        channel: None,
        process_transmittance: Some(t),
        flags,
        assumptions: vec![Assumption {
            parameter: "process noise variance",
            value: assumed_v_eps,
        }],
    })
}

/// Channel and process errors together: a bypass round with source `cal_v`
/// calibrates the channel, the channel-corrected readings of both source
/// strengths then go through the two-source estimator. `d̂` is withheld.
pub fn estimate_combined(
    model: &SchemeModel,
    bypass: &Intensities,
    cal_v: f64,
    v1: f64,
    r1: &Readings,
    v2: f64,
    r2: &Readings,
) -> Result<EstimateReport> {
    let cal = calibrate_channel(model, bypass, cal_v)?;
    let c1 = remove_channel(model, r1, &cal.estimate);
    let c2 = remove_channel(model, r2, &cal.estimate);
    let TwoSource { phase, q, t, mut flags } = two_source(model, v1, &c1, v2, &c2)?;
    let mut all = cal.flags;
    all.append(&mut flags);
    all.push(Flag::DisplacementUnidentifiable);
    Ok(EstimateReport {
        phase,
        squeezing: Some(q),
        displacement: None,
        channel: Some(cal.estimate),
        process_transmittance: Some(t),
        flags: all,
        assumptions: Vec::new(),
    })
}
