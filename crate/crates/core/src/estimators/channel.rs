use super::ideal::estimate_ideal;
use super::{EstimateReport, Flag, Readings, SchemeModel, MIN_TRANSMITTANCE};
use crate::error::Result;
use crate::interferometer::Intensities;

/// Estimated (or known) loss and noise of the channel acting on both arms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelEstimate {
    pub transmittance: f64,
    pub noise_variance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelCalibration {
    pub estimate: ChannelEstimate,
    pub flags: Vec<Flag>,
}

/// Estimates `(T, V_ε)` from a bypass round at reference phase 0.
///
/// For the beam-splitter scheme `T̂ = ⟨i₋⟩/((V − 1)√(μ(1−μ)))` and
/// `V̂_ε = (⟨i₊⟩ + 1 − T̂(V + 1)/2)/(1 − T̂)`. `T̂` is clamped into `(0, 1]`.
/// At `T̂ = 1` the noise is invisible; it is then reported as 1 and flagged.
pub fn calibrate_channel(model: &SchemeModel, bypass: &Intensities, v: f64) -> Result<ChannelCalibration> {
    model.validate(v)?;
    let ideal = model.bypass_ideal(v);
    let mut flags = Vec::new();
    let raw = bypass.minus / ideal.minus;
    let t = if !(MIN_TRANSMITTANCE..=1.0).contains(&raw) {
        flags.push(Flag::TransmittanceClamped { raw });
        if raw > 1.0 {
            1.0
        } else {
            MIN_TRANSMITTANCE
        }
    } else {
        raw
    };
    let noise_variance = if 1.0 - t < 1e-9 {
        flags.push(Flag::NoiseIndeterminate);
        1.0
    } else {
        (bypass.plus + 1.0 - t * (ideal.plus + 1.0)) / (model.noise_weight() * (1.0 - t))
    };
    Ok(ChannelCalibration {
        estimate: ChannelEstimate {
            transmittance: t,
            noise_variance,
        },
        flags,
    })
}

/// Readings as an ideal channel would have produced them.
pub(crate) fn remove_channel(model: &SchemeModel, r: &Readings, ch: &ChannelEstimate) -> Readings {
    let t = ch.transmittance;
    let added = model.noise_weight() * (1.0 - t) * ch.noise_variance;
    r.map(|m| m / t, |p| (p + 1.0 - added) / t - 1.0)
}

/// Corrects the readings for a channel of loss `T̂` and noise `V̂_ε`, then
/// inverts them as in the ideal case.
pub fn estimate_with_channel_noise(
    model: &SchemeModel,
    readings: &Readings,
    channel: &ChannelEstimate,
    v: f64,
) -> Result<EstimateReport> {
    let mut report = estimate_ideal(model, &remove_channel(model, readings, channel), v)?;
    report.channel = Some(*channel);
    Ok(report)
}
