use super::state::{check_modes, GaussianState};
use crate::error::{invalid, Result};

/// Loss and thermal noise: a beam splitter of transmittance `T` coupling the
/// mode to a thermal ancilla of variance `Vε`, with the ancilla discarded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseChannel {
    transmittance: f64,
    noise_variance: f64,
}

impl NoiseChannel {
    pub fn new(transmittance: f64, noise_variance: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&transmittance) {
            return Err(invalid("T", transmittance, "transmittance must lie in [0, 1]"));
        }
        if !(noise_variance >= 1.0 && noise_variance.is_finite()) {
            return Err(invalid("V_eps", noise_variance, "ancilla variance must be at least the vacuum level 1"));
        }
        Ok(Self {
            transmittance,
            noise_variance,
        })
    }

    /// The identity channel.
    pub fn lossless() -> Self {
        Self {
            transmittance: 1.0,
            noise_variance: 1.0,
        }
    }

    pub fn transmittance(&self) -> f64 {
        self.transmittance
    }

    pub fn noise_variance(&self) -> f64 {
        self.noise_variance
    }

    /// Excess photon-budget term `Vε(1 − T)` a mode picks up per quadrature.
    pub fn added_variance(&self) -> f64 {
        self.noise_variance * (1.0 - self.transmittance)
    }
}

/// Sends `mode` of `state` through `channel`: the mode's mean scales by `√T`,
/// its own block becomes `T·Σ + (1−T)·Vε·I` and cross-covariances with other
/// modes scale by `√T`.
pub fn loss_channel(state: &GaussianState, mode: usize, channel: &NoiseChannel) -> Result<GaussianState> {
    check_modes(&[mode], state.modes())?;
    let t = channel.transmittance;
    let g = t.sqrt();
    let mut out = state.clone();
    let (x, p) = (2 * mode, 2 * mode + 1);
    {
        let mean = out.mean_mut();
        mean[x] *= g;
        mean[p] *= g;
    }
    let cov = out.cov_mut();
    let n = cov.nrows();
    for idx in [x, p] {
        for j in 0..n {
            cov[(idx, j)] *= g;
        }
        for i in 0..n {
            cov[(i, idx)] *= g;
        }
    }
    let added = channel.added_variance();
    cov[(x, x)] += added;
    cov[(p, p)] += added;
    Ok(out)
}
