//! The optical chain of a scheme as an ordered list of stages.

use nalgebra::{DMatrix, DVector};

use super::params::ProcessParams;
use super::scheme::{Coupler, Layout, SchemeConfig};
use super::Intensities;
use crate::error::Result;
use crate::gaussian::{
    apply, displaced_thermal, loss_channel, mean_photon, vacuum, Element, GaussianState, NoiseChannel, Source,
    SymplecticTransform,
};

#[derive(Debug, Clone)]
pub(crate) enum Stage {
    Unitary { transform: SymplecticTransform, modes: Vec<usize> },
    Channel { mode: usize, channel: NoiseChannel },
}

impl Stage {
    fn unitary(element: Element, modes: &[usize]) -> Result<Self> {
        Ok(Stage::Unitary {
            transform: element.transform()?,
            modes: modes.to_vec(),
        })
    }

    pub(crate) fn act(&self, state: &GaussianState) -> Result<GaussianState> {
        match self {
            Stage::Unitary { transform, modes } => apply(transform, state, modes),
            Stage::Channel { mode, channel } => loss_channel(state, *mode, channel),
        }
    }

    /// The stage as an affine Gaussian map `(X, Y, c)` on all `total` modes:
    /// mean `↦ X·m + c`, covariance `↦ X·Σ·Xᵀ + Y`.
    pub(crate) fn affine(&self, total: usize) -> Result<AffineMap> {
        let n = 2 * total;
        match self {
            Stage::Unitary { transform, modes } => {
                let t = transform.embed(modes, total)?;
                Ok(AffineMap {
                    x: t.matrix().clone(),
                    y: DMatrix::zeros(n, n),
                    c: t.shift().clone(),
                })
            }
            Stage::Channel { mode, channel } => {
                let mut x = DMatrix::identity(n, n);
                let mut y = DMatrix::zeros(n, n);
                for i in [2 * mode, 2 * mode + 1] {
                    x[(i, i)] = channel.transmittance().sqrt();
                    y[(i, i)] = channel.added_variance();
                }
                Ok(AffineMap {
                    x,
                    y,
                    c: DVector::zeros(n),
                })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct AffineMap {
    pub x: DMatrix<f64>,
    pub y: DMatrix<f64>,
    pub c: DVector<f64>,
}

impl AffineMap {
    pub(crate) fn identity(total: usize) -> Self {
        let n = 2 * total;
        Self {
            x: DMatrix::identity(n, n),
            y: DMatrix::zeros(n, n),
            c: DVector::zeros(n),
        }
    }

    /// `next ∘ self`.
    pub(crate) fn then(&self, next: &AffineMap) -> AffineMap {
        AffineMap {
            x: &next.x * &self.x,
            y: &next.x * &self.y * next.x.transpose() + &next.y,
            c: &next.x * &self.c + &next.c,
        }
    }
}

/// Stages between the couplers: process (with its noise), channel noise on
/// every arm, reference phase. `process = None` bypasses the process and its
/// noise.
pub(crate) fn middle_stages(scheme: &SchemeConfig, process: Option<&ProcessParams>, phi_ref: f64) -> Result<Vec<Stage>> {
    let mut stages = Vec::new();
    if let Some(p) = process {
        stages.push(Stage::Unitary {
            transform: p.transform()?,
            modes: vec![0],
        });
        if let Some(channel) = scheme.noise.process {
            stages.push(Stage::Channel { mode: 0, channel });
        }
    }
    if let Some(channel) = scheme.noise.channel {
        for mode in 0..scheme.modes() {
            stages.push(Stage::Channel { mode, channel });
        }
    }
    if scheme.modes() == 2 {
        stages.push(Stage::unitary(Element::PhaseShift { phi: phi_ref }, &[1])?);
    }
    Ok(stages)
}

pub(crate) fn splitter_stage(coupler: Coupler, pump: f64) -> Result<Stage> {
    match coupler {
        Coupler::BeamSplitter { mu } => Stage::unitary(Element::BeamSplitter { mu }, &[0, 1]),
        Coupler::Opa { r } => Stage::unitary(Element::TwoModeSqueezer { r, phi: pump }, &[0, 1]),
    }
}

/// The balanced recombining beam splitter takes the reference port first so
/// that the difference signal follows `+cos(Φ − φ_ref)`.
pub(crate) fn combiner_stage(coupler: Coupler, pump: f64) -> Result<Stage> {
    match coupler {
        Coupler::BeamSplitter { mu } => Stage::unitary(Element::BeamSplitter { mu }, &[1, 0]),
        Coupler::Opa { r } => Stage::unitary(Element::TwoModeSqueezer { r, phi: pump }, &[0, 1]),
    }
}

/// Full stage list for one pump phase.
pub(crate) fn stages(scheme: &SchemeConfig, process: Option<&ProcessParams>, phi_ref: f64, pump: f64) -> Result<Vec<Stage>> {
    match scheme.layout {
        Layout::Direct => middle_stages(scheme, process, phi_ref),
        Layout::Interferometer { splitter, combiner } => {
            let mut all = vec![splitter_stage(splitter, pump)?];
            all.extend(middle_stages(scheme, process, phi_ref)?);
            all.push(combiner_stage(combiner, pump)?);
            Ok(all)
        }
    }
}

/// Source on mode 0, vacuum on the reference mode if there is one.
pub(crate) fn input_state(scheme: &SchemeConfig, source: &Source, theta: f64) -> Result<GaussianState> {
    let s = displaced_thermal(source, theta);
    Ok(match scheme.layout {
        Layout::Direct => s,
        Layout::Interferometer { .. } => s.product(&vacuum(1)?),
    })
}

/// State reaching the detectors for fixed source phase `theta` and pump
/// phase `pump`. `process = None` is a bypass (calibration) round.
pub fn output_state(
    scheme: &SchemeConfig,
    process: Option<&ProcessParams>,
    source: &Source,
    theta: f64,
    phi_ref: f64,
    pump: f64,
) -> Result<GaussianState> {
    let mut state = input_state(scheme, source, theta)?;
    for stage in stages(scheme, process, phi_ref, pump)? {
        state = stage.act(&state)?;
    }
    Ok(state)
}

/// Detector readings of a state: difference and sum for two detectors, the
/// single reading twice for the direct layout. Scaled by the efficiency.
pub fn detector_intensities(scheme: &SchemeConfig, state: &GaussianState) -> Result<Intensities> {
    let eta = scheme.noise.efficiency;
    match scheme.layout {
        Layout::Direct => {
            let i = eta * mean_photon(state, 0)?;
            Ok(Intensities { minus: i, plus: i })
        }
        Layout::Interferometer { .. } => {
            let a = eta * mean_photon(state, 0)?;
            let b = eta * mean_photon(state, 1)?;
            Ok(Intensities {
                minus: a - b,
                plus: a + b,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interferometer::NoiseSpec;

    #[test]
    fn affine_composition_matches_stepwise_propagation() {
        let noise = NoiseSpec::none().with_channel(0.8, 1.2).unwrap().with_process(0.9, 1.1).unwrap();
        let scheme = SchemeConfig::active(0.4, 0.6).unwrap().with_noise(noise);
        let p = ProcessParams::new(1.4, 0.7, 1.2).unwrap().with_directions(0.3, 1.9).unwrap();
        let src = Source::new(2.0, 3.0).unwrap();
        let stepwise = output_state(&scheme, Some(&p), &src, 1.1, 0.4, 2.2).unwrap();
        let mut map = AffineMap::identity(2);
        for s in stages(&scheme, Some(&p), 0.4, 2.2).unwrap() {
            map = map.then(&s.affine(2).unwrap());
        }
        let input = input_state(&scheme, &src, 1.1).unwrap();
        let mean = &map.x * input.mean() + &map.c;
        let cov = &map.x * input.cov() * map.x.transpose() + &map.y;
        assert!((mean - stepwise.mean()).amax() < 1e-12);
        assert!((cov - stepwise.cov()).amax() < 1e-11);
    }

    #[test]
    fn bypass_skips_process_noise() {
        let noise = NoiseSpec::none().with_process(0.5, 2.0).unwrap();
        let scheme = SchemeConfig::passive(0.3).unwrap().with_noise(noise);
        let clean = SchemeConfig::passive(0.3).unwrap();
        let src = Source::thermal(5.0).unwrap();
        let a = output_state(&scheme, None, &src, 0.0, 0.0, 0.0).unwrap();
        let b = output_state(&clean, None, &src, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(a, b);
    }
}
