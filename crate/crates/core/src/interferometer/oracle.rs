//! First-principles expectations: propagate the Gaussian moments through the
//! optical chain at fixed source and pump phases, then average the detector
//! photon numbers over both phases with the trapezoid rule.

use std::f64::consts::TAU;

use nalgebra::DVector;

use super::chain::{detector_intensities, input_state, stages, AffineMap};
use super::params::ProcessParams;
use super::scheme::SchemeConfig;
use super::Intensities;
use crate::error::{Error, Result};
use crate::gaussian::{GaussianState, Source};

/// Trapezoid nodes per phase.
pub const ORACLE_NODES: usize = 256;
/// Largest change allowed when the node count is doubled.
pub const ORACLE_TOL: f64 = 1e-10;

/// Phase-averaged intensities of a scheme that applies the process.
pub fn oracle_expected(scheme: &SchemeConfig, p: &ProcessParams, source: &Source, phi_ref: f64) -> Result<Intensities> {
    oracle_average(scheme, Some(p), source, phi_ref)
}

/// Phase-averaged intensities of a bypass (calibration) round.
pub fn oracle_calibration(scheme: &SchemeConfig, source: &Source, phi_ref: f64) -> Result<Intensities> {
    oracle_average(scheme, None, source, phi_ref)
}

/// Mean propagation only; the covariance is independent of the source phase.
fn propagate_mean(maps: &[AffineMap], mean: &DVector<f64>) -> DVector<f64> {
    maps.iter().fold(mean.clone(), |m, map| &map.x * m + &map.c)
}

pub(crate) fn oracle_average(
    scheme: &SchemeConfig,
    process: Option<&ProcessParams>,
    source: &Source,
    phi_ref: f64,
) -> Result<Intensities> {
    let n = ORACLE_NODES;
    let fine = 2 * n;
    let pump_nodes = if scheme.is_pumped() { fine } else { 1 };
    let total = scheme.modes();
    // Sums over the base grid (even indices) and the doubled grid.
    let (mut base, mut full) = ([0.0; 2], [0.0; 2]);
    for j in 0..pump_nodes {
        let pump = TAU * j as f64 / fine as f64;
        let chain = stages(scheme, process, phi_ref, pump)?;
        let mut reference = input_state(scheme, source, 0.0)?;
        for s in &chain {
            reference = s.act(&reference)?;
        }
        let cov = reference.cov().clone();
        let maps = chain.iter().map(|s| s.affine(total)).collect::<Result<Vec<_>>>()?;
        for k in 0..fine {
            let theta = TAU * k as f64 / fine as f64;
            let input = input_state(scheme, source, theta)?;
            let mean = propagate_mean(&maps, input.mean());
            let i = detector_intensities(scheme, &GaussianState::from_parts(mean, cov.clone()))?;
            let v = [i.minus, i.plus];
            for c in 0..2 {
                full[c] += v[c];
                if k % 2 == 0 && j % 2 == 0 {
                    base[c] += v[c];
                }
            }
        }
    }
    let base_count = (fine / 2) * pump_nodes.div_ceil(2);
    let full_count = fine * pump_nodes;
    let coarse = [base[0] / base_count as f64, base[1] / base_count as f64];
    let refined = [full[0] / full_count as f64, full[1] / full_count as f64];
    for c in 0..2 {
        let diff = (refined[c] - coarse[c]).abs();
        if diff > ORACLE_TOL * refined[c].abs().max(1.0) {
            return Err(Error::NotConverged {
                what: "oracle phase quadrature",
                difference: diff,
            });
        }
    }
    Ok(Intensities {
        minus: refined[0],
        plus: refined[1],
    })
}
