use std::f64::consts::FRAC_PI_2;

use super::Intensities;
use crate::error::{invalid, Error, Result};
use crate::gaussian::Source;

/// One measurement configuration: which source, which reference phase,
/// whether the process is in the beam, and how many shots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Setting {
    pub source: Source,
    pub phi_ref: f64,
    pub apply_process: bool,
    pub shots: usize,
}

impl Setting {
    pub fn new(source: Source, phi_ref: f64, shots: usize) -> Self {
        Self {
            source,
            phi_ref,
            apply_process: true,
            shots,
        }
    }

    /// A bypass round with the process removed.
    pub fn calibration(source: Source, phi_ref: f64, shots: usize) -> Self {
        Self {
            apply_process: false,
            ..Self::new(source, phi_ref, shots)
        }
    }

    /// The two canonical reference phases `0` and `π/2`.
    pub fn quadrature_pair(source: Source, apply_process: bool, shots: usize) -> [Setting; 2] {
        [0.0, FRAC_PI_2].map(|phi_ref| Setting {
            source,
            phi_ref,
            apply_process,
            shots,
        })
    }

    /// Same round, source variance and phase, irrespective of shot count.
    pub fn same_key(&self, other: &Setting) -> bool {
        self.apply_process == other.apply_process
            && close(self.source.variance(), other.source.variance())
            && close(self.phi_ref, other.phi_ref)
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

/// Settings measured in every Monte-Carlo block, and the block count.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPlan {
    settings: Vec<Setting>,
    blocks: usize,
}

impl ExperimentPlan {
    pub fn new(settings: Vec<Setting>, blocks: usize) -> Result<Self> {
        if settings.is_empty() {
            return Err(Error::Dimension("a plan needs at least one setting".into()));
        }
        if blocks == 0 {
            return Err(invalid("M", 0.0, "at least one block is required"));
        }
        if let Some(s) = settings.iter().find(|s| s.shots == 0) {
            return Err(invalid("N", s.shots as f64, "at least one shot per setting is required"));
        }
        Ok(Self { settings, blocks })
    }

    pub fn settings(&self) -> &[Setting] {
        &self.settings
    }

    pub fn blocks(&self) -> usize {
        self.blocks
    }
}

/// Sufficient statistics of one setting: sample means and unbiased sample
/// variances of the per-shot difference and sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SettingStats {
    pub setting: Setting,
    pub shots: usize,
    pub mean_minus: f64,
    pub mean_plus: f64,
    pub var_minus: f64,
    pub var_plus: f64,
}

impl SettingStats {
    /// Noise-free statistics equal to the given expectations.
    pub fn exact(setting: Setting, expected: Intensities) -> Self {
        Self {
            setting,
            shots: setting.shots,
            mean_minus: expected.minus,
            mean_plus: expected.plus,
            var_minus: 0.0,
            var_plus: 0.0,
        }
    }

    pub fn means(&self) -> Intensities {
        Intensities {
            minus: self.mean_minus,
            plus: self.mean_plus,
        }
    }

    /// Standard error of the mean difference.
    pub fn stderr_minus(&self) -> f64 {
        (self.var_minus / self.shots as f64).sqrt()
    }

    pub fn stderr_plus(&self) -> f64 {
        (self.var_plus / self.shots as f64).sqrt()
    }
}

/// Statistics of every setting of one block, in plan order.
#[derive(Debug, Clone, PartialEq)]
pub struct ShotStats {
    pub settings: Vec<SettingStats>,
}

impl ShotStats {
    /// Looks up a setting by round, source second moment and reference phase.
    pub fn find(&self, apply_process: bool, v: f64, phi_ref: f64) -> Result<&SettingStats> {
        self.settings
            .iter()
            .find(|s| {
                s.setting.apply_process == apply_process
                    && close(s.setting.source.variance(), v)
                    && close(s.setting.phi_ref, phi_ref)
            })
            .ok_or_else(|| {
                Error::MissingSetting(format!(
                    "{} round, V = {v}, reference phase {phi_ref}",
                    if apply_process { "process" } else { "bypass" }
                ))
            })
    }
}
