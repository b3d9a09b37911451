use std::f64::consts::FRAC_PI_2;

use crate::error::Result;
use crate::interferometer::{Intensities, ShotStats};

/// Mean detector difference and sum at reference phases `0` and `π/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Readings {
    pub minus_0: f64,
    pub minus_90: f64,
    pub plus_0: f64,
    pub plus_90: f64,
}

impl Readings {
    pub fn from_pair(at_0: Intensities, at_90: Intensities) -> Self {
        Self {
            minus_0: at_0.minus,
            minus_90: at_90.minus,
            plus_0: at_0.plus,
            plus_90: at_90.plus,
        }
    }

    /// The process round (or bypass round) with source second moment `v`.
    pub fn from_stats(stats: &ShotStats, apply_process: bool, v: f64) -> Result<Self> {
        Ok(Self::from_pair(
            stats.find(apply_process, v, 0.0)?.means(),
            stats.find(apply_process, v, FRAC_PI_2)?.means(),
        ))
    }

    pub fn mean_minus(&self) -> f64 {
        (self.minus_0 + self.minus_90) / 2.0
    }

    pub fn mean_plus(&self) -> f64 {
        (self.plus_0 + self.plus_90) / 2.0
    }

    pub(crate) fn map(&self, minus: impl Fn(f64) -> f64, plus: impl Fn(f64) -> f64) -> Self {
        Self {
            minus_0: minus(self.minus_0),
            minus_90: minus(self.minus_90),
            plus_0: plus(self.plus_0),
            plus_90: plus(self.plus_90),
        }
    }
}
