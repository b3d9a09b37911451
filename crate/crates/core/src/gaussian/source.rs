use crate::error::{invalid, Result};

/// Random-phase displaced thermal source with thermal standard deviation `R`
/// and displacement magnitude `D`.
///
/// Its phase-averaged quadrature second moment is `V = R² + D²/2 = 2n̄ + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Source {
    r: f64,
    d: f64,
}

impl Source {
    /// A physical source; `R < 1` would be sub-vacuum noise and is rejected.
    pub fn new(r: f64, d: f64) -> Result<Self> {
        Self::check(r, d)?;
        if r < 1.0 {
            return Err(invalid("R", r, "thermal deviation below the vacuum level"));
        }
        Ok(Self { r, d })
    }

    /// Like [`Source::new`] but accepts `0 ≤ R < 1`, for limit studies.
    pub fn new_unphysical(r: f64, d: f64) -> Result<Self> {
        Self::check(r, d)?;
        Ok(Self { r, d })
    }

    fn check(r: f64, d: f64) -> Result<()> {
        if !(r >= 0.0 && r.is_finite()) {
            return Err(invalid("R", r, "must be finite and non-negative"));
        }
        if !(d >= 0.0 && d.is_finite()) {
            return Err(invalid("D", d, "must be finite and non-negative"));
        }
        Ok(())
    }

    /// Thermal source (`D = 0`) with second moment `v`.
    pub fn thermal(v: f64) -> Result<Self> {
        if !(v >= 1.0) {
            return Err(invalid("V", v, "below the vacuum level"));
        }
        Self::new(v.sqrt(), 0.0)
    }

    /// Random-phase coherent source (`R = 1`) with second moment `v`.
    pub fn coherent(v: f64) -> Result<Self> {
        if !(v >= 1.0) {
            return Err(invalid("V", v, "below the vacuum level"));
        }
        Self::new(1.0, (2.0 * (v - 1.0)).sqrt())
    }

    /// Source with second moment `v` whose thermal part is `R² = ratio·v`.
    pub fn with_thermal_ratio(v: f64, ratio: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&ratio) {
            return Err(invalid("thermal ratio", ratio, "must lie in [0, 1]"));
        }
        let r2 = ratio * v;
        Self::new(r2.sqrt(), (2.0 * (v - r2)).max(0.0).sqrt())
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    /// `V = R² + D²/2`.
    pub fn variance(&self) -> f64 {
        self.r * self.r + self.d * self.d / 2.0
    }

    /// `n̄ = (V − 1)/2`.
    pub fn mean_photon(&self) -> f64 {
        (self.variance() - 1.0) / 2.0
    }
}
