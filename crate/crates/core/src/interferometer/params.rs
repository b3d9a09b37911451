use std::f64::consts::TAU;

use crate::error::{invalid, Result};
use crate::gaussian::{Element, SymplecticTransform};

/// Parameters of the unknown single-mode Gaussian unitary, applied as
/// squeeze, then rotate, then displace.
///
/// Only `q`, `phi` and `d` are observable with random-phase sources; `alpha`
/// (squeezing direction) and `beta` (displacement direction) matter to the
/// simulation only. Observables depend on `q + 1/q`, so the `q ≥ 1` branch is
/// stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProcessParams {
    q: f64,
    phi: f64,
    d: f64,
    alpha: f64,
    beta: f64,
}

impl ProcessParams {
    /// `phi` is reduced into `[0, 2π)`.
    pub fn new(q: f64, phi: f64, d: f64) -> Result<Self> {
        if !(q >= 1.0 && q.is_finite()) {
            return Err(invalid("q", q, "squeezing magnitude must be finite and at least 1"));
        }
        if !phi.is_finite() {
            return Err(invalid("phi", phi, "must be finite"));
        }
        if !(d >= 0.0 && d.is_finite()) {
            return Err(invalid("d", d, "displacement must be finite and non-negative"));
        }
        Ok(Self {
            q,
            phi: phi.rem_euclid(TAU),
            d,
            alpha: 0.0,
            beta: 0.0,
        })
    }

    /// The process from a signed squeeze parameter `w`. Negative `w` is the
    /// same squeezer as `|w|` with `alpha` turned by π.
    pub fn from_squeeze(w: f64, phi: f64, d: f64, alpha: f64, beta: f64) -> Result<Self> {
        let alpha = if w < 0.0 { alpha + std::f64::consts::PI } else { alpha };
        Self::new(w.abs().exp(), phi, d)?.with_directions(alpha, beta)
    }

    pub fn identity() -> Self {
        Self {
            q: 1.0,
            phi: 0.0,
            d: 0.0,
            alpha: 0.0,
            beta: 0.0,
        }
    }

    pub fn with_directions(mut self, alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(invalid("alpha", alpha, "must be finite"));
        }
        if !beta.is_finite() {
            return Err(invalid("beta", beta, "must be finite"));
        }
        self.alpha = alpha;
        self.beta = beta;
        Ok(self)
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `q + 1/q`.
    pub fn q_sum(&self) -> f64 {
        self.q + 1.0 / self.q
    }

    /// `q² + 1/q²`.
    pub fn q2_sum(&self) -> f64 {
        self.q * self.q + 1.0 / (self.q * self.q)
    }

    /// The process as a single-mode transform `D(d, β) ∘ R(Φ) ∘ S(ln q, α)`.
    pub fn transform(&self) -> Result<SymplecticTransform> {
        let squeeze = Element::Squeezer {
            w: self.q.ln(),
            alpha: self.alpha,
        }
        .transform()?;
        let rotate = Element::PhaseShift { phi: self.phi }.transform()?;
        let shift = Element::Displacement {
            d: self.d,
            beta: self.beta,
        }
        .transform()?;
        shift.after(&rotate.after(&squeeze)?)
    }
}
