use crate::error::{invalid, Result};

/// Fisher information on `q` carried by the mean difference reading at
/// `φ_ref = Φ`, treated as normal with
/// mean `(V − 1)/2·√(μ(1−μ))·(q + 1/q)` and
/// variance `(q² + 1/q²)(2μ(1−μ)(V − 1)² + V)/(4N)`.
///
/// For a normal family `I = (∂mean)²/Var + (∂Var)²/(2 Var²)`, which is affine
/// in `N`.
pub fn fisher_information_normal(q: f64, v: f64, mu: f64, n: f64) -> Result<f64> {
    let (a, b) = fisher_coefficients(q, v, mu)?;
    if !(n >= 1.0) {
        return Err(invalid("N", n, "at least one shot"));
    }
    Ok(a * n + b)
}

/// `(a, b)` with `I = a·N + b`.
pub fn fisher_coefficients(q: f64, v: f64, mu: f64) -> Result<(f64, f64)> {
    if !(q >= 1.0 && q.is_finite()) {
        return Err(invalid("q", q, "squeezing magnitude must be at least 1"));
    }
    if !(v > 1.0 && v.is_finite()) {
        return Err(invalid("V", v, "source must carry photons (V > 1)"));
    }
    if !(mu > 0.0 && mu < 1.0) {
        return Err(invalid("mu", mu, "beam-splitter parameter must lie in (0, 1)"));
    }
    let k2 = mu * (1.0 - mu);
    let gain = (v - 1.0) / 2.0 * k2.sqrt();
    let spread = 2.0 * k2 * (v - 1.0).powi(2) + v;
    let q2 = q * q + 1.0 / (q * q);
    let d_mean = gain * (1.0 - 1.0 / (q * q));
    let d_q2 = 2.0 * q - 2.0 / q.powi(3);
    // Var = q2·spread/(4N): the mean term scales with N, the variance term not.
    let a = d_mean * d_mean * 4.0 / (q2 * spread);
    let b = d_q2 * d_q2 / (2.0 * q2 * q2);
    Ok((a, b))
}

/// Cramér–Rao lower bound on the variance of an unbiased estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CramerRao {
    Bound(f64),
    /// Zero information: no finite bound.
    Unbounded,
}

impl CramerRao {
    pub fn value(&self) -> Option<f64> {
        match self {
            CramerRao::Bound(b) => Some(*b),
            CramerRao::Unbounded => None,
        }
    }
}

pub fn cramer_rao_bound(information: f64) -> Result<CramerRao> {
    if information.is_nan() || information < 0.0 {
        return Err(invalid("I", information, "Fisher information must be non-negative"));
    }
    Ok(if information == 0.0 {
        CramerRao::Unbounded
    } else {
        CramerRao::Bound(1.0 / information)
    })
}
