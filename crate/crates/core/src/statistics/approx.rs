use std::f64::consts::{PI, SQRT_2};

use statrs::function::erf::erfc;

use super::quadrature::{gauss_hermite, gauss_legendre};
use super::special::tricomi_u_negative;
use crate::error::{invalid, Error, Result};

/// Relative change between successive quadrature orders accepted as converged.
pub const QUADRATURE_TOL: f64 = 1e-8;
const HERMITE_ORDERS: [usize; 5] = [64, 128, 256, 512, 1024];
/// Standard deviations covered by the half-line rule.
const HALF_LINE_SPAN: f64 = 14.0;

/// How `E√(c² − 4)` was integrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureMethod {
    /// Gauss–Hermite on `√max(y, 0)`; `order` is the accepted rule.
    GaussHermite { order: usize },
    /// The kink at 0 lies inside the bulk and Gauss–Hermite did not settle:
    /// Gauss–Legendre on the positive half-line after `y = s·u²`.
    HalfLine { order: usize },
}

/// Moments of `√(c² − 4)` when `c² − 4` is taken as normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqrtMoments {
    pub mean: f64,
    pub variance: f64,
    /// Probability the normal law assigns to `c² − 4 < 0`.
    pub negative_mass: f64,
    pub method: QuadratureMethod,
}

/// Normal-approximation moments of `c` and of `q̂ = (c + √(c² − 4))/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxMoments {
    /// `m = E c`.
    pub m: f64,
    /// `σ² = Var c`.
    pub sigma2: f64,
    pub sqrt: SqrtMoments,
    pub mean_q: f64,
    pub var_q: f64,
}

fn check(q: f64, v: f64, mu: f64, n: f64) -> Result<()> {
    if !(q >= 1.0 && q.is_finite()) {
        return Err(invalid("q", q, "squeezing magnitude must be at least 1"));
    }
    if !(v > 1.0 && v.is_finite()) {
        return Err(invalid("V", v, "source must carry photons (V > 1)"));
    }
    if !(mu > 0.0 && mu < 1.0) {
        return Err(invalid("mu", mu, "beam-splitter parameter must lie in (0, 1)"));
    }
    if !(n >= 1.0) {
        return Err(invalid("N", n, "at least one shot per setting"));
    }
    Ok(())
}

/// `(m, σ²)` of the amplitude ratio `c` for a thermal source of second
/// moment `v`, beam splitter `mu` and `n` shots per reference phase.
pub fn c_moments(q: f64, v: f64, mu: f64, n: f64) -> Result<(f64, f64)> {
    check(q, v, mu, n)?;
    let m = q + 1.0 / q;
    let q2 = q * q + 1.0 / (q * q);
    let sigma2 = q2 * (2.0 + v / (mu * (1.0 - mu) * (v - 1.0).powi(2))) / n;
    Ok((m, sigma2))
}

/// Mean and variance of `y = c² − 4` under `c ~ Normal(m, σ²)`.
fn shifted_moments(m: f64, sigma2: f64) -> (f64, f64) {
    (m * m + sigma2 - 4.0, 2.0 * sigma2 * (2.0 * m * m + sigma2))
}

/// `E√max(Y, 0)` and `Var√(c² − 4)` with `Y ~ Normal(m² + σ² − 4, 2σ²(2m² + σ²))`.
///
/// Gauss–Hermite with order doubling from 64 is tried first; when the kink
/// at `Y = 0` keeps it from settling, the half-line rule takes over. The
/// variance is `E(c² − 4) − (E√)²`, floored at 0 (the floor only engages
/// when a sizeable negative branch is cut away).
pub fn sqrt_shifted_moments(m: f64, sigma2: f64) -> Result<SqrtMoments> {
    if !(sigma2 > 0.0 && sigma2.is_finite()) {
        return Err(invalid("sigma2", sigma2, "variance of c must be positive"));
    }
    if !m.is_finite() {
        return Err(invalid("m", m, "mean of c must be finite"));
    }
    let (mean_y, var_y) = shifted_moments(m, sigma2);
    let s = var_y.sqrt();
    let negative_mass = 0.5 * erfc(mean_y / s / SQRT_2);
    let (mean, method) = match hermite_mean(mean_y, s)? {
        Some(found) => found,
        None => half_line_mean(mean_y, s)?,
    };
    Ok(SqrtMoments {
        mean,
        variance: (mean_y - mean * mean).max(0.0),
        negative_mass,
        method,
    })
}

fn hermite_mean(mean_y: f64, s: f64) -> Result<Option<(f64, QuadratureMethod)>> {
    let mut previous = None;
    for order in HERMITE_ORDERS {
        let value = gauss_hermite(order)?
            .iter()
            .map(|(x, w)| w * (mean_y + SQRT_2 * s * x).max(0.0).sqrt())
            .sum::<f64>()
            / PI.sqrt();
        if let Some(prev) = previous {
            if converged(value, prev) {
                return Ok(Some((value, QuadratureMethod::GaussHermite { order })));
            }
        }
        previous = Some(value);
    }
    Ok(None)
}

/// `√s ∫₀^∞ 2u² φ(u² − a) du` with `a = mean_y/s`, smooth in `u`.
fn half_line_mean(mean_y: f64, s: f64) -> Result<(f64, QuadratureMethod)> {
    let a = mean_y / s;
    let lo = (a - HALF_LINE_SPAN).max(0.0).sqrt();
    let hi = (a + HALF_LINE_SPAN).max(0.0).sqrt();
    if hi == 0.0 {
        return Ok((0.0, QuadratureMethod::HalfLine { order: 0 }));
    }
    let integrand = |u: f64| 2.0 * u * u * (-(u * u - a).powi(2) / 2.0).exp() / (2.0 * PI).sqrt();
    let mut previous = None;
    let mut order = 32;
    let mut last = 0.0;
    while order <= 4096 {
        let value = s.sqrt()
            * gauss_legendre(order, lo, hi)?
                .iter()
                .map(|(u, w)| w * integrand(*u))
                .sum::<f64>();
        if let Some(prev) = previous {
            if converged(value, prev) {
                return Ok((value, QuadratureMethod::HalfLine { order }));
            }
            last = (value - prev) / value;
        }
        previous = Some(value);
        order *= 2;
    }
    Err(Error::NotConverged {
        what: "expectation of sqrt(c^2 - 4)",
        difference: last,
    })
}

fn converged(value: f64, previous: f64) -> bool {
    (value - previous).abs() <= QUADRATURE_TOL * value.abs() || (value == 0.0 && previous == 0.0)
}

/// `E√(c² − 4)` from Tricomi's function:
/// `Re[(1 − i)·2^{−1/4}·Var(c²−4)^{1/4}·U(−1/4, 1/2, −E²(c²−4)/(2 Var(c²−4)))]`.
///
/// Kept as a cross-check of the quadrature; meaningful when the negative
/// branch carries negligible mass.
pub fn sqrt_shifted_mean_tricomi(m: f64, sigma2: f64) -> Result<f64> {
    if !(sigma2 > 0.0) {
        return Err(invalid("sigma2", sigma2, "variance of c must be positive"));
    }
    let (mean_y, var_y) = shifted_moments(m, sigma2);
    let u = tricomi_u_negative(-0.25, 0.5, mean_y * mean_y / (2.0 * var_y))?;
    let prefactor = num_complex::Complex64::new(1.0, -1.0) * 2f64.powf(-0.25) * var_y.powf(0.25);
    Ok((prefactor * u).re)
}

/// `E q̂ = (E c + E√(c² − 4))/2`, `Var q̂ = (Var c + Var√(c² − 4))/2`.
pub fn qhat_normal_approx(q: f64, v: f64, mu: f64, n: f64) -> Result<ApproxMoments> {
    let (m, sigma2) = c_moments(q, v, mu, n)?;
    let sqrt = sqrt_shifted_moments(m, sigma2)?;
    Ok(ApproxMoments {
        m,
        sigma2,
        sqrt,
        mean_q: (m + sqrt.mean) / 2.0,
        var_q: (sigma2 + sqrt.variance) / 2.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force `E√max(Y, 0)` by the composite Simpson rule.
    fn simpson(mean_y: f64, s: f64) -> f64 {
        let (lo, hi) = (0.0f64.max(mean_y - 12.0 * s), mean_y + 12.0 * s);
        let n = 2_000_000;
        let h = (hi - lo) / n as f64;
        let f = |y: f64| y.sqrt() * (-((y - mean_y) / s).powi(2) / 2.0).exp() / (s * (2.0 * PI).sqrt());
        let mut acc = f(lo) + f(hi);
        for i in 1..n {
            acc += f(lo + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * h / 3.0
    }

    #[test]
    fn c_moments_values() {
        assert_eq!(c_moments(1.0, 10.0, 0.5, 10.0).unwrap().0, 2.0);
        let (m, s2) = c_moments(1.23, 75.0, 0.3, 1e4).unwrap();
        assert!((m - 2.043008).abs() < 1e-6);
        assert!((s2 / 4.490e-4 - 1.0).abs() < 1e-3, "{s2}");
        assert!(c_moments(2.0, 1.0, 0.3, 10.0).is_err());
    }

    #[test]
    fn hermite_path_in_smooth_regime() {
        let (m, s2) = c_moments(3.0, 25.0, 0.2, 1e5).unwrap();
        let r = sqrt_shifted_moments(m, s2).unwrap();
        assert!(matches!(r.method, QuadratureMethod::GaussHermite { .. }));
        let (my, vy) = shifted_moments(m, s2);
        assert!((r.mean / simpson(my, vy.sqrt()) - 1.0).abs() < 1e-9);
        assert!(r.negative_mass < 1e-100);
    }

    #[test]
    fn half_line_path_near_kink() {
        let (m, s2) = c_moments(1.2, 25.0, 0.2, 100.0).unwrap();
        let r = sqrt_shifted_moments(m, s2).unwrap();
        let (my, vy) = shifted_moments(m, s2);
        assert!(r.negative_mass > 0.01);
        assert!((r.mean / simpson(my, vy.sqrt()) - 1.0).abs() < 1e-7, "{r:?}");
    }

    #[test]
    fn delta_limit() {
        let r = sqrt_shifted_moments(2.043008, 1e-14).unwrap();
        assert!((r.mean - 0.41699).abs() < 1e-5);
        let a = qhat_normal_approx(1.7, 40.0, 0.4, 1e16).unwrap();
        assert!((a.mean_q - 1.7).abs() < 1e-7);
    }

    #[test]
    fn variance_identity() {
        for n in [1e3, 1e4, 1e5] {
            let a = qhat_normal_approx(3.0, 25.0, 0.2, n).unwrap();
            let (my, _) = shifted_moments(a.m, a.sigma2);
            assert!((a.sqrt.variance - (my - a.sqrt.mean.powi(2))).abs() < 1e-12);
            assert!(a.sqrt.variance >= 0.0);
        }
    }

    #[test]
    fn tricomi_matches_quadrature() {
        for n in [1e3, 1e4, 1e5, 1e6] {
            let (m, s2) = c_moments(3.0, 25.0, 0.2, n).unwrap();
            let quad = sqrt_shifted_moments(m, s2).unwrap().mean;
            let tri = sqrt_shifted_mean_tricomi(m, s2).unwrap();
            assert!((tri / quad - 1.0).abs() < 1e-6, "N = {n}: {tri} vs {quad}");
        }
    }
}
