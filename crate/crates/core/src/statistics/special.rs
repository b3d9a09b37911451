use num_complex::Complex64;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};

/// Above this argument `e^{−x} M(a, b, x)` switches to the large-`x` series.
const ASYMPTOTIC_FROM: f64 = 600.0;
const MAX_TERMS: usize = 20_000;

/// `e^{−x} M(a, b, x)` for `x ≥ 0`, `a, b > 0`: every series term is
/// positive, so the power series is stable up to overflow of `e^x`.
fn scaled_kummer(a: f64, b: f64, x: f64) -> Result<f64> {
    if x > ASYMPTOTIC_FROM {
        Ok(scaled_kummer_asymptotic(a, b, x))
    } else {
        scaled_kummer_series(a, b, x)
    }
}

/// `Γ(b)/Γ(a) x^{a−b} Σ (b−a)_k (1−a)_k / (k! x^k)`, truncated at the
/// smallest term; the `e^{−x}`-damped second branch is dropped.
fn scaled_kummer_asymptotic(a: f64, b: f64, x: f64) -> f64 {
    let (mut term, mut sum) = (1.0f64, 1.0f64);
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let next = term * (b - a + kf) * (1.0 - a + kf) / ((kf + 1.0) * x);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    gamma(b) / gamma(a) * x.powf(a - b) * sum
}

fn scaled_kummer_series(a: f64, b: f64, x: f64) -> Result<f64> {
    let (mut term, mut sum) = (1.0f64, 1.0f64);
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) * x / ((b + kf) * (kf + 1.0));
        sum += term;
        if term < 1e-17 * sum && kf > x {
            return Ok(sum * (-x).exp());
        }
    }
    Err(Error::NotConverged {
        what: "Kummer series",
        difference: term / sum,
    })
}

/// Kummer's `M(a, b, −x)` for `x ≥ 0` through `M(a, b, z) = e^z M(b − a, b, −z)`.
pub fn kummer_m_negative(a: f64, b: f64, x: f64) -> Result<f64> {
    if x < 0.0 || b - a <= 0.0 || b <= 0.0 {
        return Err(Error::Degenerate(format!("M({a}, {b}, −{x}) outside the supported range")));
    }
    scaled_kummer(b - a, b, x)
}

/// Tricomi's `U(a, b, −x)` for `x > 0` and non-integer `b < 1`, on the
/// principal branch, from the connection formula
/// `U = Γ(1−b)/Γ(a−b+1) M(a,b,z) + Γ(b−1)/Γ(a) z^{1−b} M(a−b+1, 2−b, z)`.
pub fn tricomi_u_negative(a: f64, b: f64, x: f64) -> Result<Complex64> {
    if !(x > 0.0) || b >= 1.0 || b.fract() == 0.0 {
        return Err(Error::Degenerate(format!("U({a}, {b}, −{x}) outside the supported range")));
    }
    let first = gamma(1.0 - b) / gamma(a - b + 1.0) * kummer_m_negative(a, b, x)?;
    let z_pow = Complex64::from_polar(x.powf(1.0 - b), std::f64::consts::PI * (1.0 - b));
    let second = gamma(b - 1.0) / gamma(a) * kummer_m_negative(a - b + 1.0, 2.0 - b, x)?;
    Ok(Complex64::new(first, 0.0) + z_pow * second)
}
