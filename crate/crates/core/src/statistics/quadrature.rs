use std::f64::consts::PI;

use crate::error::{Error, Result};

const NEWTON_STEPS: usize = 100;
const RESCALE: f64 = 1e150;

/// Nodes and weights of the `n`-point Gauss–Hermite rule for weight
/// `e^{−x²}` on the real line, nodes in decreasing order.
///
/// Each node is bracketed by bisection on the Sturm count of the Jacobi
/// matrix and polished by Newton steps on the orthonormal recurrence, which
/// is rescaled on the fly so large orders do not overflow. Weights beyond
/// `f64` range are 0.
pub fn gauss_hermite(n: usize) -> Result<Vec<(f64, f64)>> {
    if n == 0 {
        return Err(Error::Dimension("quadrature order must be positive".into()));
    }
    let nf = n as f64;
    let bound = (2.0 * nf + 1.0).sqrt() + 1.0;
    let mut out = vec![(0.0, 0.0); n];
    for i in 0..n.div_ceil(2) {
        // Node i (decreasing) is the (n − i)-th smallest eigenvalue.
        let rank = n - i;
        let (mut lo, mut hi) = (0.0f64, bound);
        if n % 2 == 1 && i == n / 2 {
            hi = 0.0;
        }
        while hi - lo > 1e-13 * hi.max(1.0) {
            let mid = (lo + hi) / 2.0;
            if sturm_count(n, mid) >= rank {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let mut z = (lo + hi) / 2.0;
        let mut log_pp = 0.0;
        for step in 0..NEWTON_STEPS {
            let (pn, pn1, scale) = hermite_pair(n, z);
            let pp = (2.0 * nf).sqrt() * pn1;
            let dz = pn / pp;
            z -= dz;
            log_pp = pp.abs().ln() + scale;
            if dz.abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
            if step + 1 == NEWTON_STEPS {
                return Err(Error::NotConverged {
                    what: "Gauss-Hermite node",
                    difference: dz,
                });
            }
        }
        let w = (2f64.ln() - 2.0 * log_pp).exp();
        out[i] = (z, w);
        out[n - 1 - i] = (-z, w);
    }
    if n > 1 && out.windows(2).any(|p| p[0].0 <= p[1].0) {
        return Err(Error::NotConverged {
            what: "Gauss-Hermite nodes (duplicate root)",
            difference: 0.0,
        });
    }
    Ok(out)
}

/// Number of eigenvalues below `x` of the Hermite Jacobi matrix (zero
/// diagonal, off-diagonal `√(k/2)`).
fn sturm_count(n: usize, x: f64) -> usize {
    let mut count = 0;
    let mut d = -x;
    for k in 0..n {
        if k > 0 {
            let b2 = k as f64 / 2.0;
            d = -x - b2 / if d == 0.0 { f64::EPSILON } else { d };
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// `(p_n(z), p_{n−1}(z), log scale)` of the orthonormal Hermite polynomials,
/// the returned values multiplied by `e^{−scale}`.
fn hermite_pair(n: usize, z: f64) -> (f64, f64, f64) {
    let mut p1 = PI.powf(-0.25);
    let mut p2 = 0.0;
    let mut scale = 0.0;
    for j in 1..=n {
        let jf = j as f64;
        let p3 = p2;
        p2 = p1;
        p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
        if p1.abs() > RESCALE {
            p1 /= RESCALE;
            p2 /= RESCALE;
            scale += RESCALE.ln();
        }
    }
    (p1, p2, scale)
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[a, b]`.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Result<Vec<(f64, f64)>> {
    if n == 0 {
        return Err(Error::Dimension("quadrature order must be positive".into()));
    }
    let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
    let mut out = vec![(0.0, 0.0); n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for step in 0..NEWTON_STEPS {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 1..=n {
                let jf = j as f64;
                let p3 = p2;
                p2 = p1;
                p1 = ((2.0 * jf - 1.0) * z * p2 - (jf - 1.0) * p3) / jf;
            }
            dp = nf * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() <= 1e-15 {
                break;
            }
            if step + 1 == NEWTON_STEPS {
                return Err(Error::NotConverged {
                    what: "Gauss-Legendre node",
                    difference: dz,
                });
            }
        }
        let w = 2.0 * half / ((1.0 - z * z) * dp * dp);
        out[i] = (mid - half * z, w);
        out[n - 1 - i] = (mid + half * z, w);
    }
    Ok(out)
}
