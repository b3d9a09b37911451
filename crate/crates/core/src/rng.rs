//! Reproducible random streams.
//!
//! Every Monte-Carlo block owns an independent ChaCha8 stream. The block
//! stream is obtained by seeding ChaCha8 from the 64-bit master seed and
//! selecting the 64-bit ChaCha stream id equal to the block index, so block
//! `k` draws the same numbers no matter which thread runs it or in which
//! order blocks are scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Generator used throughout the crate.
pub type StreamRng = ChaCha8Rng;

/// The stream for block `index` under `master_seed`.
pub fn block_rng(master_seed: u64, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

/// `(cos θ, sin θ)` for θ uniform on `[0, 2π)`, without trigonometric calls:
/// a point uniform in the unit disc has a uniform polar angle, and so does
/// twice that angle.
pub fn uniform_phase<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    loop {
        let u = 2.0 * rng.random::<f64>() - 1.0;
        let v = 2.0 * rng.random::<f64>() - 1.0;
        let r2 = u * u + v * v;
        if r2 > 0.0 && r2 <= 1.0 {
            return ((u * u - v * v) / r2, 2.0 * u * v / r2);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = (0..4).map(|_| 0).scan(block_rng(7, 3), |r, _| Some(r.random())).collect();
        let b: Vec<u64> = (0..4).map(|_| 0).scan(block_rng(7, 3), |r, _| Some(r.random())).collect();
        let c: Vec<u64> = (0..4).map(|_| 0).scan(block_rng(7, 4), |r, _| Some(r.random())).collect();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn uniform_phase_moments() {
        let mut rng = block_rng(1, 0);
        let n = 400_000;
        let mut m = [0.0; 5];
        let mut quadrant = [0usize; 4];
        for _ in 0..n {
            let (c, s) = uniform_phase(&mut rng);
            assert!((c * c + s * s - 1.0).abs() < 1e-12);
            m[0] += c;
            m[1] += s;
            m[2] += c * c;
            m[3] += c * s;
            m[4] += c.powi(4);
            quadrant[(c < 0.0) as usize * 2 + (s < 0.0) as usize] += 1;
        }
        let tol = 5.0 / (n as f64).sqrt();
        let m = m.map(|x| x / n as f64);
        assert!(m[0].abs() < tol && m[1].abs() < tol && m[3].abs() < tol);
        assert!((m[2] - 0.5).abs() < tol && (m[4] - 0.375).abs() < tol);
        for q in quadrant {
            assert!((q as f64 / n as f64 - 0.25).abs() < tol);
        }
    }
}
