use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use super::GaussianState;
use crate::error::{Error, Result};

/// Eigenvalues below this are clipped before factorisation; strongly
/// squeezed states legitimately carry tiny eigenvalues.
const EIGEN_FLOOR: f64 = 1e-12;

/// Draws phase-space points (Wigner samples) from a Gaussian state.
#[derive(Debug, Clone)]
pub struct PhaseSampler {
    mean: DVector<f64>,
    factor: DMatrix<f64>,
}

impl PhaseSampler {
    /// Factorises the covariance by Cholesky, falling back to eigenvalue
    /// clipping for near-singular matrices. Clearly indefinite matrices are
    /// rejected.
    pub fn new(state: &GaussianState) -> Result<Self> {
        let cov = state.cov();
        let factor = match cov.clone().cholesky() {
            Some(ch) => ch.l(),
            None => {
                let eig = cov.clone().symmetric_eigen();
                let min = eig.eigenvalues.min();
                let scale = eig.eigenvalues.amax().max(1.0);
                if min < -1e-10 * scale {
                    return Err(Error::NotPositiveSemidefinite { min_eigenvalue: min });
                }
                let clipped = eig.eigenvalues.map(|l| l.max(EIGEN_FLOOR));
                let rebuilt = &eig.eigenvectors * DMatrix::from_diagonal(&clipped) * eig.eigenvectors.transpose();
                let rebuilt = (&rebuilt + rebuilt.transpose()) * 0.5;
                rebuilt
                    .cholesky()
                    .ok_or(Error::NotPositiveSemidefinite { min_eigenvalue: min })?
                    .l()
            }
        };
        Ok(Self {
            mean: state.mean().clone(),
            factor,
        })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> DVector<f64> {
        let z = DVector::from_fn(self.dim(), |_, _| rng.sample::<f64, _>(StandardNormal));
        &self.mean + &self.factor * z
    }
}

/// One draw from the multivariate normal with the state's moments.
pub fn sample_phase_point<R: Rng + ?Sized>(state: &GaussianState, rng: &mut R) -> Result<DVector<f64>> {
    Ok(PhaseSampler::new(state)?.sample(rng))
}
