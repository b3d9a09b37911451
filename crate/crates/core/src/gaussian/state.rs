use nalgebra::{DMatrix, DVector};

use super::{Source, PSD_TOL, SYMMETRY_TOL};
use crate::error::{invalid, Error, Result};

/// First and second moments of an `M`-mode Gaussian state.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    /// Builds a state from moments, checking symmetry and positive
    /// semidefiniteness of the covariance.
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let n = mean.len();
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::Dimension(format!(
                "mean vector must have even positive length, got {n}"
            )));
        }
        if cov.nrows() != n || cov.ncols() != n {
            return Err(Error::Dimension(format!(
                "covariance is {}x{}, expected {n}x{n}",
                cov.nrows(),
                cov.ncols()
            )));
        }
        let asym = (&cov - cov.transpose()).amax();
        if asym > SYMMETRY_TOL {
            return Err(Error::Dimension(format!(
                "covariance asymmetric by {asym:e}"
            )));
        }
        let min_eigenvalue = cov.clone().symmetric_eigenvalues().min();
        if min_eigenvalue < PSD_TOL {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue });
        }
        Ok(Self { mean, cov })
    }

    /// Builds a state without validation. Callers guarantee the moments
    /// come from physical propagation of a valid state.
    pub(crate) fn from_parts(mean: DVector<f64>, cov: DMatrix<f64>) -> Self {
        Self { mean, cov }
    }

    pub fn modes(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// Tensor product `self ⊗ other`; the modes of `other` follow those of `self`.
    pub fn product(&self, other: &GaussianState) -> GaussianState {
        let (n, m) = (self.mean.len(), other.mean.len());
        let mut mean = DVector::zeros(n + m);
        mean.rows_mut(0, n).copy_from(&self.mean);
        mean.rows_mut(n, m).copy_from(&other.mean);
        let mut cov = DMatrix::zeros(n + m, n + m);
        cov.view_mut((0, 0), (n, n)).copy_from(&self.cov);
        cov.view_mut((n, n), (m, m)).copy_from(&other.cov);
        GaussianState { mean, cov }
    }

    /// Reduced state of the listed modes (partial trace over the rest).
    pub fn reduce(&self, modes: &[usize]) -> Result<GaussianState> {
        check_modes(modes, self.modes())?;
        let idx: Vec<usize> = modes.iter().flat_map(|&k| [2 * k, 2 * k + 1]).collect();
        let mean = DVector::from_iterator(idx.len(), idx.iter().map(|&i| self.mean[i]));
        let cov = DMatrix::from_fn(idx.len(), idx.len(), |r, c| self.cov[(idx[r], idx[c])]);
        Ok(GaussianState { mean, cov })
    }

    /// Smallest eigenvalue of the covariance.
    pub fn min_eigenvalue(&self) -> f64 {
        self.cov.clone().symmetric_eigenvalues().min()
    }

    pub(crate) fn mean_mut(&mut self) -> &mut DVector<f64> {
        &mut self.mean
    }

    pub(crate) fn cov_mut(&mut self) -> &mut DMatrix<f64> {
        &mut self.cov
    }
}

pub(crate) fn check_modes(modes: &[usize], available: usize) -> Result<()> {
    for (i, &m) in modes.iter().enumerate() {
        if m >= available {
            return Err(Error::Dimension(format!(
                "mode {m} out of range for a {available}-mode state"
            )));
        }
        if modes[..i].contains(&m) {
            return Err(Error::Dimension(format!("mode {m} listed twice")));
        }
    }
    Ok(())
}

/// The `modes`-mode vacuum: zero mean, identity covariance.
pub fn vacuum(modes: usize) -> Result<GaussianState> {
    if modes == 0 {
        return Err(invalid("modes", 0.0, "at least one mode is required"));
    }
    Ok(GaussianState {
        mean: DVector::zeros(2 * modes),
        cov: DMatrix::identity(2 * modes, 2 * modes),
    })
}

/// Single-mode displaced thermal state of `source` at phase `theta`:
/// mean `(D cos θ, D sin θ)`, covariance `R²·I`.
pub fn displaced_thermal(source: &Source, theta: f64) -> GaussianState {
    let (s, c) = theta.sin_cos();
    let r2 = source.r() * source.r();
    GaussianState {
        mean: DVector::from_vec(vec![source.d() * c, source.d() * s]),
        cov: DMatrix::from_diagonal_element(2, 2, r2),
    }
}

/// Mean photon number of `mode`: `(Vₓ + Vₚ + mₓ² + mₚ² − 2) / 4`.
pub fn mean_photon(state: &GaussianState, mode: usize) -> Result<f64> {
    check_modes(&[mode], state.modes())?;
    let (x, p) = (2 * mode, 2 * mode + 1);
    let m = &state.mean;
    Ok((state.cov[(x, x)] + state.cov[(p, p)] + m[x] * m[x] + m[p] * m[p] - 2.0) / 4.0)
}
