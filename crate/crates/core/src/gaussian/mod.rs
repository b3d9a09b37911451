//! Phase-space Gaussian states and the optics that act on them.
//!
//! Quadratures are ordered `(x₁, p₁, …, x_M, p_M)`. The vacuum has zero mean
//! and identity covariance.

mod channel;
mod sampling;
mod source;
mod state;
mod transform;

pub use channel::{loss_channel, NoiseChannel};
pub use sampling::{sample_phase_point, PhaseSampler};
pub use source::Source;
pub use state::{displaced_thermal, mean_photon, vacuum, GaussianState};
pub use transform::{apply, symplectic_form, Element, SymplecticTransform};

/// Absolute tolerance for symmetry of a covariance matrix.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Smallest eigenvalue accepted for a covariance matrix.
pub const PSD_TOL: f64 = -1e-10;
