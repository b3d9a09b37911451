//! Estimation of the phase-independent parameters of an unknown Gaussian
//! process (squeezing magnitude `q`, phase shift `Φ`, displacement `d`) with
//! classical interferometry, random-phase thermal or coherent sources and
//! intensity detectors.
//!
//! The crate is layered bottom-up:
//!
//! - [`gaussian`] holds phase-space Gaussian states, symplectic optical
//!   elements, loss/noise channels and Wigner-function sampling.
//! - [`interferometer`] assembles the two-arm scheme, provides closed-form
//!   expected intensities, a quadrature oracle for them, and the shot
//!   simulator.
//! - [`estimators`] inverts mean intensities into parameter estimates, with
//!   calibration and two-source variants for lossy, noisy setups.
//! - [`statistics`] runs the Monte-Carlo mean-squared-error harness and the
//!   normal-approximation / Fisher-information analytics.
//!
//! Conventions: vacuum quadrature variance is 1, so the mean photon number
//! of a mode is `(⟨x²⟩ + ⟨p²⟩ − 2) / 4` with second moments about zero.
//!
//! ```
//! use gaussest::interferometer::{expected_passive, ProcessParams, NoiseSpec};
//! use gaussest::estimators::{estimate_ideal_passive, Readings};
//!
//! let truth = ProcessParams::new(1.23, 0.63, 1.67).unwrap();
//! let (v, mu) = (75.0, 0.3);
//! let at = |phase| expected_passive(&truth, v, mu, phase, &NoiseSpec::none()).unwrap();
//! let readings = Readings::from_pair(at(0.0), at(std::f64::consts::FRAC_PI_2));
//! let report = estimate_ideal_passive(&readings, v, mu).unwrap();
//! assert!((report.squeezing.unwrap() - 1.23).abs() < 1e-9);
//! ```

// Range checks are written `!(x > a)` so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod estimators;
pub mod gaussian;
pub mod interferometer;
pub mod rng;
pub mod statistics;

pub use error::{Error, Result};
