//! Monte-Carlo error analysis and its normal-approximation counterparts.
//!
//! [`empirical_mse`] simulates independent blocks of shots and averages the
//! squared estimation errors. For the beam-splitter scheme with a thermal
//! source, [`qhat_normal_approx`] and [`fisher_information_normal`] give the
//! analytic estimates of the error of `q̂` that the simulation is compared
//! against, and [`scaling_fit`] measures how the error falls with `N`.

mod approx;
mod fisher;
mod fit;
mod mse;
pub mod quadrature;
pub mod special;

pub use approx::{
    c_moments, qhat_normal_approx, sqrt_shifted_mean_tricomi, sqrt_shifted_moments, ApproxMoments,
    QuadratureMethod, SqrtMoments, QUADRATURE_TOL,
};
pub use fisher::{cramer_rao_bound, fisher_coefficients, fisher_information_normal, CramerRao};
pub use fit::{scaling_fit, ScalingFit};
pub use mse::{empirical_mse, Method, MseResult, Pipeline, PipelineMse, StandardPipeline, Target};
