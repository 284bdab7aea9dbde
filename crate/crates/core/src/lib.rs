//! Numerical laboratory for power moments of the Rankin–Selberg error term
//! `Δ₁(x; φ)` attached to the weight-12 discriminant form.
//!
//! Layers, bottom-up:
//!
//! * [`coeffs`]: exact `τ(n)` via NTT squaring of the Jacobi cube, the
//!   convolution coefficients `c_n`, and a text cache.
//! * [`radicals`]: exact arithmetic on signed sums of fourth roots, zero tests
//!   and brute-force counting for near-relations.
//! * [`constants`]: the relation series `s_{k;l}`, `B_k`, the second-moment
//!   constant and the main-term predictions.
//! * [`errterm`]: Riesz means, calibrated `Δ₁`, the truncated Voronoi sum
//!   `R₁` and remainder `R₂`.
//! * [`moments`]: exact piecewise-polynomial quadrature of `Δ₁^k` and the
//!   scaling experiments.
//!
//! The floating layer is generic over [`Real`]; the aliases below fix it to
//! `f64`, which is what the experiments need.

pub mod arith;
pub mod coeffs;
pub mod constants;
pub mod dd;
pub mod error;
pub mod errterm;
pub mod moments;
pub mod quadrature;
pub mod radicals;
pub mod scalar;
pub mod sum;

pub use error::{Error, Result};
pub use scalar::Real;

pub type CoeffTable = coeffs::CoeffTable<f64>;
pub type Calibration = errterm::CalibrationConstants<f64>;
pub type SeriesValue = constants::SeriesValue<f64>;
pub type MomentReport = moments::MomentReport<f64>;
pub type Neumaier = sum::Neumaier<f64>;
pub type GaussLegendre = quadrature::GaussLegendre<f64>;
