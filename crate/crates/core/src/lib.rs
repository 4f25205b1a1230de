//! Numerical laboratory for weighted angularly mixed Strichartz norms and the
//! mass-critical inhomogeneous nonlinear Schrödinger equation
//! `i u_t + Delta u = lambda |x|^{-alpha} |u|^beta u`.
//!
//! The numerical core is generic over [`scalar::Real`] (`f32`, `f64`);
//! exponent arithmetic is exact over [`num_rational::Ratio`].

pub mod error;
pub mod estimator;
pub mod exponents;
pub mod fft;
pub mod fit;
pub mod grid;
pub mod inls;
pub mod mixed_norms;
pub mod propagator;
pub mod quadrature;
pub mod scalar;
pub mod sphere;
pub mod whitney;

pub use error::{Error, Result};

/// Exact rational used by the exponent bookkeeping.
pub type Rational = num_rational::Ratio<i64>;

pub type Complex64 = num_complex::Complex<f64>;
pub type CartesianGrid64 = grid::CartesianGrid<f64>;
pub type Field64 = grid::Field<f64>;
pub type PolarGrid64 = grid::PolarGrid<f64>;
pub type PolarField64 = grid::PolarField<f64>;
pub type GaussianParams64 = propagator::GaussianParams<f64>;
pub type Trajectory64 = propagator::Trajectory<f64>;
pub type MixedNormSpec64 = mixed_norms::MixedNormSpec<f64>;
pub type PacketSum64 = estimator::PacketSum<f64>;
pub type DataFamily64 = estimator::DataFamily<f64>;
pub type INLSProblem64 = inls::INLSProblem<f64>;
pub type SolverConfig64 = inls::SolverConfig<f64>;
