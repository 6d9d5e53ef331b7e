//! Accelerated proximal point methods for monotone inclusions.
//!
//! The crate is generic over the scalar type ([`Scalar`]: `f32`, `f64`); the
//! certificate construction in [`pep_cert`] also runs over exact rationals.
//! Concrete aliases for the common double-precision case live at the root.

pub mod error;
pub mod linalg;
pub mod methods;
pub mod operators;
pub mod pep_cert;
pub mod problems;
pub mod scalar;
pub mod splitting;

pub use error::{Error, Result};
pub use scalar::{Field, Scalar};

/// Double-precision point of the coordinate Hilbert space.
pub type RealVector = linalg::Vector<f64>;
/// Single-precision point.
pub type RealVector32 = linalg::Vector<f32>;
pub type DenseMatrix = linalg::Matrix<f64>;
pub type DenseLinearOperator = operators::DenseLinearOperator<f64>;
pub type Preconditioner = operators::Preconditioner<f64>;
pub type QuadraticSaddle = operators::QuadraticSaddle<f64>;
pub type StepCoeffs = methods::StepCoeffs<f64>;
pub type ResidualTrace = methods::ResidualTrace<f64>;
/// Exact rational scalar used by the certificate checks.
pub type ExactRational = num_rational::BigRational;
