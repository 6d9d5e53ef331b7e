//! Small dense linear algebra: vectors, matrices, LU solves, symmetric
//! eigenvalues and spectral norms.

mod eigen;
mod lu;
mod matrix;
mod norm;
mod vector;

pub use eigen::{min_symmetric_eigenvalue, symmetric_eigenvalues};
pub use lu::{solve, LuFactor};
pub use matrix::Matrix;
pub use norm::spectral_norm;
pub use vector::Vector;
