//! Splitting methods derived from the proximal point family: saddle-point
//! proximal iterations, the proximal method of multipliers, PDHG,
//! Douglas-Rachford and ADMM. Each takes a [`Scheme`](crate::methods::Scheme)
//! selecting plain, accelerated or Güler-type extrapolation, and honors the
//! restart policy in [`RunOptions`](crate::methods::RunOptions).

mod admm;
mod drs;
mod pdhg;
mod prox;
mod saddle;

pub use admm::{admm, difference_matrix, AdmmIterate, AdmmTrace, AffineConstraint};
pub use drs::{drs, DouglasRachford};
pub use pdhg::{pdhg, pdhg_preconditioner, PdhgStep, NORM_MAX_ITERS, NORM_REL_TOL};
pub use prox::{fista_strongly_convex, soft_threshold, InnerSolverConfig, ProxDescriptor};
pub use saddle::{accelerated_prox_multipliers, accelerated_saddle_ppm, MultiplierStep};
