//! Iteration engines for the proximal point family.

mod engine;
mod forward;
mod general;
mod trace;

pub use engine::{
    accelerated_ppm, fixed_point_estimate, guler, guler_t_sequence, optimal_restart_interval, ppm, ppm_bound,
    restarted, run_scheme, run_scheme_observed, Extrapolator, GulerVariant, RestartMode, RestartPolicy,
    RunOptions, Scheme,
};
pub use forward::forward_method;
pub use general::{general_ppm, StepCoeffs};
pub use trace::{ResidualTrace, SplittingTrace, TraceRecord};
