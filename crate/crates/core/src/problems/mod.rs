//! Instance generators for the benchmark setups, a shared seeded PRNG, a
//! plain-text instance format and the figure presets.
//!
//! Every generator is a pure function of its parameters and seed.

mod generators;
mod instance;
mod presets;
mod rng;

pub use generators::{
    basis_pursuit_instance, bilinear_game_instance, random_monotone_operator, random_quadratic_saddle,
    rotation_worst_case, strongly_monotone_toy, strongly_monotone_toy_saddle, toy_start, tv_instance, TvInstance,
    SPARSITY_QUANTILE, TV_BREAKPOINTS, TV_NOISE_SCALE,
};
pub use instance::{InstanceKind, ProblemInstance};
pub use presets::{Preset, PresetParams, Scale, DEFAULT_SEED};
pub use rng::Rng;
