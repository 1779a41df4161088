//! Heavy-tail analysis toolkit: Pareto tail-index estimation by seven
//! closed-form methods plus the Hill estimator, seedable generation of
//! Pareto / GPD / symmetric-stable / Student-t data, Pareto diagnostics,
//! and timing/accuracy harnesses.
//!
//! Core math is generic over the float scalar via `num_traits::Float`;
//! the `*64` aliases below cover the default double-precision pipeline.
//! Sampling and harnesses are f64-only so that a seed maps to one
//! well-defined bit stream.

pub mod diagnostics;
pub mod error;
pub mod estimators;
pub mod gpd;
pub mod harness;
pub mod sample;
pub mod sampling;

pub use error::{Error, Result};
pub use estimators::{
    alpha_geometric_percentile, alpha_hills, alpha_ls, alpha_mle, alpha_modified_percentile,
    alpha_moment, alpha_percentile, alpha_wls, generate_all_estimates, HillSpec, Method,
    MleOptions,
};
pub use sample::{quantile, Sample};
pub use sampling::{
    generate_gpd, generate_pareto, generate_stable_symmetric, generate_student_t, RngState,
};

pub type Sample64 = sample::Sample<f64>;
pub type RankedSample64 = sample::RankedSample<f64>;
pub type EstimateResult64 = sample::EstimateResult<f64>;
pub type ConfidenceInterval64 = sample::ConfidenceInterval<f64>;
pub type ParetoParams64 = gpd::ParetoParams<f64>;
pub type GpdParams64 = gpd::GpdParams<f64>;
pub type HillSpec64 = estimators::HillSpec<f64>;

pub type Sample32 = sample::Sample<f32>;
pub type EstimateResult32 = sample::EstimateResult<f32>;
