//! A two-sector stock-flow consistent model of an economy growing on a
//! regenerating natural resource.
//!
//! The state is advanced by [`integrator::integrate`]; [`scenario`] holds the
//! twelve preset scenarios and their exogenous schedules, [`accounting`] and
//! [`analytics`] post-process a sampled run.

// `!(x > 0.0)` is used on purpose so NaN fails validation. An aborted run
// carries its partial output in the error.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::result_large_err, clippy::too_many_arguments)]

pub mod error;
pub mod params;
pub mod state;
pub mod model;
pub mod scenario;
pub mod initial;
pub mod dynamics;
pub mod integrator;
pub mod accounting;
pub mod analytics;
pub mod config;
pub mod output;
pub mod report;
pub mod cli;

pub use error::{ConfigError, ModelError};
pub use params::Params;
pub use scenario::ScenarioSpec;
pub use state::State;
