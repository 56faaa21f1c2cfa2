//! Monte Carlo estimators of local zero statistics.

mod bump;
mod estimate;
mod harness;
mod ops;

pub use bump::{bump_profile, BumpFunction, Slot};
pub use estimate::{compare, pooled_z, ComparisonReport, Estimate};
pub use harness::{default_lanes, run_trials, run_trials_multi, TrialPlan, LANES_ENV};
pub use ops::{correlation_sum, linear_statistic, pair_repulsion_prob, windowed_count};
