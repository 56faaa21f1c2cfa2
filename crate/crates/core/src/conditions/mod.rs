//! Numerical probes of the hypotheses on `F = Σ ξ_i φ_i` and of the
//! identities behind the zero statistics.

mod identities;
mod moments;
mod probes;
mod report;

pub use identities::{green_identity_residual, jensen_zero_bound, parseval_check, GREEN_TOL};
pub use moments::{c1_match_report, check_c3};
pub use probes::{
    boundedness_prob, c2_report, delocalization_ratio, derivative_growth_ratios, derivative_growth_ratios_rescaled,
    small_ball_prob,
};
pub use report::{ConditionProbeConfig, ConditionReport, Measurement, Verdict};
