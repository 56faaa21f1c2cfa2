use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Consistent,
    Inconsistent,
    Indeterminate,
}

/// One measured quantity next to the scaling the hypothesis asks for.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Measurement {
    pub name: String,
    pub point: Option<[f64; 2]>,
    pub value: f64,
    /// The required bound without its unspecified constant, e.g. `δ^α₁`.
    pub required: Option<f64>,
    /// `value / required`: the smallest constant that makes the bound hold.
    pub implied_constant: Option<f64>,
}

impl Measurement {
    pub fn new(name: impl Into<String>, point: Option<Complex64>, value: f64, required: Option<f64>) -> Self {
        let implied_constant = required.map(|r| value / r);
        Self { name: name.into(), point: point.map(|z| [z.re, z.im]), value, required, implied_constant }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionReport {
    pub condition: String,
    pub subject: String,
    pub measurements: Vec<Measurement>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl ConditionReport {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::InvalidArgument(e.to_string()))
    }
}

/// Parameters of the probes for the analytic hypotheses.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionProbeConfig {
    /// Exponent of the failure probability `δ^A`.
    pub a: f64,
    /// `C₁`, a positive exponent bound.
    pub c1_exponent: f64,
    /// `α₁` in the delocalization bound `δ^α₁`.
    pub alpha1: f64,
    /// `c₁` in `exp(±δ^{-c₁})` and `δ^{-c₁}`.
    pub c1: f64,
    pub c2: f64,
    pub probe_points: Vec<Complex64>,
    pub trials: u64,
}

impl ConditionProbeConfig {
    pub fn new(probe_points: Vec<Complex64>) -> Self {
        Self { a: 1.0, c1_exponent: 1.0, alpha1: 0.5, c1: 0.5, c2: 0.005, probe_points, trials: 1000 }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in
            [("A", self.a), ("C1", self.c1_exponent), ("alpha1", self.alpha1), ("c1", self.c1), ("c2", self.c2)]
        {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
            }
        }
        if self.probe_points.is_empty() {
            return Err(Error::InvalidArgument("at least one probe point is required".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        Ok(())
    }
}
