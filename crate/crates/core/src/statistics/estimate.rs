use std::fmt;

use crate::special::ExactSum;

/// Monte Carlo mean with its standard error.
///
/// Sums are kept exactly, so merging estimates of disjoint trial sets gives
/// the same numbers as one estimate over their union, whatever the order.
#[derive(Clone, Debug, PartialEq)]
pub struct Estimate {
    sum: ExactSum,
    sumsq: ExactSum,
    pub trials: u64,
    pub failed: u64,
    pub min: f64,
    pub max: f64,
    pub seed: u64,
    pub label: String,
}

impl Estimate {
    pub fn new(label: impl Into<String>, seed: u64) -> Self {
        Self {
            sum: ExactSum::new(),
            sumsq: ExactSum::new(),
            trials: 0,
            failed: 0,
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
            seed,
            label: label.into(),
        }
    }

    pub fn from_values(label: impl Into<String>, seed: u64, values: &[f64]) -> Self {
        let mut e = Self::new(label, seed);
        for &x in values {
            e.push(x);
        }
        e
    }

    pub fn push(&mut self, x: f64) {
        self.sum.add(x);
        self.sumsq.add(x * x);
        self.trials += 1;
        self.min = self.min.min(x);
        self.max = self.max.max(x);
    }

    pub fn push_failure(&mut self) {
        self.failed += 1;
    }

    pub fn merge(&mut self, other: &Estimate) {
        self.sum.merge(&other.sum);
        self.sumsq.merge(&other.sumsq);
        self.trials += other.trials;
        self.failed += other.failed;
        self.min = self.min.min(other.min);
        self.max = self.max.max(other.max);
    }

    pub fn sum(&self) -> f64 {
        self.sum.value()
    }

    pub fn mean(&self) -> f64 {
        if self.trials == 0 {
            f64::NAN
        } else {
            self.sum.value() / self.trials as f64
        }
    }

    /// `Σ (x - mean)²`.
    pub fn m2(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        let s = self.sum.value();
        (self.sumsq.value() - s * s / self.trials as f64).max(0.0)
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.trials < 2 {
            f64::NAN
        } else {
            self.m2() / (self.trials - 1) as f64
        }
    }

    pub fn stderr(&self) -> f64 {
        if self.trials < 2 {
            f64::NAN
        } else {
            (self.variance() / self.trials as f64).sqrt()
        }
    }
}

impl fmt::Display for Estimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {:.6} ± {:.6} ({} trials)", self.label, self.mean(), self.stderr(), self.trials)
    }
}

/// Difference of two estimates with its pooled standard error.
#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonReport {
    pub estimate_a: Estimate,
    pub estimate_b: Estimate,
    pub difference: f64,
    pub pooled_stderr: f64,
    pub z_score: f64,
}

/// `a - b` with pooled standard error `√(sa² + sb²)`.
pub fn compare(a: &Estimate, b: &Estimate) -> ComparisonReport {
    let difference = a.mean() - b.mean();
    let (pooled_stderr, z_score) = pooled_z(difference, a.stderr(), b.stderr());
    ComparisonReport { estimate_a: a.clone(), estimate_b: b.clone(), difference, pooled_stderr, z_score }
}

/// `(√(sa² + sb²), difference / pooled)`. The z-score is zero when both the
/// difference and the pooled error vanish, and infinite when only the error
/// does.
pub fn pooled_z(difference: f64, stderr_a: f64, stderr_b: f64) -> (f64, f64) {
    let pooled = stderr_a.hypot(stderr_b);
    let z = if pooled > 0.0 {
        difference / pooled
    } else if difference == 0.0 {
        0.0
    } else {
        difference.signum() * f64::INFINITY
    };
    (pooled, z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_values_have_zero_stderr() {
        let e = Estimate::from_values("c", 0, &[2.0; 10]);
        assert_eq!(e.mean(), 2.0);
        assert_eq!(e.stderr(), 0.0);
    }

    #[test]
    fn arithmetic_comparison() {
        let (pooled, z) = pooled_z(10.0 - 11.0, 0.3, 0.4);
        assert!((pooled - 0.5).abs() < 1e-15);
        assert!((z + 2.0).abs() < 1e-12);
        let e = Estimate::from_values("x", 1, &[1.0, 2.0, 4.0]);
        let r = compare(&e, &e);
        assert_eq!((r.difference, r.z_score), (0.0, 0.0));
    }

    #[test]
    fn textbook_variance() {
        let e = Estimate::from_values("x", 0, &[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]);
        assert_eq!(e.mean(), 5.0);
        assert!((e.variance() - 32.0 / 7.0).abs() < 1e-14);
    }
}
