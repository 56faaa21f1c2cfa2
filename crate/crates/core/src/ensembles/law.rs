use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LawKind {
    GaussianReal,
    /// Independent real and imaginary parts, each of variance 1/2.
    GaussianComplex,
    Rademacher,
    /// Uniform on `(±1 ± i)/√2`; matches `GaussianComplex` to second order.
    RademacherComplex,
    /// Uniform on `[-h, h]`, variance `h²/3`.
    UniformSymmetric {
        half_width: f64,
    },
    /// Point mass at zero; only the mean shifts remain. Used to build
    /// deterministic functions inside the same machinery.
    Degenerate,
}

impl LawKind {
    pub fn name(&self) -> String {
        match self {
            LawKind::GaussianReal => "gaussian-real".into(),
            LawKind::GaussianComplex => "gaussian-complex".into(),
            LawKind::Rademacher => "rademacher".into(),
            LawKind::RademacherComplex => "rademacher-complex".into(),
            LawKind::UniformSymmetric { half_width } => format!("uniform-symmetric({half_width})"),
            LawKind::Degenerate => "degenerate".into(),
        }
    }

    pub fn is_real(&self) -> bool {
        !matches!(self, LawKind::GaussianComplex | LawKind::RademacherComplex)
    }

    pub fn is_gaussian(&self) -> bool {
        matches!(self, LawKind::GaussianReal | LawKind::GaussianComplex)
    }

    /// `E|ξ - Eξ|²`.
    pub fn variance(&self) -> f64 {
        match *self {
            LawKind::UniformSymmetric { half_width } => half_width * half_width / 3.0,
            LawKind::Degenerate => 0.0,
            _ => 1.0,
        }
    }
}

/// Distribution of the random coefficients, with the moment-matching
/// metadata `ε`, `τ`, `N₀`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientLaw {
    pub kind: LawKind,
    pub mean_shifts: BTreeMap<usize, Complex64>,
    pub moment_epsilon: f64,
    pub moment_bound: f64,
    pub exceptional_count: usize,
}

impl CoefficientLaw {
    pub fn new(kind: LawKind) -> Result<Self> {
        if let LawKind::UniformSymmetric { half_width } = kind {
            if !(half_width > 0.0 && half_width.is_finite()) {
                return Err(Error::InvalidLaw(format!("half width {half_width} must be positive")));
            }
        }
        Ok(Self { kind, mean_shifts: BTreeMap::new(), moment_epsilon: 1.0, moment_bound: 1.0, exceptional_count: 0 })
    }

    pub fn gaussian() -> Self {
        Self::new(LawKind::GaussianReal).expect("valid law")
    }

    pub fn gaussian_complex() -> Self {
        Self::new(LawKind::GaussianComplex).expect("valid law")
    }

    pub fn rademacher() -> Self {
        Self::new(LawKind::Rademacher).expect("valid law")
    }

    pub fn rademacher_complex() -> Self {
        Self::new(LawKind::RademacherComplex).expect("valid law")
    }

    pub fn uniform(half_width: f64) -> Result<Self> {
        Self::new(LawKind::UniformSymmetric { half_width })
    }

    pub fn degenerate() -> Self {
        Self::new(LawKind::Degenerate).expect("valid law")
    }

    /// Adds a deterministic mean at `index`. `N₀` is raised to cover it.
    pub fn with_shift(mut self, index: usize, mean: Complex64) -> Self {
        self.mean_shifts.insert(index, mean);
        self.exceptional_count = self.exceptional_count.max(index + 1);
        self
    }

    /// Sets the moment metadata without touching the shifts. The
    /// `shift index < N₀` invariant is deliberately not enforced here so
    /// that condition probes can report violations.
    pub fn with_metadata(mut self, epsilon: f64, tau: f64, n0: usize) -> Result<Self> {
        if !(epsilon > 0.0) || !(tau > 0.0) {
            return Err(Error::InvalidLaw("epsilon and tau must be positive".into()));
        }
        self.moment_epsilon = epsilon;
        self.moment_bound = tau;
        self.exceptional_count = n0;
        Ok(self)
    }

    pub fn is_real(&self) -> bool {
        self.kind.is_real() && self.mean_shifts.values().all(|m| m.im == 0.0)
    }

    pub fn mean(&self, index: usize) -> Complex64 {
        self.mean_shifts.get(&index).copied().unwrap_or_default()
    }

    pub fn variance(&self) -> f64 {
        self.kind.variance()
    }

    /// Whether every shift sits below `N₀`.
    pub fn shifts_within_exceptional(&self) -> bool {
        self.mean_shifts.keys().all(|&i| i < self.exceptional_count)
    }

    /// The centred part of one draw.
    pub fn sample_centered<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex64 {
        match self.kind {
            LawKind::GaussianReal => Complex64::new(StandardNormal.sample(rng), 0.0),
            LawKind::GaussianComplex => {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
            }
            LawKind::Rademacher => Complex64::new(if rng.random::<bool>() { 1.0 } else { -1.0 }, 0.0),
            LawKind::RademacherComplex => {
                let bits = rng.random::<u32>();
                let re = if bits & 1 == 0 { FRAC_1_SQRT_2 } else { -FRAC_1_SQRT_2 };
                let im = if bits & 2 == 0 { FRAC_1_SQRT_2 } else { -FRAC_1_SQRT_2 };
                Complex64::new(re, im)
            }
            LawKind::UniformSymmetric { half_width } => Complex64::new(rng.random_range(-half_width..=half_width), 0.0),
            LawKind::Degenerate => Complex64::new(0.0, 0.0),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, index: usize) -> Complex64 {
        self.sample_centered(rng) + self.mean(index)
    }
}

impl fmt::Display for CoefficientLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.name())?;
        for (i, m) in &self.mean_shifts {
            write!(f, "+[{i}:{}]", m)?;
        }
        Ok(())
    }
}
