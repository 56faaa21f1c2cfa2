use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::law::CoefficientLaw;
use crate::error::{Error, Result};
use crate::region::Region;

pub const DEFAULT_TRUNCATION_TOL: f64 = 1e-12;

/// Slowly varying factor `L(k)` in `c_k² = max(k,1)^(γ-1) L(k) / Γ(γ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SlowlyVarying {
    Constant(f64),
    /// `ln(e + k)^p`.
    LogPower(f64),
}

impl SlowlyVarying {
    pub fn ln_value(&self, k: usize) -> f64 {
        match *self {
            SlowlyVarying::Constant(v) => v.ln(),
            SlowlyVarying::LogPower(p) => p * (std::f64::consts::E + k as f64).ln().ln(),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let (head, tail) = s.split_once(':').unwrap_or((s, ""));
        let v: f64 = if tail.is_empty() {
            1.0
        } else {
            tail.trim().parse().map_err(|_| Error::InvalidSpec(format!("bad slowly varying `{s}`")))?
        };
        match head.trim() {
            "constant" => Ok(SlowlyVarying::Constant(v)),
            "log" => Ok(SlowlyVarying::LogPower(v)),
            _ => Err(Error::InvalidSpec(format!("unknown slowly varying function `{s}`"))),
        }
    }
}

impl fmt::Display for SlowlyVarying {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlowlyVarying::Constant(v) => write!(f, "constant:{v}"),
            SlowlyVarying::LogPower(p) => write!(f, "log:{p}"),
        }
    }
}

/// One basis function returning `[φ(z), φ'(z), φ''(z)]`.
pub type BasisFn = Arc<dyn Fn(Complex64) -> [Complex64; 3] + Send + Sync>;

/// User-supplied finite basis.
#[derive(Clone)]
pub struct GenericBasis {
    pub name: String,
    pub terms: Vec<BasisFn>,
    /// Every term is real on the real axis.
    pub real: bool,
}

impl GenericBasis {
    pub fn new(name: impl Into<String>, terms: Vec<BasisFn>, real: bool) -> Self {
        Self { name: name.into(), terms, real }
    }
}

impl fmt::Debug for GenericBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GenericBasis({}, {} terms)", self.name, self.terms.len())
    }
}

impl PartialEq for GenericBasis {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.real == other.real
            && self.terms.len() == other.terms.len()
            && self.terms.iter().zip(&other.terms).all(|(a, b)| Arc::ptr_eq(a, b))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    /// `Σ_{i=0}^n ξ_i z^i`.
    Kac {
        n: usize,
    },
    /// `Σ_j ξ_j z^j / √(j!)`, truncated on the domain.
    Weyl,
    /// `Σ_{i=0}^n ξ_i √C(n,i) z^i`.
    Elliptic {
        n: usize,
    },
    /// `d^k/dz^k [Σ_{j=0}^n c_j ξ_j cos(jz) + Σ_{j=1}^n d_j η_j sin(jz)] - u·σ_k`
    /// where `σ_k² = Σ (j^k c_j)²`. Coefficient layout: `ξ_0..ξ_n, η_1..η_n`.
    Trig {
        c: Vec<f64>,
        d: Vec<f64>,
        level: f64,
        derivative: u32,
    },
    /// `Σ_k c_k ξ_k z^k`, `c_k² = max(k,1)^(γ-1) L(k) / Γ(γ)`.
    Taylor {
        gamma: f64,
        slowly: SlowlyVarying,
    },
    Generic(GenericBasis),
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Kac { .. } => "kac",
            Family::Weyl => "weyl",
            Family::Elliptic { .. } => "elliptic",
            Family::Trig { .. } => "trig",
            Family::Taylor { .. } => "taylor",
            Family::Generic(_) => "generic",
        }
    }

    /// Degree parameter where one exists.
    pub fn degree(&self) -> Option<usize> {
        match self {
            Family::Kac { n } | Family::Elliptic { n } => Some(*n),
            Family::Trig { c, .. } => Some(c.len() - 1),
            Family::Generic(b) => Some(b.terms.len().saturating_sub(1)),
            _ => None,
        }
    }

    pub fn is_power_series(&self) -> bool {
        matches!(self, Family::Kac { .. } | Family::Weyl | Family::Elliptic { .. } | Family::Taylor { .. })
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Family::Weyl | Family::Taylor { .. })
    }

    /// Basis functions are real on the real axis.
    pub fn is_real(&self) -> bool {
        match self {
            Family::Generic(b) => b.real,
            _ => true,
        }
    }

    /// Trig family with `c ≡ d ≡ 1`, derivative 0, level 0 on `n`.
    pub fn trig_flat(n: usize) -> Self {
        Family::Trig { c: vec![1.0; n + 1], d: vec![1.0; n], level: 0.0, derivative: 0 }
    }
}

/// Scale window `(δ_n, D_n)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalScale {
    pub delta: f64,
    pub domain: Region,
}

impl LocalScale {
    pub fn new(delta: f64, domain: Region) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidSpec(format!("delta {delta} must lie in (0,1)")));
        }
        if domain.is_empty() {
            return Err(Error::InvalidSpec("empty domain".into()));
        }
        Ok(Self { delta, domain })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleSpec {
    pub family: Family,
    pub law: CoefficientLaw,
    pub scale: LocalScale,
    pub truncation_tol: f64,
}

impl EnsembleSpec {
    pub fn new(family: Family, law: CoefficientLaw, scale: LocalScale) -> Result<Self> {
        let spec = Self { family, law, scale, truncation_tol: DEFAULT_TRUNCATION_TOL };
        spec.validate()?;
        Ok(spec)
    }

    /// Spec with a default scale window suited to the family.
    pub fn with_defaults(family: Family, law: CoefficientLaw) -> Result<Self> {
        let domain = match &family {
            Family::Kac { n } | Family::Elliptic { n } => {
                let _ = n;
                Region::Plane
            }
            Family::Trig { c, .. } => {
                let n = (c.len().max(2) - 1) as f64;
                Region::Strip { re_min: 0.0, re_max: 2.0 * std::f64::consts::PI, height: 10.0 / n }
            }
            Family::Weyl => Region::disk(Complex64::new(0.0, 0.0), 5.0),
            Family::Taylor { .. } => Region::disk(Complex64::new(0.0, 0.0), 0.9),
            Family::Generic(_) => Region::Plane,
        };
        let delta = match family.degree() {
            Some(n) if n >= 2 => 1.0 / n as f64,
            _ => 0.5,
        };
        Self::new(family, law, LocalScale::new(delta, domain)?)
    }

    pub fn kac(n: usize, law: CoefficientLaw) -> Result<Self> {
        Self::with_defaults(Family::Kac { n }, law)
    }

    pub fn elliptic(n: usize, law: CoefficientLaw) -> Result<Self> {
        Self::with_defaults(Family::Elliptic { n }, law)
    }

    pub fn trig(c: Vec<f64>, d: Vec<f64>, level: f64, law: CoefficientLaw) -> Result<Self> {
        Self::with_defaults(Family::Trig { c, d, level, derivative: 0 }, law)
    }

    pub fn trig_flat(n: usize, law: CoefficientLaw) -> Result<Self> {
        Self::with_defaults(Family::trig_flat(n), law)
    }

    pub fn weyl(domain: Region, law: CoefficientLaw) -> Result<Self> {
        Self::new(Family::Weyl, law, LocalScale::new(0.5, domain)?)
    }

    pub fn taylor(gamma: f64, slowly: SlowlyVarying, domain: Region, law: CoefficientLaw) -> Result<Self> {
        Self::new(Family::Taylor { gamma, slowly }, law, LocalScale::new(0.5, domain)?)
    }

    pub fn with_law(&self, law: CoefficientLaw) -> Self {
        Self { law, ..self.clone() }
    }

    pub fn with_truncation_tol(mut self, tol: f64) -> Result<Self> {
        self.truncation_tol = tol;
        self.validate()?;
        Ok(self)
    }

    pub fn with_domain(&self, domain: Region) -> Result<Self> {
        let mut s = self.clone();
        s.scale = LocalScale::new(s.scale.delta, domain)?;
        s.validate()?;
        Ok(s)
    }

    /// Number of coefficients a realization carries.
    pub fn term_count(&self) -> Result<usize> {
        Ok(match &self.family {
            Family::Kac { n } | Family::Elliptic { n } => n + 1,
            Family::Trig { c, .. } => 2 * c.len() - 1,
            Family::Generic(b) => b.terms.len(),
            Family::Weyl | Family::Taylor { .. } => {
                super::truncation::truncation_length(self, &self.scale.domain, self.truncation_tol)?
            }
        })
    }

    /// Real coefficients and real basis.
    pub fn is_real(&self) -> bool {
        self.family.is_real() && self.law.is_real()
    }

    pub fn label(&self) -> String {
        match &self.family {
            Family::Kac { n } => format!("kac(n={n})"),
            Family::Elliptic { n } => format!("elliptic(n={n})"),
            Family::Weyl => format!("weyl[{}]", self.scale.domain),
            Family::Trig { c, level, derivative, .. } => {
                let mut s = format!("trig(n={})", c.len() - 1);
                if *derivative > 0 {
                    s.push_str(&format!("'{derivative}"));
                }
                if *level != 0.0 {
                    s.push_str(&format!("@u={level}"));
                }
                s
            }
            Family::Taylor { gamma, slowly } => format!("taylor(gamma={gamma},L={slowly})"),
            Family::Generic(b) => format!("generic({})", b.name),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.truncation_tol > 0.0 && self.truncation_tol < 1.0) {
            return Err(Error::InvalidSpec("truncation tolerance must lie in (0,1)".into()));
        }
        match &self.family {
            Family::Kac { n } | Family::Elliptic { n } => {
                if *n < 1 {
                    return Err(Error::InvalidSpec("n must be at least 1".into()));
                }
            }
            Family::Trig { c, d, level, .. } => {
                if c.len() < 2 {
                    return Err(Error::InvalidSpec("trig needs c_0..c_n with n >= 1".into()));
                }
                if d.len() > c.len() - 1 {
                    return Err(Error::InvalidSpec(format!(
                        "trig d has {} entries, at most {} allowed",
                        d.len(),
                        c.len() - 1
                    )));
                }
                if c.iter().chain(d).any(|x| !x.is_finite()) || !level.is_finite() {
                    return Err(Error::InvalidSpec("non-finite trig coefficient".into()));
                }
                if c.iter().chain(d).all(|&x| x == 0.0) {
                    return Err(Error::InvalidSpec("all trig coefficients vanish".into()));
                }
            }
            Family::Taylor { gamma, slowly } => {
                if !(*gamma > 0.0 && gamma.is_finite()) {
                    return Err(Error::InvalidSpec("gamma must be positive".into()));
                }
                if let SlowlyVarying::Constant(v) = slowly {
                    if !(*v > 0.0 && v.is_finite()) {
                        return Err(Error::InvalidSpec("L must be positive".into()));
                    }
                }
                if !slowly.ln_value(0).is_finite() {
                    return Err(Error::InvalidSpec("L must be finite".into()));
                }
            }
            Family::Weyl => {}
            Family::Generic(b) => {
                if b.terms.is_empty() {
                    return Err(Error::InvalidSpec("generic basis is empty".into()));
                }
            }
        }
        if self.family.is_infinite() {
            self.term_count()?;
        }
        Ok(())
    }
}
