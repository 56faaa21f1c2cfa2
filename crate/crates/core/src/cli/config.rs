//! Experiment configuration: a TOML document with the sections
//! `[ensemble]`, `[law]`, `[law_b]`, `[statistic]`, `[run]` and `[output]`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ensembles::{CoefficientLaw, EnsembleSpec, Family, LawKind, LocalScale, SlowlyVarying};
use crate::error::{Error, Result};
use crate::region::Region;

pub const DEFAULT_TRIALS: u64 = 1000;
pub const DEFAULT_QUAD_TOL: f64 = 1e-8;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub ensemble: EnsembleSection,
    #[serde(default)]
    pub law: LawSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub law_b: Option<LawSection>,
    #[serde(default)]
    pub statistic: StatisticSection,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Trig cosine weights `c_0..c_n`; overrides `n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<f64>>,
    /// Trig sine weights `d_1..d_n`; defaults to `c_1..c_n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derivative: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    /// `constant:v` or `log:p`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slowly: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation_tol: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LawSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    /// Deterministic means, `"i:re"` or `"i:re:im"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shifts: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n0: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatisticSection {
    /// count, linear, correlation, repulsion, condition or baseline.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<String>,
    /// `[center, radius]` per real bump slot.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub real_bumps: Option<Vec<[f64; 2]>>,
    /// `[re, im, radius]` per complex bump slot.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complex_bumps: Option<Vec<[f64; 3]>>,
    /// Repulsion centre.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    /// Repulsion radius, Jensen inner radius.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer_radius: Option<f64>,
    /// c1, c2, c3, jensen, green or parseval.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frac: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lanes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quad_tol: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

fn config_err(e: impl std::fmt::Display) -> Error {
    Error::Config(e.to_string())
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(config_err)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn emit(&self) -> Result<String> {
        toml::to_string(self).map_err(config_err)
    }

    pub fn spec(&self) -> Result<EnsembleSpec> {
        let law = self.law.to_law()?;
        self.ensemble.to_spec(law)
    }

    pub fn law_b(&self) -> Result<Option<CoefficientLaw>> {
        self.law_b.as_ref().map(LawSection::to_law).transpose()
    }

    pub fn trials(&self) -> Result<u64> {
        match self.run.trials.unwrap_or(DEFAULT_TRIALS) {
            0 => Err(Error::Config("trials must be at least 1".into())),
            t => Ok(t),
        }
    }

    pub fn quad_tol(&self) -> Result<f64> {
        match self.run.quad_tol.unwrap_or(DEFAULT_QUAD_TOL) {
            t if t > 0.0 && t.is_finite() => Ok(t),
            t => Err(Error::Config(format!("quad_tol must be positive, got {t}"))),
        }
    }

    pub fn window(&self) -> Result<Option<(f64, f64)>> {
        match self.statistic.window {
            None => Ok(None),
            Some([a, b]) if a < b => Ok(Some((a, b))),
            Some([a, b]) => Err(Error::Config(format!("window [{a}, {b}] must have a < b"))),
        }
    }

    pub fn region(&self) -> Result<Option<Region>> {
        self.statistic.region.as_deref().map(|s| s.parse::<Region>().map_err(config_err)).transpose()
    }

    pub fn real_bumps(&self) -> Vec<(f64, f64)> {
        self.statistic.real_bumps.iter().flatten().map(|b| (b[0], b[1])).collect()
    }

    pub fn complex_bumps(&self) -> Vec<(Complex64, f64)> {
        self.statistic.complex_bumps.iter().flatten().map(|b| (Complex64::new(b[0], b[1]), b[2])).collect()
    }

    pub fn points(&self) -> Vec<Complex64> {
        self.statistic.points.iter().flatten().map(|p| Complex64::new(p[0], p[1])).collect()
    }
}

impl EnsembleSection {
    pub fn to_spec(&self, law: CoefficientLaw) -> Result<EnsembleSpec> {
        let name = self.family.as_deref().ok_or_else(|| Error::Config("ensemble.family is required".into()))?;
        let need_n = || self.n.ok_or_else(|| Error::Config(format!("ensemble.n is required for {name}")));
        let family = match name {
            "kac" => Family::Kac { n: need_n()? },
            "elliptic" => Family::Elliptic { n: need_n()? },
            "weyl" => Family::Weyl,
            "trig" => {
                let c = match &self.c {
                    Some(c) => c.clone(),
                    None => vec![1.0; need_n()? + 1],
                };
                if let (Some(n), Some(_)) = (self.n, &self.c) {
                    if n + 1 != c.len() {
                        return Err(Error::Config(format!("ensemble.n = {n} but c has {} entries", c.len())));
                    }
                }
                let d = self.d.clone().unwrap_or_else(|| c.iter().skip(1).copied().collect());
                Family::Trig { c, d, level: self.level.unwrap_or(0.0), derivative: self.derivative.unwrap_or(0) }
            }
            "taylor" => Family::Taylor {
                gamma: self.gamma.ok_or_else(|| Error::Config("ensemble.gamma is required for taylor".into()))?,
                slowly: match &self.slowly {
                    Some(s) => SlowlyVarying::parse(s).map_err(config_err)?,
                    None => SlowlyVarying::Constant(1.0),
                },
            },
            other => return Err(Error::Config(format!("unknown family `{other}`"))),
        };
        let unused = |key: &str, set: bool, ok: bool| {
            if set && !ok {
                Err(Error::Config(format!("ensemble.{key} does not apply to {name}")))
            } else {
                Ok(())
            }
        };
        let trig = name == "trig";
        unused("c", self.c.is_some(), trig)?;
        unused("d", self.d.is_some(), trig)?;
        unused("level", self.level.is_some(), trig)?;
        unused("derivative", self.derivative.is_some(), trig)?;
        unused("n", self.n.is_some(), matches!(name, "kac" | "elliptic" | "trig"))?;
        unused("gamma", self.gamma.is_some(), name == "taylor")?;
        unused("slowly", self.slowly.is_some(), name == "taylor")?;
        let mut spec = match family {
            Family::Weyl => {
                EnsembleSpec::new(family, law, LocalScale::new(0.5, Region::disk(Complex64::new(0.0, 0.0), 5.0))?)
            }
            _ => EnsembleSpec::with_defaults(family, law),
        }
        .map_err(config_err)?;
        if let Some(tol) = self.truncation_tol {
            spec = spec.with_truncation_tol(tol).map_err(config_err)?;
        }
        if let Some(d) = &self.domain {
            let region: Region = d.parse().map_err(config_err)?;
            spec = spec.with_domain(region).map_err(config_err)?;
        }
        if let Some(delta) = self.delta {
            spec.scale = LocalScale::new(delta, spec.scale.domain.clone()).map_err(config_err)?;
        }
        Ok(spec)
    }
}

/// Parses a law name: `gaussian`, `gaussian-complex`, `rademacher`,
/// `rademacher-complex`, `uniform[:h]` (default `h = √3`) or `degenerate`.
pub fn parse_law_kind(s: &str) -> Result<LawKind> {
    let (head, tail) = s.trim().split_once(':').unwrap_or((s.trim(), ""));
    let kind = match head {
        "gaussian" | "gaussian-real" => LawKind::GaussianReal,
        "gaussian-complex" => LawKind::GaussianComplex,
        "rademacher" => LawKind::Rademacher,
        "rademacher-complex" => LawKind::RademacherComplex,
        "uniform" | "uniform-symmetric" => {
            let half_width = if tail.is_empty() {
                3f64.sqrt()
            } else {
                tail.parse().map_err(|_| Error::Config(format!("bad uniform half width `{tail}`")))?
            };
            return Ok(LawKind::UniformSymmetric { half_width });
        }
        "degenerate" => LawKind::Degenerate,
        _ => return Err(Error::Config(format!("unknown law `{s}`"))),
    };
    if !tail.is_empty() {
        return Err(Error::Config(format!("law `{head}` takes no parameter")));
    }
    Ok(kind)
}

fn parse_shift(s: &str) -> Result<(usize, Complex64)> {
    let bad = || Error::Config(format!("bad shift `{s}`, expected i:re or i:re:im"));
    let parts: Vec<&str> = s.split(':').map(str::trim).collect();
    if !(2..=3).contains(&parts.len()) {
        return Err(bad());
    }
    let i = parts[0].parse().map_err(|_| bad())?;
    let re: f64 = parts[1].parse().map_err(|_| bad())?;
    let im: f64 = parts.get(2).map_or(Ok(0.0), |p| p.parse()).map_err(|_| bad())?;
    if !(re.is_finite() && im.is_finite()) {
        return Err(bad());
    }
    Ok((i, Complex64::new(re, im)))
}

impl LawSection {
    pub fn named(kind: &str) -> Self {
        Self { kind: Some(kind.to_string()), ..Self::default() }
    }

    pub fn to_law(&self) -> Result<CoefficientLaw> {
        let kind = parse_law_kind(self.kind.as_deref().unwrap_or("gaussian"))?;
        let mut law = CoefficientLaw::new(kind).map_err(config_err)?;
        for s in self.shifts.iter().flatten() {
            let (i, m) = parse_shift(s)?;
            law = law.with_shift(i, m);
        }
        if self.epsilon.is_some() || self.tau.is_some() || self.n0.is_some() {
            let n0 = self.n0.unwrap_or(law.exceptional_count);
            let (eps, tau) = (self.epsilon.unwrap_or(law.moment_epsilon), self.tau.unwrap_or(law.moment_bound));
            law = law.with_metadata(eps, tau, n0).map_err(config_err)?;
        }
        Ok(law)
    }
}
