use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::quadrature::integrate_pieces;
use crate::ensembles::{Ensemble, EnsembleSpec, Family};
use crate::error::{Error, Result};
use crate::special::{normal_cdf, normal_pdf};

/// Below this `𝒮/(𝒫𝒬)` the process and its derivative are treated as
/// degenerate and `1 - ρ²` is floored at zero.
const DEGENERATE: f64 = 1e-14;

/// Mean and covariance data of `(P(t), P'(t))` at one point.
///
/// `m`, `dm` carry the factor `e^{-log_scale}` and `p`, `q`, `r` carry
/// `e^{-2 log_scale}`, which leaves every ratio in the Kac–Rice integrand
/// unchanged.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Moments {
    pub m: f64,
    pub dm: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub log_scale: f64,
}

impl Moments {
    pub fn unscaled(m: f64, dm: f64, p: f64, q: f64, r: f64) -> Self {
        Self { m, dm, p, q, r, log_scale: 0.0 }
    }

    /// `𝒮 = 𝒫𝒬 - ℛ²`.
    pub fn s(&self) -> f64 {
        self.p * self.q - self.r * self.r
    }

    pub fn rho(&self) -> f64 {
        let pq = self.p * self.q;
        if pq > 0.0 {
            self.r / pq.sqrt()
        } else {
            0.0
        }
    }

    /// `η = (m' - ρ m √(𝒬/𝒫)) / √(𝒬(1 - ρ²))`; infinite in the degenerate
    /// limit.
    pub fn eta(&self) -> f64 {
        let (num, den) = self.eta_parts();
        if den > 0.0 {
            num / den
        } else {
            num.signum() * f64::INFINITY
        }
    }

    /// Numerator `m' - ℛm/𝒫` and denominator `√(𝒮/𝒫)` of `η`.
    fn eta_parts(&self) -> (f64, f64) {
        let num = self.dm - self.r * self.m / self.p;
        let s = self.s();
        let den = if s <= DEGENERATE * self.p * self.q { 0.0 } else { (s / self.p).sqrt() };
        (num, den)
    }

    /// `√(𝒬(1-ρ²)/𝒫) φ(m/√𝒫) (2φ(η) + η(2Φ(η) - 1))`, written so that the
    /// degenerate limit `𝒮 → 0` is continuous.
    pub fn kac_rice_density(&self) -> f64 {
        if !(self.p > 0.0) {
            return 0.0;
        }
        let sp = self.p.sqrt();
        let (num, den) = self.eta_parts();
        let bracket = if den > 0.0 {
            let eta = num / den;
            den * 2.0 * normal_pdf(eta) + num * (2.0 * normal_cdf(eta) - 1.0)
        } else {
            num.abs()
        };
        normal_pdf(self.m / sp) * bracket / sp
    }
}

type MomentFn = dyn Fn(f64) -> Result<Moments> + Send + Sync;

/// A real gaussian process on an open interval, described by `m`, `𝒫`, `𝒬`
/// and `ℛ`.
#[derive(Clone)]
pub struct GaussianProcessModel {
    moments: Arc<MomentFn>,
    pub interval: (f64, f64),
    pub singular_points: Vec<f64>,
    pub label: String,
}

impl fmt::Debug for GaussianProcessModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GaussianProcessModel")
            .field("label", &self.label)
            .field("interval", &self.interval)
            .field("singular_points", &self.singular_points)
            .finish()
    }
}

impl GaussianProcessModel {
    pub fn new<F>(label: impl Into<String>, interval: (f64, f64), moments: F) -> Self
    where
        F: Fn(f64) -> Result<Moments> + Send + Sync + 'static,
    {
        Self { moments: Arc::new(moments), interval, singular_points: Vec::new(), label: label.into() }
    }

    pub fn with_singular_points(mut self, mut points: Vec<f64>) -> Self {
        points.sort_by(f64::total_cmp);
        points.dedup();
        self.singular_points = points;
        self
    }

    pub fn moments(&self, t: f64) -> Result<Moments> {
        (self.moments)(t)
    }

    pub fn mean(&self, t: f64) -> Result<f64> {
        self.moments(t).map(|m| m.m * m.log_scale.exp())
    }

    pub fn var(&self, t: f64) -> Result<f64> {
        self.moments(t).map(|m| m.p * (2.0 * m.log_scale).exp())
    }

    pub fn deriv_var(&self, t: f64) -> Result<f64> {
        self.moments(t).map(|m| m.q * (2.0 * m.log_scale).exp())
    }

    pub fn cross(&self, t: f64) -> Result<f64> {
        self.moments(t).map(|m| m.r * (2.0 * m.log_scale).exp())
    }

    pub fn rho(&self, t: f64) -> Result<f64> {
        self.moments(t).map(|m| m.rho())
    }

    pub fn eta(&self, t: f64) -> Result<f64> {
        self.moments(t).map(|m| m.eta())
    }

    /// Kac–Rice intensity of real zeros at `t`.
    pub fn density(&self, t: f64) -> Result<f64> {
        self.moments(t).map(|m| m.kac_rice_density())
    }
}

/// Expected number of zeros in `[a, b]`, by adaptive quadrature of the
/// Kac–Rice density split at the model's singular points.
pub fn kac_rice_expected_count(model: &GaussianProcessModel, a: f64, b: f64, quad_tol: f64) -> Result<f64> {
    let (lo, hi) = model.interval;
    if !(a <= b) || a < lo || b > hi {
        return Err(Error::InvalidArgument(format!("[{a}, {b}] is outside the model interval [{lo}, {hi}]")));
    }
    let mut points = vec![a];
    points.extend(model.singular_points.iter().copied().filter(|&s| s > a && s < b));
    points.push(b);
    Ok(integrate_pieces(|t| model.density(t), &points, quad_tol)?.value)
}

/// The gaussian version of a real family: coefficients replaced by
/// independent gaussians with the law's means and variance.
pub fn build_model(spec: &EnsembleSpec) -> Result<GaussianProcessModel> {
    let law = &spec.law;
    if !spec.family.is_real() || !law.is_real() || !law.kind.is_real() {
        return Err(Error::UnsupportedFamily(format!("{} has no real gaussian version", spec.label())));
    }
    let var = law.variance();
    if !(var > 0.0) {
        return Err(Error::InvalidLaw("zero-variance law has no gaussian version".into()));
    }
    let ens = Ensemble::new(spec)?;
    let interval = match ens.validated_radius() {
        Some(r) => (-r, r),
        None => (f64::NEG_INFINITY, f64::INFINITY),
    };
    let means: Vec<(usize, f64)> = law.mean_shifts.iter().map(|(&i, m)| (i, m.re)).collect();
    let level = ens.level();
    let moments_ens = ens.clone();
    let moments = move |t: f64| -> Result<Moments> {
        let bv = moments_ens.basis_values(Complex64::new(t, 0.0))?;
        let (mut p, mut q, mut r) = (0.0, 0.0, 0.0);
        for v in &bv.values {
            let (f, df) = (v[0].re, v[1].re);
            p += f * f;
            q += df * df;
            r += f * df;
        }
        let (mut m, mut dm) = (-level * (-bv.log_scale).exp(), 0.0);
        for &(i, mu) in &means {
            if let Some(v) = bv.values.get(i) {
                m += mu * v[0].re;
                dm += mu * v[1].re;
            }
        }
        Ok(Moments { m, dm, p: var * p, q: var * q, r: var * r, log_scale: bv.log_scale })
    };
    let model = GaussianProcessModel::new(spec.label(), interval, moments);
    let singular =
        if let Family::Kac { .. } | Family::Elliptic { .. } = spec.family { Vec::new() } else { scan_singular(&model) };
    Ok(model.with_singular_points(singular))
}

/// Points where `𝒮/(𝒫𝒬)` dips to rounding level, located on a grid over
/// the finite part of the interval.
fn scan_singular(model: &GaussianProcessModel) -> Vec<f64> {
    let (lo, hi) = model.interval;
    let (lo, hi) = (lo.max(-50.0), hi.min(50.0));
    let n = 4096;
    let ratio = |t: f64| {
        model.moments(t).map(|m| if m.p * m.q > 0.0 { m.s() / (m.p * m.q) } else { 0.0 }).unwrap_or(f64::INFINITY)
    };
    let ts: Vec<f64> = (1..n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
    let vs: Vec<f64> = ts.iter().map(|&t| ratio(t)).collect();
    let mut out = Vec::new();
    for i in 1..vs.len() - 1 {
        if vs[i] <= vs[i - 1] && vs[i] <= vs[i + 1] && vs[i] < 1e-6 {
            // golden-section refinement of the local minimum
            let (mut a, mut b) = (ts[i - 1], ts[i + 1]);
            let g = 0.618_033_988_749_895;
            for _ in 0..80 {
                let (x1, x2) = (b - g * (b - a), a + g * (b - a));
                if ratio(x1) < ratio(x2) {
                    b = x2;
                } else {
                    a = x1;
                }
            }
            let t = 0.5 * (a + b);
            if ratio(t) < 1e-10 {
                out.push(t);
            }
        }
    }
    out
}
