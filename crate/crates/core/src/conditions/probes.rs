use num_complex::Complex64;
use rand::Rng;

use super::report::{ConditionProbeConfig, ConditionReport, Measurement, Verdict};
use crate::ensembles::{CoefficientLaw, Ensemble, EnsembleSpec};
use crate::error::{Error, Result};
use crate::special::circle_point;
use crate::statistics::{run_trials, Estimate, TrialPlan};

const SUP_GRID: usize = 64;
const BOUND_GRID: usize = 256;
const BOUND_RANDOM: usize = 8;

/// `max_i |φ_i(z)| / √(Σ_j |φ_j(z)|²)`.
pub fn delocalization_ratio(spec: &EnsembleSpec, z: Complex64) -> Result<f64> {
    let bv = Ensemble::new(spec)?.basis_values(z)?;
    let total = bv.norm_sqr_from(0);
    if total == 0.0 {
        return Err(Error::DegenerateZeroFunction);
    }
    let max = bv.values.iter().map(|v| v[0].norm_sqr()).fold(0.0, f64::max);
    Ok((max / total).sqrt())
}

/// The three derivative-growth ratios at real `x`:
/// `Σ|φ_j'(x)|² / Σ|φ_j(x)|²`, `Σ sup_{B(x,1)}|φ_j''|² / Σ|φ_j(x)|²` and
/// `Σ |Eξ_j| sup_{B(x,1)}|φ_j''| / √(Σ|φ_j(x)|²)`.
pub fn derivative_growth_ratios(spec: &EnsembleSpec, x: f64) -> Result<(f64, f64, f64)> {
    derivative_growth_ratios_rescaled(spec, x, 1.0)
}

/// Ratios for the rescaled basis `ψ_j(w) = φ_j(s w)` at `w = x/s`, so
/// that the unit disk around `w` is the disk of radius `s` around `x`.
pub fn derivative_growth_ratios_rescaled(spec: &EnsembleSpec, x: f64, s: f64) -> Result<(f64, f64, f64)> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::InvalidArgument(format!("scale must be positive, got {s}")));
    }
    let ens = Ensemble::new(spec)?;
    let center = Complex64::new(x, 0.0);
    ens.check_point(center)?;
    ens.check_point(Complex64::new(x.abs() + s, 0.0))?;
    let at = ens.basis_values(center)?;
    let p = at.norm_sqr_from(0);
    if p == 0.0 {
        return Err(Error::DegenerateZeroFunction);
    }
    let q: f64 = at.values.iter().map(|v| v[1].norm_sqr()).sum::<f64>() * s * s;
    let sups = second_derivative_sups(&ens, center, s, at.log_scale)?;
    let s2 = s * s;
    let r2: f64 = sups.iter().map(|m| (m * s2).powi(2)).sum();
    let law = &spec.law;
    let r3: f64 = sups.iter().enumerate().map(|(j, m)| law.mean(j).norm() * m * s2).sum();
    Ok((q / p, r2 / p, r3 / p.sqrt()))
}

/// `sup_{|w-c| ≤ s} |φ_j''(w)|` for every `j`, on the scale `e^{log_scale}`.
/// Each `|φ_j''|` is subharmonic, so the supremum sits on the boundary
/// circle; a 64-point grid is polished by golden-section search per term.
fn second_derivative_sups(ens: &Ensemble, c: Complex64, s: f64, log_scale: f64) -> Result<Vec<f64>> {
    let eval = |th: f64| -> Result<Vec<f64>> {
        let w = c + Complex64::from_polar(s, th);
        let bv = ens.basis_values(w)?;
        let k = (bv.log_scale - log_scale).exp();
        Ok(bv.values.iter().map(|v| v[2].norm() * k).collect())
    };
    let step = std::f64::consts::TAU / SUP_GRID as f64;
    let grid: Vec<Vec<f64>> = (0..SUP_GRID).map(|i| eval(i as f64 * step)).collect::<Result<_>>()?;
    let n = grid[0].len();
    let mut out = vec![0.0f64; n];
    for j in 0..n {
        let (best, v) = (0..SUP_GRID).map(|i| (i, grid[i][j])).fold((0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
        if v == 0.0 {
            continue;
        }
        let (mut a, mut b) = ((best as f64 - 1.0) * step, (best as f64 + 1.0) * step);
        let g = 0.618_033_988_749_895;
        let f = |th: f64| -> Result<f64> {
            let w = c + Complex64::from_polar(s, th);
            let bv = ens.basis_values(w)?;
            Ok(bv.values[j][2].norm() * (bv.log_scale - log_scale).exp())
        };
        let mut top = v;
        for _ in 0..24 {
            let (x1, x2) = (b - g * (b - a), a + g * (b - a));
            let (f1, f2) = (f(x1)?, f(x2)?);
            top = top.max(f1).max(f2);
            if f1 > f2 {
                b = x2;
            } else {
                a = x1;
            }
        }
        out[j] = top;
    }
    Ok(out)
}

/// Fraction of trials with `|F(z)| ≤ t`.
pub fn small_ball_prob(
    spec: &EnsembleSpec,
    law: &CoefficientLaw,
    z: Complex64,
    t: f64,
    plan: &TrialPlan,
) -> Result<Estimate> {
    let ens = Ensemble::new(&spec.with_law(law.clone()))?;
    ens.check_point(z)?;
    run_trials(plan, &format!("small-ball[{t}]"), |s| {
        let r = ens.draw(s);
        let v = r.evaluate(z, 0)?.norm();
        Ok(if v <= t { 1.0 } else { 0.0 })
    })
}

/// Fraction of trials whose maximum of `|F|` over `B(z, 2)`, sampled on
/// 256 boundary points and 8 random interior points, is at most `m`.
pub fn boundedness_prob(
    spec: &EnsembleSpec,
    law: &CoefficientLaw,
    z: Complex64,
    m: f64,
    plan: &TrialPlan,
) -> Result<Estimate> {
    let ens = Ensemble::new(&spec.with_law(law.clone()))?;
    ens.check_point(Complex64::from_polar(z.norm() + 2.0, z.arg()))?;
    let ln_m = m.ln();
    run_trials(plan, &format!("bounded[{m}]"), |s| {
        let r = ens.draw(s);
        let mut top = f64::NEG_INFINITY;
        for k in 0..BOUND_GRID {
            top = top.max(r.ln_abs(z + 2.0 * circle_point(k, BOUND_GRID))?);
        }
        for _ in 0..BOUND_RANDOM {
            let rad = 2.0 * s.random::<f64>().sqrt();
            let th = std::f64::consts::TAU * s.random::<f64>();
            top = top.max(r.ln_abs(z + Complex64::from_polar(rad, th))?);
        }
        Ok(if top <= ln_m { 1.0 } else { 0.0 })
    })
}

/// Delocalization and derivative growth at every probe point, against the
/// scalings `δ^α₁` and `δ^{-c₁}`.
///
/// A single `n` cannot falsify a bound with an unspecified constant, so
/// the verdict is `consistent` when every implied constant is at most 1
/// and `indeterminate` otherwise.
pub fn c2_report(spec: &EnsembleSpec, config: &ConditionProbeConfig) -> Result<ConditionReport> {
    config.validate()?;
    let delta = spec.scale.delta;
    let mut ms = Vec::new();
    for &z in &config.probe_points {
        ms.push(Measurement::new(
            "delocalization",
            Some(z),
            delocalization_ratio(spec, z)?,
            Some(delta.powf(config.alpha1)),
        ));
        if z.im == 0.0 {
            let (r1, r2, r3) = derivative_growth_ratios(spec, z.re)?;
            let req = delta.powf(-config.c1);
            ms.push(Measurement::new("derivative-growth-1", Some(z), r1, Some(req)));
            ms.push(Measurement::new("derivative-growth-2", Some(z), r2, Some(req)));
            ms.push(Measurement::new("derivative-growth-3", Some(z), r3, Some(req)));
        }
    }
    let verdict = if ms.iter().all(|m| m.implied_constant.is_some_and(|c| c <= 1.0)) {
        Verdict::Consistent
    } else {
        Verdict::Indeterminate
    };
    Ok(ConditionReport {
        condition: "C2".into(),
        subject: spec.label(),
        measurements: ms,
        verdict,
        notes: vec![format!("delta = {delta}")],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{BasisFn, Family, GenericBasis};
    use std::sync::Arc;

    #[test]
    fn kac_delocalization() {
        let spec = EnsembleSpec::kac(200, CoefficientLaw::gaussian()).unwrap();
        assert_eq!(delocalization_ratio(&spec, Complex64::new(0.0, 0.0)).unwrap(), 1.0);
        let mut prev = f64::INFINITY;
        for theta in [0.2, 0.1, 0.05, 0.02] {
            let r = delocalization_ratio(&spec, Complex64::new(1.0 - theta, 0.0)).unwrap();
            let want = (2.0 * theta).sqrt();
            assert!(r < prev && r / want > 0.5 && r / want < 2.0, "{theta}: {r} vs {want}");
            prev = r;
        }
    }

    #[test]
    fn constant_basis_has_no_growth() {
        let one: BasisFn = Arc::new(|_| [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)]);
        let spec = EnsembleSpec::with_defaults(
            Family::Generic(GenericBasis::new("one", vec![one], true)),
            CoefficientLaw::gaussian(),
        )
        .unwrap();
        assert_eq!(derivative_growth_ratios(&spec, 0.3).unwrap(), (0.0, 0.0, 0.0));
    }

    #[test]
    fn trig_growth_and_rescaling() {
        let n = 40;
        let spec = EnsembleSpec::trig_flat(n, CoefficientLaw::gaussian()).unwrap();
        let (r1, _, _) = derivative_growth_ratios(&spec, 0.7).unwrap();
        let nf = n as f64;
        let want = (nf * (nf + 1.0) * (2.0 * nf + 1.0) / 6.0) / (nf + 1.0);
        assert!((r1 / want - 1.0).abs() < 1e-10, "{r1} vs {want}");
        let (s1, s2, _) = derivative_growth_ratios_rescaled(&spec, 0.7, 1.0 / nf).unwrap();
        assert!(s1 < 1.0 && s2 < 10.0, "{s1} {s2}");
    }

    #[test]
    fn small_ball_matches_gaussian_density() {
        let spec = EnsembleSpec::kac(10, CoefficientLaw::gaussian()).unwrap();
        let z = Complex64::new(0.5, 0.0);
        let v: f64 = (0..=10).map(|i| 0.25f64.powi(i)).sum();
        let plan = TrialPlan::new(20_000, 11);
        let t = 0.05;
        let e = small_ball_prob(&spec, &CoefficientLaw::gaussian(), z, t, &plan).unwrap();
        let want = t * (2.0 / (std::f64::consts::PI * v)).sqrt();
        assert!((e.mean() - want).abs() < 4.0 * e.stderr(), "{} vs {want}", e.mean());
        let zero = small_ball_prob(&spec, &CoefficientLaw::gaussian(), z, 0.0, &TrialPlan::new(100, 1)).unwrap();
        assert_eq!(zero.mean(), 0.0);
    }

    #[test]
    fn boundedness_extremes() {
        let spec = EnsembleSpec::kac(20, CoefficientLaw::gaussian()).unwrap();
        let plan = TrialPlan::new(64, 2);
        let z = Complex64::new(0.5, 0.0);
        let law = CoefficientLaw::gaussian();
        assert_eq!(boundedness_prob(&spec, &law, z, f64::INFINITY, &plan).unwrap().mean(), 1.0);
        assert_eq!(boundedness_prob(&spec, &law, z, 0.0, &plan).unwrap().mean(), 0.0);
    }
}
