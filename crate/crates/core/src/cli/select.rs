//! Picks the gaussian baseline that matches a statistic.

use num_complex::Complex64;

use crate::baselines::quadrature::{integrate, integrate_pieces};
use crate::baselines::{
    build_model, elliptic_expected, flat_expected, kac_gauss_expected, kac_rice_expected_count, taylor_expected,
    trig_closed_form, trig_derivative_expected, BaselineKind,
};
use crate::ensembles::{EnsembleSpec, Family};
use crate::error::{Error, Result};
use crate::region::Region;
use crate::statistics::{bump_profile, BumpFunction, Slot};

pub type Baseline = Option<(f64, BaselineKind)>;

fn centred(spec: &EnsembleSpec) -> bool {
    spec.law.mean_shifts.values().all(|m| *m == Complex64::new(0.0, 0.0))
}

fn real_centred(spec: &EnsembleSpec) -> bool {
    spec.law.kind.is_real() && centred(spec) && spec.law.variance() > 0.0
}

/// Kac–Rice on the gaussian version, or `None` when there is none.
fn kac_rice(spec: &EnsembleSpec, a: f64, b: f64, quad_tol: f64) -> Result<Baseline> {
    match build_model(spec) {
        Ok(model) => Ok(Some((kac_rice_expected_count(&model, a, b, quad_tol)?, BaselineKind::Quadrature))),
        Err(Error::UnsupportedFamily(_) | Error::InvalidLaw(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Baseline for the mean number of real zeros in `[a, b]`.
pub fn count_baseline(spec: &EnsembleSpec, (a, b): (f64, f64), quad_tol: f64) -> Result<Baseline> {
    let full = a == f64::NEG_INFINITY && b == f64::INFINITY;
    let plain = real_centred(spec);
    match &spec.family {
        Family::Kac { n } if full && plain => Ok(Some((kac_gauss_expected(*n, quad_tol)?, BaselineKind::Quadrature))),
        Family::Elliptic { n } if full && plain => Ok(Some((elliptic_expected(*n), BaselineKind::Exact))),
        Family::Trig { c, d, level, derivative } if plain && d[..] == c[1..] && a.is_finite() && b.is_finite() => {
            if *derivative == 0 {
                Ok(Some((trig_closed_form(c, *level, a, b)?, BaselineKind::Asymptotic)))
            } else if *level == 0.0 && c.iter().all(|&x| x == 1.0) {
                Ok(Some((trig_derivative_expected(*derivative, c.len() - 1, a, b), BaselineKind::Asymptotic)))
            } else {
                kac_rice(spec, a, b, quad_tol)
            }
        }
        Family::Taylor { gamma, .. } if plain && a == 0.0 && b > 0.0 && b < 1.0 => {
            Ok(Some((taylor_expected(*gamma, b)?, BaselineKind::Asymptotic)))
        }
        _ => kac_rice(spec, a, b, quad_tol),
    }
}

fn flat_chaos(spec: &EnsembleSpec) -> bool {
    matches!(spec.family, Family::Weyl) && !spec.law.kind.is_real() && centred(spec)
}

/// Baseline for the mean number of zeros in a planar region: the flat
/// intensity for the centred complex Weyl chaos, otherwise none.
pub fn region_baseline(spec: &EnsembleSpec, region: &Region) -> Result<Baseline> {
    if flat_chaos(spec) {
        return Ok(Some((flat_expected(region)?, BaselineKind::Exact)));
    }
    Ok(None)
}

/// Baseline for `E Σ G(ζ)` with a univariate bump: `∫ G ρ` against the
/// Kac–Rice density for real slots, `(1/π) ∫ G dA` for the complex Weyl
/// chaos.
pub fn linear_baseline(spec: &EnsembleSpec, g: &BumpFunction, quad_tol: f64) -> Result<Baseline> {
    match g.slots() {
        [Slot::Complex { radius, .. }] => {
            if !flat_chaos(spec) {
                return Ok(None);
            }
            let q = integrate(|s| Ok(bump_profile(s) * s), 0.0, 1.0, quad_tol)?;
            Ok(Some((2.0 * radius * radius * q.value, BaselineKind::Quadrature)))
        }
        [Slot::Real { center, radius }] => {
            let model = match build_model(spec) {
                Ok(m) => m,
                Err(Error::UnsupportedFamily(_) | Error::InvalidLaw(_)) => return Ok(None),
                Err(e) => return Err(e),
            };
            let (a, b) = (center - radius, center + radius);
            let mut pts = vec![a];
            pts.extend(model.singular_points.iter().copied().filter(|&s| s > a && s < b));
            pts.push(b);
            let q = integrate_pieces(|t| Ok(bump_profile((t - center) / radius) * model.density(t)?), &pts, quad_tol)?;
            Ok(Some((q.value, BaselineKind::Quadrature)))
        }
        _ => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::CoefficientLaw;
    use std::f64::consts::PI;

    #[test]
    fn picks_closed_forms() {
        let trig = EnsembleSpec::trig_flat(10, CoefficientLaw::rademacher()).unwrap();
        let (v, k) = count_baseline(&trig, (0.0, 2.0 * PI), 1e-8).unwrap().unwrap();
        assert_eq!(k, BaselineKind::Asymptotic);
        assert!((v - 2.0 * 35f64.sqrt()).abs() < 1e-12);
        let ell = EnsembleSpec::elliptic(49, CoefficientLaw::gaussian()).unwrap();
        assert_eq!(
            count_baseline(&ell, (f64::NEG_INFINITY, f64::INFINITY), 1e-8).unwrap(),
            Some((7.0, BaselineKind::Exact))
        );
        let (w, k) = count_baseline(&ell, (-1.0, 1.0), 1e-8).unwrap().unwrap();
        assert_eq!(k, BaselineKind::Quadrature);
        assert!(w > 0.0 && w < 7.0);
    }

    #[test]
    fn weyl_flat_intensity() {
        let d = Region::disk(Complex64::new(3.0, 0.0), 1.0);
        let weyl = EnsembleSpec::weyl(Region::disk(Complex64::new(0.0, 0.0), 5.0), CoefficientLaw::gaussian_complex())
            .unwrap();
        assert_eq!(region_baseline(&weyl, &d).unwrap(), Some((1.0, BaselineKind::Exact)));
        let real = weyl.with_law(CoefficientLaw::gaussian());
        assert_eq!(region_baseline(&real, &d).unwrap(), None);
        let g = BumpFunction::complex(Complex64::new(1.0, 1.0), 0.5).unwrap();
        let (v, _) = linear_baseline(&weyl, &g, 1e-10).unwrap().unwrap();
        // (1/π) ∫ G dA by a crude polar sum
        let m = 4000;
        let crude: f64 =
            (0..m).map(|i| (i as f64 + 0.5) / m as f64).map(|s| bump_profile(s) * s / m as f64).sum::<f64>()
                * 2.0
                * 0.25;
        assert!((v - crude).abs() < 1e-6, "{v} vs {crude}");
    }

    #[test]
    fn real_bump_against_density() {
        let trig = EnsembleSpec::trig_flat(10, CoefficientLaw::gaussian()).unwrap();
        let g = BumpFunction::real(1.0, 0.5).unwrap();
        let (v, _) = linear_baseline(&trig, &g, 1e-10).unwrap().unwrap();
        let rho = 35f64.sqrt() / PI;
        let q = integrate(|t| Ok(bump_profile(t)), -1.0, 1.0, 1e-12).unwrap().value * 0.5;
        assert!((v - rho * q).abs() < 1e-8, "{v} vs {}", rho * q);
    }
}
