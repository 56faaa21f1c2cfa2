//! Certified truncation of the infinite families.

use super::spec::{EnsembleSpec, Family};
use crate::error::{Error, Result};
use crate::region::Region;
use crate::special::ln_gamma;

const MAX_TERMS: usize = 20_000_000;

/// `ln w_j` for power-series families, where `φ_j(z) = w_j z^j`.
/// Returns `None` for families that are not power series.
pub(crate) fn log_weight_fn(family: &Family) -> Option<Box<dyn FnMut(usize) -> f64 + '_>> {
    match family {
        Family::Kac { .. } => Some(Box::new(|_| 0.0)),
        Family::Weyl => Some(Box::new(|j| -0.5 * ln_gamma(j as f64 + 1.0))),
        Family::Elliptic { n } => {
            let n = *n;
            // ln √C(n,j) by the ratio recurrence √((n-i)/(i+1))
            let mut last = (0usize, 0.0f64);
            Some(Box::new(move |j| {
                if j < last.0 {
                    last = (0, 0.0);
                }
                while last.0 < j {
                    let i = last.0;
                    last.1 += 0.5 * (((n - i) as f64) / ((i + 1) as f64)).ln();
                    last.0 += 1;
                }
                last.1
            }))
        }
        Family::Taylor { gamma, slowly } => {
            let g = *gamma;
            let lg = ln_gamma(g);
            let l = *slowly;
            Some(Box::new(move |j| 0.5 * ((g - 1.0) * (j.max(1) as f64).ln() + l.ln_value(j) - lg)))
        }
        _ => None,
    }
}

/// Number of leading terms to keep so that the dropped variance
/// `Σ_{j≥L} |φ_j(z)|²` is at most `tol` times the full variance at every
/// point of `region`. The tail fraction grows with `|z|`, so the check is
/// made at the region's largest modulus.
///
/// Finite families return their full term count.
pub fn truncation_length(spec: &EnsembleSpec, region: &Region, tol: f64) -> Result<usize> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    match &spec.family {
        Family::Kac { n } | Family::Elliptic { n } => return Ok(n + 1),
        Family::Trig { c, .. } => return Ok(2 * c.len() - 1),
        Family::Generic(b) => return Ok(b.terms.len()),
        Family::Weyl | Family::Taylor { .. } => {}
    }
    let rho = region.max_modulus();
    if matches!(spec.family, Family::Taylor { .. }) && rho >= 1.0 {
        return Err(Error::DivergentRegion);
    }
    if !rho.is_finite() {
        return Err(Error::InvalidSpec("series families need a bounded domain".into()));
    }
    if rho == 0.0 {
        return Ok(1);
    }
    let mut logw = log_weight_fn(&spec.family).expect("power family");
    let lr = 2.0 * rho.ln();
    let ltol = tol.ln();
    let mut logs: Vec<f64> = Vec::new();
    let mut best = f64::NEG_INFINITY;
    let mut j = 0usize;
    loop {
        let l = 2.0 * logw(j) + j as f64 * lr;
        best = best.max(l);
        let falling = logs.last().is_some_and(|&p| l < p);
        logs.push(l);
        if falling && l < best + ltol - 40.0 {
            break;
        }
        j += 1;
        if j > MAX_TERMS {
            return Err(Error::DivergentRegion);
        }
    }
    let total: f64 = logs.iter().map(|&l| (l - best).exp()).sum();
    let mut tail = 0.0;
    let mut keep = logs.len();
    for (i, &l) in logs.iter().enumerate().rev() {
        tail += (l - best).exp();
        if tail > tol * total {
            keep = i + 1;
            break;
        }
        keep = i;
    }
    Ok(keep.max(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{CoefficientLaw, SlowlyVarying};
    use num_complex::Complex64;

    fn weyl() -> EnsembleSpec {
        EnsembleSpec::weyl(Region::disk(Complex64::new(0.0, 0.0), 5.0), CoefficientLaw::gaussian_complex()).unwrap()
    }

    #[test]
    fn weyl_at_origin_keeps_one_term() {
        assert_eq!(truncation_length(&weyl(), &Region::Point(Complex64::new(0.0, 0.0)), 0.5).unwrap(), 1);
    }

    #[test]
    fn weyl_radius_five_against_direct_poisson_tail() {
        let tol = 1e-12;
        let l = truncation_length(&weyl(), &Region::disk(Complex64::new(0.0, 0.0), 5.0), tol).unwrap();
        // direct summation of the Poisson(25) pmf
        let pmf = |j: usize| (j as f64 * 25f64.ln() - 25.0 - ln_gamma(j as f64 + 1.0)).exp();
        let tail_from = |l: usize| (l..400).map(pmf).sum::<f64>();
        assert!(tail_from(l) <= tol);
        assert!(tail_from(l - 1) > tol);
    }

    #[test]
    fn taylor_geometric_tail() {
        let disk = Region::disk(Complex64::new(0.0, 0.0), 0.9);
        let spec =
            EnsembleSpec::taylor(1.0, SlowlyVarying::Constant(1.0), disk.clone(), CoefficientLaw::gaussian()).unwrap();
        let tol = 1e-10;
        let l = truncation_length(&spec, &disk, tol).unwrap();
        let q: f64 = 0.81;
        let total = 1.0 / (1.0 - q);
        assert!(q.powi(l as i32) / (1.0 - q) <= tol * total);
        assert!(q.powi(l as i32 - 1) / (1.0 - q) > tol * total);
        let touching = Region::disk(Complex64::new(0.0, 0.0), 1.0);
        assert_eq!(truncation_length(&spec, &touching, tol), Err(Error::DivergentRegion));
    }
}
