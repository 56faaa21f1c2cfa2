//! Zeros of realizations: algebraic polynomials directly, trigonometric
//! polynomials through the degree-`2n` lift, and anything else in bounded
//! regions by local re-expansion.
//!
//! Real zeros of Kac and elliptic polynomials outside `[-1, 1]` are found as
//! reciprocals of the zeros of the reversed polynomial, which keeps every
//! evaluation inside the unit disk.

mod aberth;
mod local;
mod poly;
mod rootset;
mod trig;

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;

pub use poly::{horner, newton_polish, real_newton, Analytic, Polynomial};
pub use rootset::{count_in_region, real_roots, RootSet, SolverReport, DEFAULT_CLASS_TOL, DEFAULT_TOL};
pub use trig::{roots_trig, TrigLift};

use crate::ensembles::{Family, Realization};
use crate::error::{Error, Result};
use crate::region::Region;

/// All roots of `Σ a_i z^i` over the whole plane.
pub fn roots_poly(coeffs: &[Complex64], tol: f64) -> Result<RootSet> {
    let raw = aberth::raw_roots(coeffs)?;
    let report = SolverReport { iterations: raw.iterations, fallback: raw.fallback, patches: 1 };
    RootSet::assemble(raw.roots, Arc::new(Polynomial::new(coeffs.to_vec())), Region::Plane, tol, report)
}

/// Roots of the companion matrix alone, polished; for cross-checking.
pub fn roots_companion(coeffs: &[Complex64]) -> Option<Vec<Complex64>> {
    aberth::companion_only(coeffs)
}

/// Monomial coefficients of a power-family realization, scaled by a common
/// positive factor. Fails when they span more than double precision.
fn monomial_coeffs(r: &Realization) -> Result<Vec<Complex64>> {
    let log_w = match r.ensemble().basis() {
        crate::ensembles::Basis::Power { log_w, anchor: None, .. } => log_w.clone(),
        _ => return Err(Error::UnsupportedRegion),
    };
    let top = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut out = Vec::with_capacity(log_w.len());
    for (x, lw) in r.xi().iter().zip(&log_w) {
        let w = (lw - top).exp();
        if w == 0.0 && *x != Complex64::new(0.0, 0.0) {
            return Err(Error::NoConvergence(
                "coefficient range exceeds double precision; query a bounded region".into(),
            ));
        }
        out.push(x * w);
    }
    Ok(out)
}

/// Global roots in the natural domain: the plane for algebraic
/// polynomials, the strip `[0, 2π) × [-10/n, 10/n]` for trig, the
/// validated disk for series.
pub fn roots(r: &Realization, tol: f64) -> Result<RootSet> {
    match &r.spec().family {
        Family::Trig { .. } => roots_trig(r, None, tol),
        Family::Kac { .. } | Family::Elliptic { .. } => {
            let rs = roots_poly(&monomial_coeffs(r)?, tol)?;
            RootSet::assemble(rs.roots_with_multiplicity(), Arc::new(r.clone()), Region::Plane, tol, rs.report)
        }
        Family::Weyl | Family::Taylor { .. } => {
            let rho = r.ensemble().validated_radius().expect("series are validated");
            let disk = Region::disk(Complex64::new(0.0, 0.0), rho);
            match monomial_coeffs(r) {
                Ok(a) => {
                    let rs = roots_poly(&a, f64::INFINITY)?;
                    let inside: Vec<Complex64> =
                        rs.roots_with_multiplicity().into_iter().filter(|z| z.norm() <= rho).collect();
                    let mut pol = Vec::with_capacity(inside.len());
                    for z in inside {
                        match newton_polish(r as &dyn Analytic, z, 8) {
                            Ok((p, _)) if p.norm() <= rho => pol.push(p),
                            Ok(_) | Err(Error::OutOfValidatedRegion(_)) => {}
                            Err(e) => return Err(e),
                        }
                    }
                    RootSet::assemble(pol, Arc::new(r.clone()), disk, tol, rs.report)
                }
                Err(_) => local::roots_local(r, &disk, tol),
            }
        }
        Family::Generic(_) => Err(Error::UnsupportedRegion),
    }
}

/// Roots in `region`. Segments return every real zero in the closed
/// segment together with any non-real zeros found next to it.
pub fn roots_in(r: &Realization, region: &Region, tol: f64) -> Result<RootSet> {
    match region {
        Region::Empty => Ok(RootSet::from_parts(Vec::new(), Region::Empty)),
        Region::Plane => roots(r, tol),
        Region::Segment { a, b } => {
            if !(a.is_finite() || b.is_finite()) && !has_reciprocal(r) {
                return Err(Error::UnsupportedRegion);
            }
            let mut report = SolverReport::default();
            let cand = segment_candidates(r, *a, *b, &mut report)?;
            RootSet::assemble(cand, Arc::new(r.clone()), region.clone(), tol, report)
        }
        Region::Strip { re_min, re_max, height } if is_trig(r) && *re_min == 0.0 && *re_max == TAU => {
            roots_trig(r, Some(*height), tol)
        }
        _ if !region.is_bounded() => Err(Error::UnsupportedRegion),
        _ => {
            if matches!(r.spec().family, Family::Kac { .. } | Family::Elliptic { .. }) {
                if let Ok(rs) = roots(r, tol) {
                    return Ok(RootSet::restrict(rs, region.clone()));
                }
            }
            local::roots_local(r, region, tol)
        }
    }
}

fn is_trig(r: &Realization) -> bool {
    matches!(r.spec().family, Family::Trig { .. })
}

fn has_reciprocal(r: &Realization) -> bool {
    matches!(r.spec().family, Family::Kac { .. } | Family::Elliptic { .. })
}

/// Candidates near `[a, b]` (either end may be infinite for Kac and
/// elliptic, whose zeros beyond the unit interval come from the reversed
/// polynomial).
fn segment_candidates(r: &Realization, a: f64, b: f64, report: &mut SolverReport) -> Result<Vec<Complex64>> {
    if !(a <= b) {
        return Err(Error::InvalidArgument(format!("empty window [{a}, {b}]")));
    }
    if !has_reciprocal(r) {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::UnsupportedRegion);
        }
        return local::segment_candidates(r, a, b, report);
    }
    let mut out = Vec::new();
    let (lo, hi) = (a.max(-1.0), b.min(1.0));
    if lo <= hi {
        out.extend(local::segment_candidates(r, lo, hi, report)?);
    }
    let q = r.reversed();
    // x in (1, b] ∩ [a, b]  ⇔  y = 1/x in [1/b, min(1, 1/a)]
    if b > 1.0 {
        let y0 = if b.is_finite() { 1.0 / b } else { 0.0 };
        let y1 = if a > 1.0 { 1.0 / a } else { 1.0 };
        for y in local::segment_candidates(&q, y0, y1, report)? {
            if y.re > 0.0 && (a > 1.0 || y.re < 1.0) {
                out.push(y.inv());
            }
        }
    }
    // x in [a, -1) ∩ [a, b]  ⇔  y in [max(-1, 1/b), 1/a]
    if a < -1.0 {
        let y0 = if b < -1.0 { 1.0 / b } else { -1.0 };
        let y1 = if a.is_finite() { 1.0 / a } else { 0.0 };
        for y in local::segment_candidates(&q, y0, y1, report)? {
            if y.re < 0.0 && (b < -1.0 || y.re > -1.0) {
                out.push(y.inv());
            }
        }
    }
    Ok(out)
}

/// Sorted real zeros of `r` in the closed window, repeated by multiplicity.
/// Kac and elliptic windows may be infinite.
pub fn real_zeros(r: &Realization, window: (f64, f64), tol: f64) -> Result<Vec<f64>> {
    let (a, b) = window;
    if is_trig(r) && a >= 0.0 && b <= TAU && b - a >= 1.0 {
        let rs = roots_trig(r, None, tol)?;
        return Ok(real_roots(&rs, window, DEFAULT_CLASS_TOL));
    }
    let rs = roots_in(r, &Region::Segment { a, b }, tol)?;
    Ok(real_roots(&rs, window, DEFAULT_CLASS_TOL))
}

/// Number of real zeros in the closed window.
pub fn count_real(r: &Realization, window: (f64, f64)) -> Result<usize> {
    Ok(real_zeros(r, window, DEFAULT_TOL)?.len())
}

impl RootSet {
    /// Roots repeated by multiplicity.
    pub fn roots_with_multiplicity(&self) -> Vec<Complex64> {
        self.roots.iter().zip(&self.multiplicities).flat_map(|(z, &m)| std::iter::repeat_n(*z, m as usize)).collect()
    }

    /// The same set restricted to a smaller region.
    pub fn restrict(mut self, region: Region) -> Self {
        let keep: Vec<bool> = self.roots.iter().map(|z| region.contains(*z)).collect();
        let mut k = keep.iter();
        self.roots.retain(|_| *k.next().unwrap());
        let mut k = keep.iter();
        self.multiplicities.retain(|_| *k.next().unwrap());
        let mut k = keep.iter();
        self.residuals.retain(|_| *k.next().unwrap());
        let mut k = keep.iter();
        self.real_mask.retain(|_| *k.next().unwrap());
        self.region = region;
        self
    }
}
