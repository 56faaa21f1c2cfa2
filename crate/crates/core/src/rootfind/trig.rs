//! Trigonometric polynomials through the substitution `w = e^{iz}`.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;

use super::aberth::raw_roots;
use super::poly::{horner, newton_polish, Analytic};
use super::rootset::{RootSet, SolverReport};
use crate::ensembles::Realization;
use crate::error::{Error, Result};
use crate::region::Region;

/// `w^n F(z)` as a polynomial of degree `2n` in `w = e^{iz}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigLift {
    pub w_coeffs: Vec<Complex64>,
    n: usize,
}

impl TrigLift {
    pub fn new(r: &Realization) -> Result<Self> {
        let c = r
            .trig_coefficients()
            .ok_or_else(|| Error::UnsupportedFamily(format!("{} is not trigonometric", r.spec().family.name())))?;
        Ok(Self { w_coeffs: c.to_vec(), n: (c.len() - 1) / 2 })
    }

    pub fn degree(&self) -> usize {
        2 * self.n
    }

    pub fn eval(&self, w: Complex64) -> Complex64 {
        horner(&self.w_coeffs, w).0
    }

    /// `z = -i log w` with `Re z ∈ [0, 2π)`.
    pub fn back_map(w: Complex64) -> Complex64 {
        Complex64::new(w.arg().rem_euclid(TAU), -w.norm().ln())
    }
}

/// Zeros of a trig realization with `Re z ∈ [0, 2π)` and `|Im z| ≤ height`
/// (default `10/n`).
pub fn roots_trig(r: &Realization, height: Option<f64>, tol: f64) -> Result<RootSet> {
    let lift = TrigLift::new(r)?;
    let n = lift.n.max(1);
    let h = height.unwrap_or(10.0 / n as f64);
    if !(h > 0.0) {
        return Err(Error::InvalidArgument("strip height must be positive".into()));
    }
    let raw = raw_roots(&lift.w_coeffs)?;
    let (lo, hi) = ((-h).exp(), h.exp());
    let mut cand = Vec::new();
    for w in raw.roots {
        let m = w.norm();
        if !(m >= lo && m <= hi) {
            continue;
        }
        let z0 = TrigLift::back_map(w);
        let (z, _) = newton_polish(r as &dyn Analytic, z0, 10)?;
        let z = if (z - z0).norm() < 0.1 / n as f64 { z } else { z0 };
        let z = Complex64::new(wrap(z.re), z.im);
        if z.im.abs() <= h {
            cand.push(z);
        }
    }
    let report = SolverReport { iterations: raw.iterations, fallback: raw.fallback, patches: 1 };
    let region = Region::Strip { re_min: 0.0, re_max: TAU, height: h };
    let mut rs = RootSet::assemble(cand, Arc::new(r.clone()), region, tol, report)?;
    // real Newton may step across 0 or 2π
    for z in rs.roots.iter_mut() {
        z.re = wrap(z.re);
    }
    Ok(rs)
}

fn wrap(x: f64) -> f64 {
    let x = x.rem_euclid(TAU);
    if x >= TAU {
        0.0
    } else {
        x
    }
}
