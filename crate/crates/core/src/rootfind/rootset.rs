use std::fmt;
use std::io::Write;
use std::sync::Arc;

use num_complex::Complex64;

use super::poly::{real_newton, Analytic};
use crate::error::{Error, Result};
use crate::region::Region;

/// Residual tolerance used when none is given.
pub const DEFAULT_TOL: f64 = 1e-9;
/// `|Im ζ| ≤ class_tol (1 + |ζ|)` marks a candidate real root.
pub const DEFAULT_CLASS_TOL: f64 = 1e-8;
/// Boundary slack for [`count_in_region`].
const BOUNDARY_EPS: f64 = 1e-12;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SolverReport {
    /// Simultaneous-iteration sweeps, summed over patches.
    pub iterations: usize,
    /// Some patch needed the companion-matrix path.
    pub fallback: bool,
    /// Number of local expansions (1 for a global solve).
    pub patches: usize,
}

/// Zeros of one function in one region.
#[derive(Clone)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    pub multiplicities: Vec<u32>,
    pub residuals: Vec<f64>,
    pub real_mask: Vec<bool>,
    pub region: Region,
    pub report: SolverReport,
    pub tol: f64,
    source: Option<Arc<dyn Analytic>>,
}

impl fmt::Debug for RootSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RootSet")
            .field("roots", &self.roots)
            .field("multiplicities", &self.multiplicities)
            .field("residuals", &self.residuals)
            .field("real_mask", &self.real_mask)
            .field("region", &self.region)
            .field("report", &self.report)
            .finish()
    }
}

impl RootSet {
    /// Classifies, merges and checks polished candidates.
    pub(crate) fn assemble(
        candidates: Vec<Complex64>,
        source: Arc<dyn Analytic>,
        region: Region,
        tol: f64,
        report: SolverReport,
    ) -> Result<Self> {
        let real_source = source.is_real();
        let mut pts: Vec<(Complex64, bool)> = Vec::with_capacity(candidates.len());
        for z in candidates {
            if real_source && z.im.abs() <= DEFAULT_CLASS_TOL * (1.0 + z.norm()) {
                if let Some(x) = confirm_real(&*source, z, tol)? {
                    pts.push((Complex64::new(x, 0.0), true));
                    continue;
                }
            }
            pts.push((z, false));
        }
        pts.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));

        let mut set = Self {
            roots: Vec::new(),
            multiplicities: Vec::new(),
            residuals: Vec::new(),
            real_mask: Vec::new(),
            region,
            report,
            tol,
            source: Some(source.clone()),
        };
        let mut used = vec![false; pts.len()];
        for i in 0..pts.len() {
            if used[i] {
                continue;
            }
            used[i] = true;
            let (z, is_real) = pts[i];
            let radius = 10.0 * tol * z.norm().max(1.0);
            let mut mult = 1u32;
            // sorted by real part, so only a short run can be within reach
            for j in i + 1..pts.len() {
                if pts[j].0.re - z.re > radius {
                    break;
                }
                if !used[j] && (pts[j].0 - z).norm() <= radius {
                    used[j] = true;
                    mult += 1;
                }
            }
            let res = source.residual(z)?;
            if !(res <= tol) {
                return Err(Error::NoConvergence(format!("root {z} has residual {res:e} above {tol:e}")));
            }
            set.roots.push(z);
            set.multiplicities.push(mult);
            set.residuals.push(res);
            set.real_mask.push(is_real);
        }
        Ok(set)
    }

    /// A root set that carries no function to polish against.
    pub fn from_parts(roots: Vec<Complex64>, region: Region) -> Self {
        let n = roots.len();
        let real_mask = roots.iter().map(|z| z.im == 0.0).collect();
        Self {
            roots,
            multiplicities: vec![1; n],
            residuals: vec![0.0; n],
            real_mask,
            region,
            report: SolverReport::default(),
            tol: DEFAULT_TOL,
            source: None,
        }
    }

    /// Number of roots counting multiplicity.
    pub fn total(&self) -> usize {
        self.multiplicities.iter().map(|&m| m as usize).sum()
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Writes `re,im,residual,is_real`, one row per distinct root.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::InvalidArgument(format!("csv: {e}"));
        wr.write_record(["re", "im", "residual", "is_real"]).map_err(io)?;
        for i in 0..self.roots.len() {
            for _ in 0..self.multiplicities[i] {
                wr.write_record([
                    format!("{:.17e}", self.roots[i].re),
                    format!("{:.17e}", self.roots[i].im),
                    format!("{:.17e}", self.residuals[i]),
                    self.real_mask[i].to_string(),
                ])
                .map_err(io)?;
            }
        }
        wr.flush().map_err(|e| Error::InvalidArgument(format!("csv: {e}")))?;
        Ok(())
    }
}

/// Real-restricted Newton from `Re z`; the real root it lands on if it
/// converges close by with a small residual.
fn confirm_real(f: &dyn Analytic, z: Complex64, tol: f64) -> Result<Option<f64>> {
    let (x, ok) = match real_newton(f, z.re, 50) {
        Ok(v) => v,
        Err(Error::OutOfValidatedRegion(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    if !ok || (x - z.re).abs() > 1e-6 * (1.0 + z.norm()) {
        return Ok(None);
    }
    let res = match f.residual(Complex64::new(x, 0.0)) {
        Ok(r) => r,
        Err(Error::OutOfValidatedRegion(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    Ok((res <= tol).then_some(x))
}

/// Stored roots strictly inside `region` (more than `1e-12` from its
/// boundary), counting multiplicity.
pub fn count_in_region(rs: &RootSet, region: &Region) -> Result<usize> {
    if !rs.region.covers(region) {
        return Err(Error::RegionNotCovered);
    }
    Ok(rs
        .roots
        .iter()
        .zip(&rs.multiplicities)
        .filter(|(z, _)| region.interior_distance(**z) > BOUNDARY_EPS)
        .map(|(_, &m)| m as usize)
        .sum())
}

/// Real roots in the closed `window`, sorted, repeated by multiplicity.
/// Candidates within `class_tol (1 + |ζ|)` of the axis that were not
/// already classified real are re-polished by real Newton.
pub fn real_roots(rs: &RootSet, window: (f64, f64), class_tol: f64) -> Vec<f64> {
    let (a, b) = window;
    let inside = |x: f64| x >= a && x <= b;
    let mut out: Vec<f64> = Vec::new();
    let mut extra: Vec<f64> = Vec::new();
    for i in 0..rs.roots.len() {
        let z = rs.roots[i];
        if rs.real_mask[i] {
            if inside(z.re) {
                out.extend(std::iter::repeat_n(z.re, rs.multiplicities[i] as usize));
            }
        } else if z.im.abs() <= class_tol * (1.0 + z.norm()) {
            if let Some(x) = rs.source.as_ref().and_then(|f| confirm_real(&**f, z, rs.tol).ok().flatten()) {
                if inside(x) {
                    extra.push(x);
                }
            }
        }
    }
    // a re-polished candidate can land on a root that is already listed
    let near = |x: f64, y: f64| (x - y).abs() <= 10.0 * rs.tol * x.abs().max(1.0);
    let mut kept: Vec<f64> = Vec::new();
    for x in extra {
        if !out.iter().chain(&kept).any(|&y| near(x, y)) {
            kept.push(x);
        }
    }
    out.extend(kept);
    out.sort_by(f64::total_cmp);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootfind::roots_poly;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn counts_in_disks() {
        let rs = roots_poly(&[c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], DEFAULT_TOL).unwrap();
        assert_eq!(count_in_region(&rs, &Region::disk(c(0.0, 0.0), 2.0)).unwrap(), 2);
        assert_eq!(count_in_region(&rs, &Region::disk(c(0.0, 0.0), 0.5)).unwrap(), 0);
        assert!(rs.real_mask.iter().all(|r| !r));
        assert!(real_roots(&rs, (-2.0, 2.0), DEFAULT_CLASS_TOL).is_empty());
    }

    #[test]
    fn real_roots_window() {
        let rs = roots_poly(&[c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], DEFAULT_TOL).unwrap();
        assert_eq!(real_roots(&rs, (-2.0, 2.0), DEFAULT_CLASS_TOL), vec![-1.0, 1.0]);
        assert_eq!(real_roots(&rs, (0.0, 2.0), DEFAULT_CLASS_TOL), vec![1.0]);
    }

    #[test]
    fn double_root_collapses() {
        let rs = roots_poly(&[c(1.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0)], DEFAULT_TOL).unwrap();
        assert_eq!(rs.total(), 2);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let rs = roots_poly(&[c(1.0, 0.0), c(1.0, 0.0)], DEFAULT_TOL).unwrap();
        let mut buf = Vec::new();
        rs.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let mut lines = s.lines();
        assert_eq!(lines.next(), Some("re,im,residual,is_real"));
        assert!(lines.next().unwrap().ends_with("true"));
    }

    #[test]
    fn region_not_covered() {
        let rs = roots_poly(&[c(1.0, 0.0), c(1.0, 0.0)], DEFAULT_TOL).unwrap();
        let small = RootSet::from_parts(rs.roots.clone(), Region::disk(c(0.0, 0.0), 1.0));
        assert_eq!(count_in_region(&small, &Region::disk(c(0.0, 0.0), 3.0)), Err(Error::RegionNotCovered));
    }
}
