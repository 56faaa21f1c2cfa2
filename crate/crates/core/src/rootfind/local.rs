//! Roots in bounded regions by local Taylor re-expansion: the region is
//! tiled by small disks, `F(c + R t)` is expanded to a polynomial in `t` on
//! each, and only roots with `|t| ≤ 1/2` are kept.

use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::aberth::raw_roots;
use super::poly::{newton_polish, Analytic};
use super::rootset::{RootSet, SolverReport};
use crate::ensembles::{Basis, Family, Realization};
use crate::error::{Error, Result};
use crate::region::Region;

const ORDER: usize = 64;
const TAIL_REL: f64 = 1e-13;
const CIRCLE_POINTS: usize = 128;
const MAX_HALVINGS: usize = 40;
const MAX_DEPTH: usize = 24;
/// Local polynomials are trimmed where `|b_m| (KEEP + 0.1)^m` drops below this.
const TRIM_REL: f64 = 1e-16;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Roots are kept for `|t| ≤ KEEP` in the local variable.
const KEEP: f64 = 0.75;

/// Expansion radius as a multiple of the local zero spacing.
fn beta(family: &Family) -> f64 {
    let b = match family {
        Family::Kac { .. } => 0.2,
        Family::Taylor { gamma, .. } => 0.2 * gamma.sqrt(),
        Family::Elliptic { .. } | Family::Weyl => 2.5,
        Family::Trig { .. } => 6.0,
        Family::Generic(_) => 1.0,
    };
    b * KEEP
}

/// Taylor coefficients `b_m` of `t ↦ F(c + R t)` up to a common positive factor.
pub(crate) fn expand(r: &Realization, c: Complex64, radius: f64, order: usize) -> Result<Vec<Complex64>> {
    match r.ensemble().basis() {
        Basis::Power { log_w, anchor: None, .. } => Ok(power_shift(log_w, r.xi(), c, radius, order)),
        Basis::Trig { n, .. } => Ok(trig_shift(r.trig_coefficients().expect("trig"), *n, c, radius, order)),
        _ => circle_fft(r, c, radius, order),
    }
}

/// Shift of `Σ ξ_i w_i z^i` to `c` by repeated synthetic division, in the
/// variable `u = z/ρ` with `ρ = |c| + R` so every term stays bounded.
fn power_shift(log_w: &[f64], xi: &[Complex64], c: Complex64, radius: f64, order: usize) -> Vec<Complex64> {
    let rho = c.norm() + radius;
    let lr = rho.ln();
    let mut k = f64::NEG_INFINITY;
    for (i, &lw) in log_w.iter().enumerate() {
        k = k.max(lw + i as f64 * lr);
    }
    let mut hi = 0;
    for (i, &lw) in log_w.iter().enumerate() {
        if lw + i as f64 * lr >= k - 60.0 {
            hi = i;
        }
    }
    let u0 = c / rho;
    let q = radius / rho;
    let real = u0.im == 0.0 && xi[..=hi].iter().all(|x| x.im == 0.0);
    let m_max = order.min(hi);
    let mut out = vec![ZERO; order + 1];
    if real {
        let mut a: Vec<f64> = (0..=hi).map(|i| xi[i].re * (log_w[i] + i as f64 * lr - k).exp()).collect();
        synthetic_shift(&mut a, u0.re, m_max);
        let mut qm = 1.0;
        for m in 0..=m_max {
            out[m] = Complex64::new(a[m] * qm, 0.0);
            qm *= q;
        }
    } else {
        let mut a: Vec<Complex64> = (0..=hi).map(|i| xi[i] * (log_w[i] + i as f64 * lr - k).exp()).collect();
        synthetic_shift(&mut a, u0, m_max);
        let mut qm = 1.0;
        for m in 0..=m_max {
            out[m] = a[m] * qm;
            qm *= q;
        }
    }
    out
}

/// In place: the first `m_max + 1` entries become the Taylor coefficients
/// at `u0`. Passes run in groups of `W` along a wavefront so that the
/// otherwise serial Horner chains overlap.
fn synthetic_shift<T>(a: &mut [T], u0: T, m_max: usize)
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Mul<Output = T>,
{
    const W: usize = 8;
    let len = a.len();
    if len < 2 {
        return;
    }
    let last = m_max.min(len - 1);
    let top = len - 2;
    let mut k = 0;
    while k + W <= last + 1 && k + W <= top {
        // pass k + j touches index s + j at wavefront step s
        for s in (k..=top).rev() {
            let width = (top - s + 1).min(W);
            for j in 0..width {
                let i = s + j;
                a[i] = a[i] + u0 * a[i + 1];
            }
        }
        k += W;
    }
    while k <= last {
        for i in (k..=top).rev() {
            a[i] = a[i] + u0 * a[i + 1];
        }
        k += 1;
    }
}

/// `b_m = Σ_j C_j e^{ijc} (ijR)^m / m!`, normalized by `e^{n|Im c|}`.
fn trig_shift(coeffs: &[Complex64], n: usize, c: Complex64, radius: f64, order: usize) -> Vec<Complex64> {
    let mut out = vec![ZERO; order + 1];
    let s = c.im;
    for (idx, &cj) in coeffs.iter().enumerate() {
        if cj == ZERO {
            continue;
        }
        let j = idx as f64 - n as f64;
        let mut t = cj * Complex64::from_polar((-j * s - n as f64 * s.abs()).exp(), j * c.re);
        let step = Complex64::new(0.0, j * radius);
        for (m, b) in out.iter_mut().enumerate() {
            *b += t;
            t = t * step / (m + 1) as f64;
        }
    }
    out
}

fn fft() -> &'static Arc<dyn Fft<f64>> {
    static PLAN: OnceLock<Arc<dyn Fft<f64>>> = OnceLock::new();
    PLAN.get_or_init(|| FftPlanner::new().plan_fft_forward(CIRCLE_POINTS))
}

/// Coefficients from samples on the circle `|z - c| = R`.
fn circle_fft(r: &Realization, c: Complex64, radius: f64, order: usize) -> Result<Vec<Complex64>> {
    let n = CIRCLE_POINTS;
    let mut vals = Vec::with_capacity(n);
    let mut top = f64::NEG_INFINITY;
    for k in 0..n {
        let z = c + Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64);
        let v = r.eval_scaled(z)?;
        top = top.max(v.log_scale);
        vals.push(v);
    }
    let mut buf: Vec<Complex64> = vals.iter().map(|v| v.mantissa[0] * (v.log_scale - top).exp()).collect();
    fft().process(&mut buf);
    Ok(buf.iter().take(order + 1).map(|b| b / n as f64).collect())
}

/// One expansion disk: centre `c`, keep radius `kappa`, expansion radius
/// `kappa / KEEP`. Returns `None` when the coefficients have not decayed.
fn solve_patch(r: &Realization, c: Complex64, kappa: f64, report: &mut SolverReport) -> Result<Option<Vec<Complex64>>> {
    let radius = kappa / KEEP;
    let b = expand(r, c, radius, ORDER)?;
    report.patches += 1;
    let big = b.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if big == 0.0 {
        return Err(Error::DegenerateAllZero);
    }
    if !big.is_finite() {
        return Ok(None);
    }
    let tail = b[ORDER - 3..].iter().map(|x| x.norm()).fold(0.0, f64::max);
    if tail > TAIL_REL * big {
        return Ok(None);
    }
    let mut deg = 0;
    let mut w = 1.0;
    for (m, x) in b.iter().enumerate() {
        if x.norm() * w > TRIM_REL * big {
            deg = m;
        }
        w *= KEEP + 0.1;
    }
    if deg == 0 {
        return Ok(Some(Vec::new()));
    }
    let raw = raw_roots(&b[..=deg])?;
    report.iterations += raw.iterations;
    report.fallback |= raw.fallback;
    let mut out = Vec::new();
    for t in raw.roots {
        if t.norm() > KEEP + 1e-6 {
            continue;
        }
        let z0 = c + radius * t;
        let z = match newton_polish(r as &dyn Analytic, z0, 8) {
            Ok((z, _)) if (z - z0).norm() <= 0.25 * kappa => z,
            // a far jump means the local coefficients lost their accuracy
            Ok(_) => return Ok(None),
            Err(Error::OutOfValidatedRegion(_)) => z0,
            Err(e) => return Err(e),
        };
        out.push(z);
    }
    Ok(Some(out))
}

/// Largest keep radius `<= kappa` whose expansion disk stays validated.
fn fit_validated(r: &Realization, c_of: impl Fn(f64) -> Complex64, mut kappa: f64) -> Result<f64> {
    if let Some(rho) = r.ensemble().validated_radius() {
        let mut guard = 0;
        while c_of(kappa).norm() + kappa / KEEP > rho {
            kappa *= 0.5;
            guard += 1;
            if guard > 200 {
                return Err(Error::OutOfValidatedRegion(c_of(kappa)));
            }
        }
    }
    Ok(kappa)
}

fn spacing(r: &Realization, x: Complex64) -> Result<f64> {
    r.ensemble().zero_spacing(x)
}

/// Candidates near the real segment `[a, b]`: every zero on it, plus the
/// non-real zeros found within the keep disks.
pub(crate) fn segment_candidates(r: &Realization, a: f64, b: f64, report: &mut SolverReport) -> Result<Vec<Complex64>> {
    let bt = beta(&r.spec().family);
    let mut out = Vec::new();
    if a == b {
        if r.evaluate(Complex64::new(a, 0.0), 0)? == ZERO {
            out.push(Complex64::new(a, 0.0));
        }
        return Ok(out);
    }
    let mut x = a;
    let mut guess = bt * spacing(r, Complex64::new(a, 0.0))?;
    loop {
        // spacing at the provisional centre
        let probe = x + guess.min((b - x) / 2.0);
        let mut kappa = (bt * spacing(r, Complex64::new(probe, 0.0))?).min((b - x) / 2.0);
        kappa = fit_validated(r, |k| Complex64::new(x + k, 0.0), kappa)?;
        let mut tries = 0;
        let found = loop {
            let c = Complex64::new(x + kappa, 0.0);
            if let Some(v) = solve_patch(r, c, kappa, report)? {
                break v;
            }
            kappa *= 0.5;
            tries += 1;
            if tries > MAX_HALVINGS {
                return Err(Error::NoConvergence(format!("local expansion near {x} did not converge")));
            }
        };
        let end = x + 2.0 * kappa;
        let last = end >= b;
        guess = kappa;
        let c = x + kappa;
        for z in found {
            let inside = if last { z.re >= x && z.re <= b } else { z.re >= x && z.re < end };
            if inside && (z - c).norm() <= kappa * (1.0 + 1e-9) {
                out.push(z);
            }
        }
        if last {
            break;
        }
        x = end;
    }
    Ok(out)
}

/// Zeros inside a bounded region by a quadtree of square patches.
pub(crate) fn region_candidates(r: &Realization, region: &Region, report: &mut SolverReport) -> Result<Vec<Complex64>> {
    if !region.is_bounded() {
        return Err(Error::UnsupportedRegion);
    }
    let mut out = Vec::new();
    if let Region::Disk { center, radius } = region {
        if let Ok(k) = fit_validated(r, |_| *center, *radius) {
            if k == *radius {
                if let Some(v) = solve_patch(r, *center, k, report)? {
                    out.extend(v.into_iter().filter(|z| region.contains(*z)));
                    return Ok(out);
                }
            }
        }
    }
    let (x0, x1, y0, y1) = region.bounding_box();
    let lo = Complex64::new(x0, y0);
    let side = (x1 - x0).max(y1 - y0).max(1e-300);
    let bt = beta(&r.spec().family);
    square(r, region, lo, side, bt, 0, report, &mut out)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn square(
    r: &Realization,
    region: &Region,
    corner: Complex64,
    side: f64,
    bt: f64,
    depth: usize,
    report: &mut SolverReport,
    out: &mut Vec<Complex64>,
) -> Result<()> {
    let h = side / 2.0;
    let c = corner + Complex64::new(h, h);
    let kappa = h * std::f64::consts::SQRT_2;
    if region.interior_distance(c) < -kappa {
        return Ok(());
    }
    if depth > MAX_DEPTH {
        return Err(Error::NoConvergence(format!("quadtree too deep near {c}")));
    }
    let fits = fit_validated(r, |_| c, kappa).map(|k| k == kappa).unwrap_or(false);
    let small = fits && kappa <= bt * spacing(r, c).unwrap_or(f64::INFINITY);
    if small {
        if let Some(v) = solve_patch(r, c, kappa, report)? {
            for z in v {
                let d = z - corner;
                if d.re >= 0.0 && d.re < side && d.im >= 0.0 && d.im < side && region.contains(z) {
                    out.push(z);
                }
            }
            return Ok(());
        }
    }
    for (dx, dy) in [(0.0, 0.0), (h, 0.0), (0.0, h), (h, h)] {
        square(r, region, corner + Complex64::new(dx, dy), h, bt, depth + 1, report, out)?;
    }
    Ok(())
}

/// Roots in a bounded region, assembled into a [`RootSet`].
pub(crate) fn roots_local(r: &Realization, region: &Region, tol: f64) -> Result<RootSet> {
    let mut report = SolverReport::default();
    let cand = match region {
        Region::Segment { a, b } => segment_candidates(r, *a, *b, &mut report)?,
        _ => region_candidates(r, region, &mut report)?,
    };
    RootSet::assemble(cand, Arc::new(r.clone()), region.clone(), tol, report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{CoefficientLaw, Ensemble, EnsembleSpec};
    use crate::rng::RngStream;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Direct Taylor coefficients by binomial expansion.
    fn direct(coeffs: &[f64], c0: f64, radius: f64, m: usize) -> f64 {
        let mut s = 0.0;
        let mut binom = 1.0;
        for (i, &a) in coeffs.iter().enumerate().skip(m) {
            if i > m {
                binom = binom * i as f64 / (i - m) as f64;
            }
            s += a * binom * c0.powi((i - m) as i32);
        }
        s * radius.powi(m as i32)
    }

    #[test]
    fn power_shift_matches_binomials() {
        let coeffs = [0.3, -1.2, 0.7, 2.0, -0.4, 0.9];
        let xi: Vec<Complex64> = coeffs.iter().map(|&x| c(x, 0.0)).collect();
        let log_w = vec![0.0; 6];
        let (c0, radius) = (0.4, 0.1);
        let b = power_shift(&log_w, &xi, c(c0, 0.0), radius, 8);
        let rho: f64 = c0 + radius;
        // undo the common factor using m = 0
        let scale = direct(&coeffs, c0, radius, 0) / b[0].re;
        for m in 0..6 {
            let want = direct(&coeffs, c0, radius, m);
            assert!((b[m].re * scale - want).abs() < 1e-12 * want.abs().max(1.0), "m={m}");
        }
        assert!(rho > 0.0);
    }

    #[test]
    fn fft_and_shift_agree() {
        let spec = EnsembleSpec::kac(30, CoefficientLaw::gaussian()).unwrap();
        let r = Ensemble::new(&spec).unwrap().draw(&mut RngStream::new(4, 1));
        let (z0, radius) = (c(0.5, 0.1), 0.2);
        let a = expand(&r, z0, radius, 20).unwrap();
        let b = circle_fft(&r, z0, radius, 20).unwrap();
        let ratio = a[0] / b[0];
        for m in 0..20 {
            assert!((a[m] - b[m] * ratio).norm() < 1e-12 * a[0].norm(), "m={m}");
        }
    }

    #[test]
    fn trig_shift_against_evaluation() {
        let spec = EnsembleSpec::trig_flat(12, CoefficientLaw::gaussian()).unwrap();
        let r = Ensemble::new(&spec).unwrap().draw(&mut RngStream::new(2, 2));
        let z0 = c(1.0, 0.05);
        let radius = 0.3;
        let b = expand(&r, z0, radius, ORDER).unwrap();
        let scale = (12.0 * 0.05f64).exp();
        for t in [c(0.3, 0.1), c(-0.5, 0.4)] {
            let s: Complex64 = b.iter().enumerate().map(|(m, x)| x * t.powi(m as i32)).sum();
            let want = r.evaluate(z0 + radius * t, 0).unwrap();
            assert!((s * scale - want).norm() < 1e-10 * want.norm().max(1.0));
        }
    }

    #[test]
    fn segment_finds_all_real_roots_of_kac() {
        let spec = EnsembleSpec::kac(40, CoefficientLaw::gaussian()).unwrap();
        let e = Ensemble::new(&spec).unwrap();
        for seed in 0..5 {
            let r = e.draw(&mut RngStream::new(seed, 0));
            let mut rep = SolverReport::default();
            let mut local: Vec<f64> = segment_candidates(&r, -1.0, 1.0, &mut rep)
                .unwrap()
                .into_iter()
                .filter(|z| z.im.abs() < 1e-8)
                .map(|z| z.re)
                .collect();
            local.sort_by(f64::total_cmp);
            let coeffs: Vec<Complex64> = r.xi().to_vec();
            let all = crate::rootfind::roots_poly(&coeffs, 1e-9).unwrap();
            let global = crate::rootfind::real_roots(&all, (-1.0, 1.0), 1e-8);
            assert_eq!(local.len(), global.len(), "seed {seed}: {local:?} vs {global:?}");
            for (x, y) in local.iter().zip(&global) {
                assert!((x - y).abs() < 1e-10);
            }
        }
    }
}
