//! Aberth–Ehrlich simultaneous iteration with a companion-matrix fallback.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::poly::eval_with_moduli;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Raw roots of a polynomial with nonzero leading and constant terms.
#[derive(Clone, Debug)]
pub(crate) struct RawRoots {
    pub roots: Vec<Complex64>,
    pub iterations: usize,
    pub fallback: bool,
}

/// Upper convex hull of `(i, ln|a_i|)` gives one starting radius per edge.
fn newton_polygon_start(a: &[Complex64]) -> Vec<Complex64> {
    let pts: Vec<(f64, f64)> =
        a.iter().enumerate().filter(|(_, c)| **c != ZERO).map(|(i, c)| (i as f64, c.norm().ln())).collect();
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    for p in pts {
        while hull.len() >= 2 {
            let (o, q) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (q.0 - o.0) * (p.1 - o.1) - (q.1 - o.1) * (p.0 - o.0);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut out = Vec::with_capacity(a.len() - 1);
    for (e, w) in hull.windows(2).enumerate() {
        let m = (w[1].0 - w[0].0) as usize;
        let r = ((w[0].1 - w[1].1) / m as f64).exp();
        let phase = 0.4 + 2.0 * std::f64::consts::PI * 0.618_033_988_749_895 * e as f64;
        for q in 0..m {
            let th = 2.0 * std::f64::consts::PI * q as f64 / m as f64 + phase;
            out.push(Complex64::from_polar(r, th));
        }
    }
    out
}

/// Backward-error stopping test: `|p(z)| ≤ 4(d+1)ε Σ|a_i||z|^i`.
fn converged(p: Complex64, s: f64, d: usize) -> bool {
    p.norm() <= 4.0 * (d + 1) as f64 * f64::EPSILON * s
}

pub(crate) fn aberth(a: &[Complex64], max_iter: usize) -> (Vec<Complex64>, usize, bool) {
    let d = a.len() - 1;
    let moduli: Vec<f64> = a.iter().map(|c| c.norm()).collect();
    let mut z = newton_polygon_start(a);
    let mut done = vec![false; d];
    let mut it = 0;
    while it < max_iter {
        it += 1;
        let mut all = true;
        for k in 0..d {
            if done[k] {
                continue;
            }
            let zk = z[k];
            let (p, dp, s) = eval_with_moduli(a, &moduli, zk);
            if converged(p, s, d) {
                done[k] = true;
                continue;
            }
            all = false;
            let n = p / dp;
            let mut sum = ZERO;
            for (j, &zj) in z.iter().enumerate() {
                if j != k {
                    sum += (zk - zj).inv();
                }
            }
            let delta = n / (1.0 - n * sum);
            if delta.re.is_finite() && delta.im.is_finite() {
                z[k] = zk - delta;
            } else if n.re.is_finite() && n.im.is_finite() {
                z[k] = zk - n;
            }
        }
        if all {
            return (z, it, true);
        }
    }
    let ok = z.iter().all(|&zk| {
        let (p, _, s) = eval_with_moduli(a, &moduli, zk);
        converged(p, s, d)
    });
    (z, it, ok)
}

/// Eigenvalues of the companion matrix of the monic normalization.
fn companion_roots(a: &[Complex64]) -> Option<Vec<Complex64>> {
    let d = a.len() - 1;
    let lead = a[d];
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..d {
        m[(i, d - 1)] = -a[i] / lead;
    }
    let schur = nalgebra::linalg::Schur::try_new(m, f64::EPSILON, 10_000)?;
    let ev = schur.eigenvalues()?;
    Some(ev.iter().copied().collect())
}

/// Newton on the polynomial itself, in the reversed variable outside the
/// unit disk.
fn polish(a: &[Complex64], mut z: Complex64) -> Complex64 {
    let d = a.len() - 1;
    let moduli: Vec<f64> = a.iter().map(|c| c.norm()).collect();
    for _ in 0..20 {
        let (p, dp, s) = eval_with_moduli(a, &moduli, z);
        if converged(p, s, d) {
            break;
        }
        let step = p / dp;
        if !(step.re.is_finite() && step.im.is_finite()) {
            break;
        }
        z -= step;
        if step.norm() <= 1e-15 * z.norm() {
            break;
        }
    }
    z
}

/// All roots of `Σ a_i z^i`, leading noise stripped, with exact zero roots
/// for vanishing low coefficients.
pub(crate) fn raw_roots(coeffs: &[Complex64]) -> Result<RawRoots> {
    let max = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if max == 0.0 || !max.is_finite() {
        return if max == 0.0 {
            Err(Error::DegenerateAllZero)
        } else {
            Err(Error::InvalidArgument("non-finite coefficient".into()))
        };
    }
    let mut hi = coeffs.len() - 1;
    while coeffs[hi].norm() <= 1e-15 * max {
        hi -= 1;
    }
    let lo = coeffs.iter().position(|c| *c != ZERO).expect("nonzero");
    let mut roots = vec![ZERO; lo];
    let a = &coeffs[lo..=hi];
    if a.len() == 1 {
        return Ok(RawRoots { roots, iterations: 0, fallback: false });
    }
    if a.len() == 2 {
        roots.push(-a[0] / a[1]);
        return Ok(RawRoots { roots, iterations: 0, fallback: false });
    }
    let (z, iterations, ok) = aberth(a, 200);
    if ok {
        roots.extend(z);
        return Ok(RawRoots { roots, iterations, fallback: false });
    }
    let ev = companion_roots(a)
        .ok_or_else(|| Error::NoConvergence("Aberth iteration and companion eigenvalues both failed".into()))?;
    roots.extend(ev.into_iter().map(|z| polish(a, z)));
    Ok(RawRoots { roots, iterations, fallback: true })
}

/// Runs only the companion-matrix path; exposed for cross-checks.
pub(crate) fn companion_only(coeffs: &[Complex64]) -> Option<Vec<Complex64>> {
    companion_roots(coeffs).map(|ev| ev.into_iter().map(|z| polish(coeffs, z)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootfind::poly::Polynomial;

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        v
    }

    #[test]
    fn constructed_roots_recovered() {
        let want: Vec<Complex64> = (1..=5).map(|k| Complex64::new(k as f64 / 10.0, 0.0)).collect();
        let p = Polynomial::from_roots(&want);
        let got = sorted(raw_roots(&p.coeffs).unwrap().roots);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).norm() < 1e-8);
        }
    }

    #[test]
    fn companion_agrees_with_aberth() {
        let p = Polynomial::from_real(&[2.0, -1.0, 0.5, 3.0, -0.25, 1.0]);
        let a = raw_roots(&p.coeffs).unwrap().roots;
        let b = companion_only(&p.coeffs).unwrap();
        assert_eq!(a.len(), b.len());
        for x in &a {
            let d = b.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min);
            assert!(d < 1e-10, "{x} unmatched");
        }
    }

    #[test]
    fn wide_dynamic_range() {
        // roots spread over 12 orders of magnitude
        let want: Vec<Complex64> = (0..7).map(|k| Complex64::new(10f64.powi(2 * k - 6), 0.0)).collect();
        let p = Polynomial::from_roots(&want);
        let got = sorted(raw_roots(&p.coeffs).unwrap().roots);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).norm() <= 1e-9 * w.norm(), "{g} vs {w}");
        }
    }

    #[test]
    fn zero_roots_and_all_zero() {
        let r = raw_roots(&[ZERO, ZERO, Complex64::new(1.0, 0.0)]).unwrap();
        assert_eq!(r.roots, vec![ZERO, ZERO]);
        assert_eq!(raw_roots(&[ZERO, ZERO]).unwrap_err(), Error::DegenerateAllZero);
    }
}
