use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::baselines::quadrature::integrate_pieces;
use crate::ensembles::Realization;
use crate::error::{Error, Result};
use crate::region::Region;
use crate::rootfind::{self, DEFAULT_TOL};
use crate::special::circle_point;
use crate::statistics::{BumpFunction, Slot};

const JENSEN_GRID: usize = 512;
/// Acceptable relative Green residual; refinements further apart than ten
/// times this are reported as too coarse.
pub const GREEN_TOL: f64 = 1e-2;
const GREEN_FLOOR: f64 = 1e-6;
const ROOT_CLEARANCE: f64 = 1e-6;

/// `max_{|w-z|=ρ} ln|f(w)|`: grid maximum polished by golden-section search.
fn circle_max<F: Fn(Complex64) -> Result<f64>>(f: &F, z: Complex64, rho: f64) -> Result<f64> {
    let vals: Vec<f64> = (0..JENSEN_GRID).map(|k| f(z + rho * circle_point(k, JENSEN_GRID))).collect::<Result<_>>()?;
    let (best, mut top) =
        vals.iter().copied().enumerate().fold((0, f64::NEG_INFINITY), |a, (i, v)| if v > a.1 { (i, v) } else { a });
    if top == f64::NEG_INFINITY {
        return Ok(top);
    }
    let step = TAU / JENSEN_GRID as f64;
    let th0 = best as f64 * step;
    let (mut a, mut b) = (th0 - step, th0 + step);
    let g = 0.618_033_988_749_895;
    let at = |th: f64| f(z + Complex64::from_polar(rho, th));
    for _ in 0..40 {
        let (x1, x2) = (b - g * (b - a), a + g * (b - a));
        let (f1, f2) = (at(x1)?, at(x2)?);
        top = top.max(f1).max(f2);
        if f1 > f2 {
            b = x2;
        } else {
            a = x1;
        }
    }
    Ok(top)
}

/// Jensen's bound `ln(M/m) / ln((R² + r²)/(2Rr))` on the number of zeros
/// in the open disk `B(z, r)`, with `M` and `m` the maxima of `|f|` over the
/// closed disks of radius `R` and `r`.
pub fn jensen_zero_bound(r: &Realization, z: Complex64, inner_r: f64, outer_r: f64) -> Result<f64> {
    jensen_bound_with(&|w| r.ln_abs(w), z, inner_r, outer_r)
}

pub(crate) fn jensen_bound_with<F>(ln_abs: &F, z: Complex64, inner_r: f64, outer_r: f64) -> Result<f64>
where
    F: Fn(Complex64) -> Result<f64>,
{
    if !(inner_r > 0.0 && inner_r < outer_r && outer_r.is_finite()) {
        return Err(Error::InvalidArgument(format!("need 0 < r < R, got r={inner_r}, R={outer_r}")));
    }
    // maxima over closed disks sit on their boundary circles
    let big = circle_max(ln_abs, z, outer_r)?;
    if !big.is_finite() {
        return Err(Error::DegenerateZeroFunction);
    }
    let small = circle_max(ln_abs, z, inner_r)?;
    if small == f64::NEG_INFINITY {
        return Ok(f64::INFINITY);
    }
    let big = big.max(small);
    let denom = ((outer_r * outer_r + inner_r * inner_r) / (2.0 * outer_r * inner_r)).ln();
    Ok((big - small) / denom)
}

/// Relative mismatch in Green's identity
/// `Σ G(ζ) = (1/2π) ∫ ln|F| ΔG`, the integral taken by the midpoint rule on
/// a `grid_n × grid_n` grid over the support's bounding square.
///
/// Below an absolute floor of `10⁻⁶` on `|Σ G(ζ)|` the absolute difference
/// is returned instead.
pub fn green_identity_residual(r: &Realization, g: &BumpFunction, grid_n: usize) -> Result<f64> {
    let Slot::Complex { center, radius } = *g.slots().first().filter(|_| g.arity() == 1).ok_or_else(|| {
        Error::ArityMismatch { expected: "one complex factor".into(), found: format!("{} factors", g.arity()) }
    })?
    else {
        return Err(Error::InvalidArgument("Green's identity needs a complex bump".into()));
    };
    if grid_n < 8 {
        return Err(Error::GridTooCoarse(grid_n as f64));
    }
    let support = Region::disk(center, radius);
    r.ensemble().check_point(Complex64::from_polar(center.norm() + radius, center.arg()))?;
    let zeros = rootfind::roots_in(r, &support, DEFAULT_TOL)?.roots_with_multiplicity();
    let lhs: f64 = zeros.iter().map(|z| g.factor(0, *z)).sum();
    let fine = green_integral(r, g, center, radius, grid_n, &zeros)?;
    let coarse = green_integral(r, g, center, radius, (grid_n / 2).max(8), &zeros)?;
    let scale = lhs.abs().max(GREEN_FLOOR);
    let rel = |v: f64| if lhs.abs() < GREEN_FLOOR { (v - lhs).abs() } else { (v - lhs).abs() / scale };
    if (fine - coarse).abs() / lhs.abs().max(1.0) > 10.0 * GREEN_TOL {
        return Err(Error::GridTooCoarse((fine - coarse).abs()));
    }
    Ok(rel(fine))
}

fn green_integral(
    r: &Realization,
    g: &BumpFunction,
    center: Complex64,
    radius: f64,
    n: usize,
    zeros: &[Complex64],
) -> Result<f64> {
    let h = 2.0 * radius / n as f64;
    // shift the grid until every node clears the zeros
    let mut offset = 0.5;
    for attempt in 0..16 {
        let node = |i: usize, j: usize| {
            Complex64::new(center.re - radius + (i as f64 + offset) * h, center.im - radius + (j as f64 + offset) * h)
        };
        let clear = zeros.iter().all(|zeta| {
            let i = ((zeta.re - center.re + radius) / h - offset).round();
            let j = ((zeta.im - center.im + radius) / h - offset).round();
            if i < 0.0 || j < 0.0 || i >= n as f64 || j >= n as f64 {
                return true;
            }
            (node(i as usize, j as usize) - zeta).norm() > ROOT_CLEARANCE
        });
        if !clear {
            offset = 0.5 + 0.01 * (attempt + 1) as f64 * 0.618_033_988_749_895;
            continue;
        }
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                let w = node(i, j);
                let lap = g.laplacian(w)?;
                if lap != 0.0 {
                    acc += r.ln_abs(w)? * lap;
                }
            }
        }
        return Ok(acc * h * h / (2.0 * PI));
    }
    Err(Error::GridTooCoarse(h))
}

/// `(∫₀^{2π} |Σ e_t cos(f_t x)|² dx, analytic value)`, where the analytic
/// value is `π Σ_{f_t ≠ 0} |e_t|² + 2π Σ_{f_t = 0} |e_t|²`.
pub fn parseval_check(e: &[Complex64], freqs: &[usize]) -> Result<(f64, f64)> {
    if e.len() != freqs.len() {
        return Err(Error::ArityMismatch {
            expected: format!("{} frequencies", e.len()),
            found: format!("{}", freqs.len()),
        });
    }
    let mut seen = freqs.to_vec();
    seen.sort_unstable();
    if seen.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidArgument("frequencies must be distinct".into()));
    }
    let analytic: f64 = e.iter().zip(freqs).map(|(c, &f)| if f == 0 { 2.0 * PI } else { PI } * c.norm_sqr()).sum();
    let fmax = freqs.iter().copied().max().unwrap_or(0).max(1);
    let pieces = 4 * fmax;
    let pts: Vec<f64> = (0..=pieces).map(|k| TAU * k as f64 / pieces as f64).collect();
    let h = |x: f64| {
        let s: Complex64 = e.iter().zip(freqs).map(|(c, &f)| c * (f as f64 * x).cos()).sum();
        Ok(s.norm_sqr())
    };
    let tol = 1e-12 * analytic.max(1e-300);
    let q = integrate_pieces(h, &pts, tol)?;
    Ok((q.value, analytic))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{CoefficientLaw, Ensemble, EnsembleSpec};

    fn identity_poly() -> Realization {
        let law = CoefficientLaw::degenerate().with_shift(1, Complex64::new(1.0, 0.0));
        let ens = Ensemble::new(&EnsembleSpec::kac(1, law).unwrap()).unwrap();
        ens.realize(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]).unwrap()
    }

    #[test]
    fn jensen_identity_function() {
        let r = identity_poly();
        let b = jensen_zero_bound(&r, Complex64::new(0.0, 0.0), 0.5, 1.0).unwrap();
        assert!((b - 2f64.ln() / 1.25f64.ln()).abs() < 1e-12, "{b}");
        let c = jensen_bound_with(&|_| Ok(0.7), Complex64::new(0.0, 0.0), 0.5, 1.0).unwrap();
        assert_eq!(c, 0.0);
        assert!(matches!(
            jensen_bound_with(&|_| Ok(f64::NEG_INFINITY), Complex64::new(0.0, 0.0), 0.5, 1.0),
            Err(Error::DegenerateZeroFunction)
        ));
    }

    #[test]
    fn green_on_linear_function() {
        let law = CoefficientLaw::degenerate()
            .with_shift(0, Complex64::new(-0.3, -0.1))
            .with_shift(1, Complex64::new(1.0, 0.0));
        let ens = Ensemble::new(&EnsembleSpec::kac(1, law).unwrap()).unwrap();
        let r = ens.realize(vec![Complex64::new(-0.3, -0.1), Complex64::new(1.0, 0.0)]).unwrap();
        let a = Complex64::new(0.3, 0.1);
        let g = BumpFunction::complex(a, 0.5).unwrap();
        let res = green_identity_residual(&r, &g, 256).unwrap();
        assert!(res < 1e-3, "{res}");
        let away = BumpFunction::complex(Complex64::new(3.0, 0.0), 0.5).unwrap();
        assert!(green_identity_residual(&r, &away, 256).unwrap() < 1e-6);
    }

    #[test]
    fn parseval_examples() {
        let c = |x: f64| Complex64::new(x, 0.0);
        let (q, a) = parseval_check(&[c(2.0)], &[3]).unwrap();
        assert!((q - 4.0 * PI).abs() < 1e-10 && (a - 4.0 * PI).abs() < 1e-15);
        assert_eq!(parseval_check(&[], &[]).unwrap(), (0.0, 0.0));
        let (q, a) = parseval_check(&[c(1.0), c(1.0)], &[1, 2]).unwrap();
        assert!((q - 2.0 * PI).abs() < 1e-10 && (a - 2.0 * PI).abs() < 1e-15);
        let (q, a) = parseval_check(&[c(1.5), c(-0.5)], &[0, 4]).unwrap();
        assert!((q / a - 1.0).abs() < 1e-10);
        assert!(parseval_check(&[c(1.0), c(1.0)], &[2, 2]).is_err());
    }
}
