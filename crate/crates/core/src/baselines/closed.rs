use std::f64::consts::PI;

use super::quadrature::integrate_pieces;
use crate::error::{Error, Result};
use crate::region::Region;
use crate::special::{csch2, csch2_minus_inv2};

/// Main term `(b-a)/π · √(Σ c_j² j² / Σ c_j²) · e^{-u²/2}` for the mean
/// number of zeros of `Σ c_j (ξ_j cos jx + η_j sin jx) = u σ` in `[a, b]`.
pub fn trig_closed_form(c: &[f64], u: f64, a: f64, b: f64) -> Result<f64> {
    let s0: f64 = c.iter().map(|x| x * x).sum();
    if s0 == 0.0 {
        return Err(Error::AllZeroCoefficients);
    }
    let s2: f64 = c.iter().enumerate().map(|(j, x)| (j as f64 * x).powi(2)).sum();
    Ok((b - a) / PI * (s2 / s0).sqrt() * (-0.5 * u * u).exp())
}

/// Main term `√((2k+1)/(2k+3)) (b-a) n/π` for zeros of the `k`-th
/// derivative of a flat trigonometric polynomial of degree `n`.
pub fn trig_derivative_expected(k: u32, n: usize, a: f64, b: f64) -> f64 {
    let k = k as f64;
    ((2.0 * k + 1.0) / (2.0 * k + 3.0)).sqrt() * (b - a) * n as f64 / PI
}

/// Kac density of real zeros of a degree-`n` gaussian polynomial, as a
/// function of `u = -ln t` on `0 < t < 1`, including the Jacobian `t`:
/// `(1/2π) √(csch²u - (n+1)² csch²((n+1)u))`.
fn kac_u_density(n: usize, u: f64) -> f64 {
    let m = (n + 1) as f64;
    let d = if m * u < 1.0 {
        // the 1/u² parts of both terms cancel exactly
        csch2_minus_inv2(u) - m * m * csch2_minus_inv2(m * u)
    } else {
        csch2(u) - m * m * csch2(m * u)
    };
    d.max(0.0).sqrt() / (2.0 * PI)
}

/// Kac density at real `t`.
pub fn kac_density(n: usize, t: f64) -> f64 {
    let a = t.abs();
    if a == 0.0 {
        return 1.0 / PI;
    }
    // t ↔ 1/t and t ↔ -t symmetries fold everything onto (0, 1]
    let (x, jac) = if a > 1.0 { (1.0 / a, 1.0 / (a * a)) } else { (a, 1.0) };
    kac_u_density(n, -x.ln()) / x * jac
}

/// Expected number of real zeros of `Σ_{i=0}^n ξ_i t^i` with iid standard
/// gaussian `ξ_i`: four times the integral over `0 < t < 1`.
pub fn kac_gauss_expected(n: usize, quad_tol: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    let scale = 1.0 / (n + 1) as f64;
    let mut pts = vec![0.0];
    for s in [1.0, 4.0, 16.0, 64.0] {
        if s * scale < 1.0 {
            pts.push(s * scale);
        }
    }
    pts.extend([1.0, 4.0, f64::INFINITY]);
    let q = integrate_pieces(|u| Ok(kac_u_density(n, u)), &pts, quad_tol / 4.0)?;
    Ok(4.0 * q.value)
}

/// `area / π`, the mean number of zeros of the flat chaos in a region.
pub fn flat_expected(region: &Region) -> Result<f64> {
    Ok(region.area()? / PI)
}

/// `√n`, the mean number of real zeros of the elliptic polynomial.
pub fn elliptic_expected(n: usize) -> f64 {
    (n as f64).sqrt()
}

/// Asymptotic main term `(√γ/2π)·(-ln(1-r))` for the mean number of zeros
/// of the Taylor series in `[0, r]`.
pub fn taylor_expected(gamma: f64, r: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidArgument(format!("r must lie in (0, 1), got {r}")));
    }
    if !(gamma > 0.0) {
        return Err(Error::InvalidArgument(format!("gamma must be positive, got {gamma}")));
    }
    Ok(gamma.sqrt() / (2.0 * PI) * -(-r).ln_1p())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn trig_flat_arithmetic() {
        let v = trig_closed_form(&[1.0; 11], 0.0, 0.0, 2.0 * PI).unwrap();
        assert!((v - 2.0 * 35f64.sqrt()).abs() < 1e-12);
        let w = trig_closed_form(&[1.0; 11], 1.0, 0.0, 2.0 * PI).unwrap();
        assert!((w / v - (-0.5f64).exp()).abs() < 1e-15);
        assert_eq!(trig_closed_form(&[0.0; 4], 0.0, 0.0, 1.0), Err(Error::AllZeroCoefficients));
    }

    #[test]
    fn derivative_main_term() {
        assert!((trig_derivative_expected(0, 30, 0.0, 1.0) - 30.0 / (PI * 3f64.sqrt())).abs() < 1e-12);
        assert!((trig_derivative_expected(1, 100, 0.0, 2.0 * PI) - 0.6f64.sqrt() * 200.0).abs() < 1e-10);
        let f: Vec<f64> = (0..20).map(|k| trig_derivative_expected(k, 1, 0.0, PI)).collect();
        assert!(f.windows(2).all(|w| w[1] > w[0]) && f[19] < 1.0);
    }

    #[test]
    fn kac_linear_and_origin() {
        assert!((kac_gauss_expected(1, 1e-10).unwrap() - 1.0).abs() < 1e-9);
        for n in [1, 5, 50] {
            assert_eq!(kac_density(n, 0.0), 1.0 / PI);
            assert!((kac_density(n, 1e-9) - 1.0 / PI).abs() < 1e-9);
        }
    }

    #[test]
    fn kac_density_matches_direct_formula() {
        let n = 6;
        for t in [0.2f64, 0.7, 0.95, 1.3, -2.0] {
            let m = (n + 1) as f64;
            let direct = (1.0 / (t * t - 1.0).powi(2)
                - m * m * t.powi(2 * n as i32) / (t.powi(2 * n as i32 + 2) - 1.0).powi(2))
            .sqrt()
                / PI;
            assert!((kac_density(n, t) - direct).abs() < 1e-10 * direct, "{t}");
        }
    }

    #[test]
    fn kac_log_growth() {
        let v = kac_gauss_expected(1000, 1e-8).unwrap();
        let lead = 2.0 / PI * 1000f64.ln();
        assert!((v - lead).abs() < 1.0, "{v} vs {lead}");
    }

    #[test]
    fn flat_and_taylor() {
        let d = Region::disk(Complex64::new(7.0, -2.0), 1.0);
        assert!((flat_expected(&d).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(flat_expected(&Region::Empty).unwrap(), 0.0);
        assert_eq!(elliptic_expected(100), 10.0);
        let v = taylor_expected(3.0, 1.0 - 2f64.powi(-10)).unwrap();
        assert!((v - 3f64.sqrt() / (2.0 * PI) * 10.0 * 2f64.ln()).abs() < 1e-12);
    }
}
