//! Dense polynomials in the monomial basis and the `Analytic` interface used
//! for polishing and residuals.

use num_complex::Complex64;

use crate::ensembles::Realization;
use crate::error::Result;

/// Something whose zeros can be polished by Newton's method.
pub trait Analytic: Send + Sync {
    /// `(F(z), F'(z))`, both multiplied by the same positive constant.
    fn value_and_derivative(&self, z: Complex64) -> Result<(Complex64, Complex64)>;
    /// `|F(z)|` divided by the natural magnitude of `F` near `z`.
    fn residual(&self, z: Complex64) -> Result<f64>;
    /// Real on the real axis.
    fn is_real(&self) -> bool;
}

impl Analytic for Realization {
    fn value_and_derivative(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let v = self.eval_scaled(z)?;
        Ok((v.mantissa[0], v.mantissa[1]))
    }

    fn residual(&self, z: Complex64) -> Result<f64> {
        let ln_f = self.ln_abs(z)?;
        let ln_s = self.ln_local_scale(z)?;
        Ok((ln_f - ln_s).exp())
    }

    fn is_real(&self) -> bool {
        Realization::is_real(self)
    }
}

/// `Σ a_i z^i`, ascending coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    pub coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self { coeffs: coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect() }
    }

    /// Expands `Π (z - r_k)`.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (i, &a) in c.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * r;
            }
            c = next;
        }
        Self { coeffs: c }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        horner(&self.coeffs, z).0
    }
}

/// `(p(z), p'(z))` by Horner's rule.
pub fn horner(a: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in a.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// `(p(z), p'(z), Σ|a_i||z|^i)`, all divided by `z^d` (by `|z|^d` for the
/// last) when `|z| > 1`, where the reversed polynomial is evaluated instead
/// so nothing overflows.
pub fn eval_normalized(a: &[Complex64], z: Complex64) -> (Complex64, Complex64, f64) {
    eval_inner(a, z, |i| a[i].norm())
}

/// [`eval_normalized`] with the moduli `|a_i|` precomputed.
pub(crate) fn eval_with_moduli(a: &[Complex64], moduli: &[f64], z: Complex64) -> (Complex64, Complex64, f64) {
    eval_inner(a, z, |i| moduli[i])
}

#[inline(always)]
fn eval_inner(a: &[Complex64], z: Complex64, modulus: impl Fn(usize) -> f64) -> (Complex64, Complex64, f64) {
    let d = a.len() - 1;
    let r = z.norm();
    if r <= 1.0 {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        let mut s = 0.0;
        for i in (0..=d).rev() {
            dp = dp * z + p;
            p = p * z + a[i];
            s = s * r + modulus(i);
        }
        (p, dp, s)
    } else {
        // p(z) = z^d q(w), w = 1/z, q(w) = Σ a_{d-i} w^i
        let w = z.inv();
        let rw = w.norm();
        let mut q = Complex64::new(0.0, 0.0);
        let mut dq = Complex64::new(0.0, 0.0);
        let mut s = 0.0;
        for i in 0..=d {
            dq = dq * w + q;
            q = q * w + a[i];
            s = s * rw + modulus(i);
        }
        // p'(z) = z^{d-1} (d q(w) - w q'(w)); divided by z^d: (d q - w q') w
        let dp = (q * d as f64 - w * dq) * w;
        (q, dp, s)
    }
}

impl Analytic for Polynomial {
    fn value_and_derivative(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let (p, dp, _) = eval_normalized(&self.coeffs, z);
        Ok((p, dp))
    }

    fn residual(&self, z: Complex64) -> Result<f64> {
        let (p, _, s) = eval_normalized(&self.coeffs, z);
        Ok(if s > 0.0 { p.norm() / s } else { 0.0 })
    }

    fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }
}

/// Newton's method on `f` from `z`; returns the final point and whether the
/// last step was below `1e-14 (1 + |z|)`.
pub fn newton_polish(f: &dyn Analytic, mut z: Complex64, max_iter: usize) -> Result<(Complex64, bool)> {
    for _ in 0..max_iter {
        let (v, d) = f.value_and_derivative(z)?;
        if v == Complex64::new(0.0, 0.0) {
            return Ok((z, true));
        }
        let step = v / d;
        if !step.re.is_finite() || !step.im.is_finite() {
            return Ok((z, false));
        }
        z -= step;
        if step.norm() <= 1e-14 * (1.0 + z.norm()) {
            return Ok((z, true));
        }
    }
    Ok((z, false))
}

/// Newton restricted to the real axis for functions real there.
pub fn real_newton(f: &dyn Analytic, mut x: f64, max_iter: usize) -> Result<(f64, bool)> {
    let mut last = f64::INFINITY;
    for _ in 0..max_iter {
        let (v, d) = f.value_and_derivative(Complex64::new(x, 0.0))?;
        if v.re == 0.0 {
            return Ok((x, true));
        }
        let step = v.re / d.re;
        if !step.is_finite() {
            return Ok((x, false));
        }
        x -= step;
        if step.abs() <= 1e-14 * (1.0 + x.abs()) {
            return Ok((x, true));
        }
        // quadratic convergence stalls at rounding level; accept once steps stop shrinking there
        if step.abs() >= last && step.abs() <= 1e-11 * (1.0 + x.abs()) {
            return Ok((x, true));
        }
        last = step.abs();
    }
    Ok((x, false))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_roots_and_eval() {
        let p = Polynomial::from_roots(&[Complex64::new(1.0, 0.0), Complex64::new(-2.0, 0.0)]);
        assert_eq!(p.coeffs, vec![Complex64::new(-2.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]);
        assert_eq!(p.eval(Complex64::new(1.0, 0.0)), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn normalized_eval_consistent() {
        let p = Polynomial::from_real(&[1.0, -3.0, 0.5, 2.0]);
        for z in [Complex64::new(0.3, 0.4), Complex64::new(3.0, -2.0)] {
            let (v, dv, _) = eval_normalized(&p.coeffs, z);
            let (h, dh) = horner(&p.coeffs, z);
            let scale = if z.norm() > 1.0 { z.powi(3) } else { Complex64::new(1.0, 0.0) };
            assert!((v * scale - h).norm() < 1e-12 * h.norm());
            assert!((dv * scale - dh).norm() < 1e-12 * dh.norm());
        }
    }
}
