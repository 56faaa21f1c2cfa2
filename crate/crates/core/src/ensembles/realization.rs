use std::sync::Arc;

use num_complex::Complex64;

use super::spec::{EnsembleSpec, Family, GenericBasis};
use super::truncation::{log_weight_fn, truncation_length};
use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Terms whose log-magnitude falls this far below the dominant one are skipped.
const LOG_CUTOFF: f64 = 60.0;
/// Weyl evaluation switches to the rescaled function beyond this anchor modulus.
const WEYL_RESCALE_RADIUS: f64 = 5.0;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// A value known as `e^log_scale · mantissa`, used to keep huge or tiny
/// magnitudes representable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scaled<T> {
    pub log_scale: f64,
    pub mantissa: T,
}

impl Scaled<[Complex64; 3]> {
    pub fn value(&self, order: usize) -> Complex64 {
        self.mantissa[order] * self.log_scale.exp()
    }

    pub fn ln_abs(&self) -> f64 {
        self.log_scale + self.mantissa[0].norm().ln()
    }
}

/// `[φ_i, φ_i', φ_i'']` for every basis term, all sharing one scale factor.
#[derive(Clone, Debug)]
pub struct BasisValues {
    pub log_scale: f64,
    pub values: Vec<[Complex64; 3]>,
}

impl BasisValues {
    /// `Σ_{i≥from} |φ_i|²` on the common scale.
    pub fn norm_sqr_from(&self, from: usize) -> f64 {
        self.values.iter().skip(from).map(|v| v[0].norm_sqr()).sum()
    }

    /// `ln Σ_{i≥from} |φ_i|²`.
    pub fn ln_variance(&self, from: usize) -> f64 {
        2.0 * self.log_scale + self.norm_sqr_from(from).ln()
    }
}

#[derive(Debug)]
pub(crate) enum Basis {
    Power {
        log_w: Vec<f64>,
        ratio: Vec<f64>,
        /// Weyl anchor `z₀` when evaluation divides by `e^{|z₀|²/2 + (z-z₀) z̄₀}`.
        anchor: Option<Complex64>,
        /// Radius inside which the truncation certificate holds.
        validated: Option<f64>,
    },
    Trig {
        n: usize,
        c: Vec<f64>,
        d: Vec<f64>,
        k: u32,
        level: f64,
    },
    Generic(GenericBasis),
}

/// An ensemble with its basis prepared once, ready to draw many realizations.
#[derive(Clone, Debug)]
pub struct Ensemble {
    spec: Arc<EnsembleSpec>,
    basis: Arc<Basis>,
    len: usize,
}

impl Ensemble {
    pub fn new(spec: &EnsembleSpec) -> Result<Self> {
        spec.validate()?;
        let (basis, len) = match &spec.family {
            Family::Kac { .. } | Family::Elliptic { .. } | Family::Weyl | Family::Taylor { .. } => {
                let len = truncation_length(spec, &spec.scale.domain, spec.truncation_tol)?;
                let mut lw = log_weight_fn(&spec.family).expect("power family");
                let log_w: Vec<f64> = (0..len).map(&mut lw).collect();
                let ratio: Vec<f64> = log_w.windows(2).map(|p| (p[1] - p[0]).exp()).collect();
                let (anchor, validated) = if spec.family.is_infinite() {
                    let a = spec.scale.domain.anchor();
                    let anchor = (matches!(spec.family, Family::Weyl) && a.norm() > WEYL_RESCALE_RADIUS).then_some(a);
                    (anchor, Some(spec.scale.domain.max_modulus()))
                } else {
                    (None, None)
                };
                (Basis::Power { log_w, ratio, anchor, validated }, len)
            }
            Family::Trig { c, d, level, derivative } => {
                let n = c.len() - 1;
                let mut dd = d.clone();
                dd.resize(n, 0.0);
                let k = *derivative as i32;
                let sigma2: f64 = c
                    .iter()
                    .enumerate()
                    .map(|(j, cj)| {
                        let jk = if k == 0 { 1.0 } else { (j as f64).powi(k) };
                        (jk * cj).powi(2)
                    })
                    .sum();
                let level = level * sigma2.sqrt();
                (Basis::Trig { n, c: c.clone(), d: dd, k: *derivative, level }, 2 * n + 1)
            }
            Family::Generic(b) => (Basis::Generic(b.clone()), b.terms.len()),
        };
        Ok(Self { spec: Arc::new(spec.clone()), basis: Arc::new(basis), len })
    }

    pub fn spec(&self) -> &EnsembleSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub(crate) fn basis(&self) -> &Basis {
        &self.basis
    }

    /// Radius of the disk on which truncated series may be evaluated.
    pub fn validated_radius(&self) -> Option<f64> {
        match &*self.basis {
            Basis::Power { validated, .. } => *validated,
            _ => None,
        }
    }

    /// Deterministic constant subtracted from the random sum.
    pub fn level(&self) -> f64 {
        match &*self.basis {
            Basis::Trig { level, .. } => *level,
            _ => 0.0,
        }
    }

    pub fn check_point(&self, z: Complex64) -> Result<()> {
        if let Some(r) = self.validated_radius() {
            if !(z.norm() <= r * (1.0 + 1e-12)) {
                return Err(Error::OutOfValidatedRegion(z));
            }
        }
        Ok(())
    }

    pub fn draw(&self, stream: &mut RngStream) -> Realization {
        let law = &self.spec.law;
        let xi: Vec<Complex64> = (0..self.len).map(|i| law.sample(stream, i)).collect();
        self.realize(xi).expect("length matches by construction")
    }

    /// Realization with prescribed coefficients.
    pub fn realize(&self, xi: Vec<Complex64>) -> Result<Realization> {
        if xi.len() != self.len {
            return Err(Error::InvalidArgument(format!("expected {} coefficients, got {}", self.len, xi.len())));
        }
        let trig = match &*self.basis {
            Basis::Trig { n, c, d, k, level } => Some(trig_exponential_coeffs(*n, c, d, *k, *level, &xi)),
            _ => None,
        };
        let real = self.spec.family.is_real() && xi.iter().all(|x| x.im == 0.0);
        Ok(Realization { ens: self.clone(), xi, trig, real })
    }

    pub fn basis_values(&self, z: Complex64) -> Result<BasisValues> {
        let mut values = vec![[ZERO; 3]; self.len];
        let log_scale = self.basis_fold(z, |i, v| values[i] = v)?;
        Ok(BasisValues { log_scale, values })
    }

    /// Calls `f(i, [φ_i, φ_i', φ_i''])` for every non-negligible term on a
    /// common scale and returns that scale's log.
    fn basis_fold<F: FnMut(usize, [Complex64; 3])>(&self, z: Complex64, mut f: F) -> Result<f64> {
        self.check_point(z)?;
        Ok(match &*self.basis {
            Basis::Power { log_w, ratio, anchor, .. } => {
                let (shift, phase, zc) = match anchor {
                    Some(z0) => {
                        let (shift, phase) = weyl_factor(*z0, z);
                        (shift, phase, z0.conj())
                    }
                    None => (0.0, Complex64::new(1.0, 0.0), ZERO),
                };
                let mut emit = |i: usize, v: [Complex64; 3]| {
                    if anchor.is_some() {
                        let [p, p1, p2] = v;
                        f(i, [p * phase, (p1 - zc * p) * phase, (p2 - 2.0 * zc * p1 + zc * zc * p) * phase]);
                    } else {
                        f(i, v);
                    }
                };
                let ls = if z == ZERO {
                    for m in 0..3.min(log_w.len()) {
                        let mut v = [ZERO; 3];
                        v[m] = Complex64::new(origin_factor(m) * log_w[m].exp(), 0.0);
                        emit(m, v);
                    }
                    0.0
                } else {
                    power_terms(log_w, ratio, z, |i, t, zi| {
                        let fi = i as f64;
                        emit(i, [t, t * fi * zi, t * fi * (fi - 1.0) * zi * zi]);
                    })
                };
                ls + shift
            }
            Basis::Trig { n, c, d, k, .. } => {
                let e = (I * z).exp();
                let ei = e.inv();
                let (mut wp, mut wm) = (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
                let kk = *k as i32;
                for j in 0..=*n {
                    let ij = I * j as f64;
                    // cos(jz) = (w^j + w^-j)/2, sin(jz) = (w^j - w^-j)/(2i)
                    let dcos = |o: i32| (wp * ij.powi(o) + wm * (-ij).powi(o)) * 0.5;
                    let dsin = |o: i32| (wp * ij.powi(o) - wm * (-ij).powi(o)) / (2.0 * I);
                    f(j, [c[j] * dcos(kk), c[j] * dcos(kk + 1), c[j] * dcos(kk + 2)]);
                    if j > 0 {
                        f(n + j, [d[j - 1] * dsin(kk), d[j - 1] * dsin(kk + 1), d[j - 1] * dsin(kk + 2)]);
                    }
                    wp *= e;
                    wm *= ei;
                }
                0.0
            }
            Basis::Generic(b) => {
                for (i, t) in b.terms.iter().enumerate() {
                    f(i, t(z));
                }
                0.0
            }
        })
    }

    /// `ln Σ_{i≥from} |φ_i(z)|²` without materializing the basis.
    fn ln_variance_from(&self, z: Complex64, from: usize) -> Result<f64> {
        let mut s = 0.0;
        let ls = self.basis_fold(z, |i, v| {
            if i >= from {
                s += v[0].norm_sqr();
            }
        })?;
        Ok(2.0 * ls + s.ln())
    }

    /// `Σ_i |φ_i(z)|²`.
    pub fn variance_profile(&self, z: Complex64) -> Result<f64> {
        Ok(self.ln_variance_from(z, 0)?.exp())
    }

    /// Variance profile without the first `n0` terms.
    pub fn variance_profile_from(&self, z: Complex64, n0: usize) -> Result<f64> {
        Ok(self.ln_variance_from(z, n0)?.exp())
    }

    /// Typical zero spacing near `z`: `1/√(∂∂̄ log V(z))`, the inverse square
    /// root of π times the first intensity of the gaussian zero set.
    pub fn zero_spacing(&self, z: Complex64) -> Result<f64> {
        let (mut a, mut b, mut cross) = (0.0, 0.0, ZERO);
        self.basis_fold(z, |_, v| {
            a += v[0].norm_sqr();
            b += v[1].norm_sqr();
            cross += v[0].conj() * v[1];
        })?;
        let lap = (a * b - cross.norm_sqr()) / (a * a);
        Ok(if lap > 0.0 { 1.0 / lap.sqrt() } else { f64::INFINITY })
    }
}

/// Walks the power terms `t_i = w_i z^i e^{-K}` outward from the dominant
/// index, calling `f(i, t_i, 1/z)` for every non-negligible term, and returns
/// `K`. Requires `z != 0`.
fn power_terms<F: FnMut(usize, Complex64, Complex64)>(log_w: &[f64], ratio: &[f64], z: Complex64, mut f: F) -> f64 {
    let len = log_w.len();
    let lr = z.norm().ln();
    let mut istar = 0;
    let mut best = f64::NEG_INFINITY;
    for (i, &lw) in log_w.iter().enumerate() {
        let l = lw + i as f64 * lr;
        if l > best {
            best = l;
            istar = i;
        }
    }
    let zi = z.inv();
    let arg = z.arg();
    let t0 = Complex64::from_polar(1.0, istar as f64 * arg);
    f(istar, t0, zi);
    let mut t = t0;
    for i in istar + 1..len {
        t = t * z * ratio[i - 1];
        if log_w[i] + i as f64 * lr < best - LOG_CUTOFF {
            break;
        }
        f(i, t, zi);
    }
    let mut t = t0;
    for i in (0..istar).rev() {
        t = t * zi / ratio[i];
        if log_w[i] + i as f64 * lr < best - LOG_CUTOFF {
            break;
        }
        f(i, t, zi);
    }
    best
}

/// `m!`, the factor in `d^m/dz^m (w_m z^m)` at the origin.
fn origin_factor(m: usize) -> f64 {
    [1.0, 1.0, 2.0][m]
}

/// `(ln|1/g|, phase of 1/g)` for `g = e^{|z₀|²/2 + (z-z₀) z̄₀}`.
fn weyl_factor(z0: Complex64, z: Complex64) -> (f64, Complex64) {
    let e = 0.5 * z0.norm_sqr() + (z - z0) * z0.conj();
    (-e.re, Complex64::from_polar(1.0, -e.im))
}

/// Coefficients `C_j`, `j = -n..=n` (stored at `j + n`), with
/// `F(z) = Σ C_j e^{ijz}`.
fn trig_exponential_coeffs(n: usize, c: &[f64], d: &[f64], k: u32, level: f64, xi: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![ZERO; 2 * n + 1];
    let kk = k as i32;
    for j in 0..=n {
        let ij = I * j as f64;
        let (pk, mk) = if j == 0 {
            let v = if k == 0 { 1.0 } else { 0.0 };
            (Complex64::new(v, 0.0), Complex64::new(v, 0.0))
        } else {
            (ij.powi(kk), (-ij).powi(kk))
        };
        let a = c[j] * xi[j];
        if j == 0 {
            out[n] += a * pk;
            continue;
        }
        let b = d[j - 1] * xi[n + j];
        out[n + j] += a * pk * 0.5 + b * pk / (2.0 * I);
        out[n - j] += a * mk * 0.5 - b * mk / (2.0 * I);
    }
    out[n] -= level;
    out
}

/// One drawn coefficient vector together with its prepared basis.
#[derive(Clone, Debug)]
pub struct Realization {
    ens: Ensemble,
    xi: Vec<Complex64>,
    trig: Option<Vec<Complex64>>,
    real: bool,
}

impl Realization {
    pub fn spec(&self) -> &EnsembleSpec {
        self.ens.spec()
    }

    pub fn ensemble(&self) -> &Ensemble {
        &self.ens
    }

    pub fn xi(&self) -> &[Complex64] {
        &self.xi
    }

    pub fn truncation_length(&self) -> usize {
        self.xi.len()
    }

    /// Real on the real axis: real basis and real coefficients.
    pub fn is_real(&self) -> bool {
        self.real
    }

    /// `C_j` of `F(z) = Σ_{j=-n}^n C_j e^{ijz}` for trig realizations.
    pub fn trig_coefficients(&self) -> Option<&[Complex64]> {
        self.trig.as_deref()
    }

    /// Same basis, coefficients in reverse order. For Kac and elliptic
    /// realizations this is `z^n F(1/z)`.
    pub fn reversed(&self) -> Realization {
        let mut xi = self.xi.clone();
        xi.reverse();
        self.ens.realize(xi).expect("same length")
    }

    /// `[F, F', F'']` on a common scale.
    pub fn eval_scaled(&self, z: Complex64) -> Result<Scaled<[Complex64; 3]>> {
        self.ens.check_point(z)?;
        Ok(match self.ens.basis() {
            Basis::Power { log_w, ratio, anchor, .. } => {
                let xi = &self.xi;
                let (ls, s0, s1, s2) = if z == ZERO {
                    let at = |m: usize| match xi.get(m) {
                        Some(x) => x * origin_factor(m) * log_w[m].exp(),
                        None => ZERO,
                    };
                    (0.0, at(0), at(1), at(2))
                } else {
                    let (mut s0, mut s1, mut s2) = (ZERO, ZERO, ZERO);
                    let ls = power_terms(log_w, ratio, z, |i, t, _| {
                        let a = xi[i] * t;
                        let fi = i as f64;
                        s0 += a;
                        s1 += a * fi;
                        s2 += a * (fi * (fi - 1.0));
                    });
                    let zi = z.inv();
                    (ls, s0, s1 * zi, s2 * zi * zi)
                };
                match anchor {
                    Some(z0) => {
                        let (shift, phase) = weyl_factor(*z0, z);
                        let zc = z0.conj();
                        Scaled {
                            log_scale: ls + shift,
                            mantissa: [s0 * phase, (s1 - zc * s0) * phase, (s2 - 2.0 * zc * s1 + zc * zc * s0) * phase],
                        }
                    }
                    None => Scaled { log_scale: ls, mantissa: [s0, s1, s2] },
                }
            }
            Basis::Trig { n, .. } => {
                let coeffs = self.trig.as_ref().expect("trig coefficients");
                let v = trig_eval(coeffs, *n, z);
                Scaled { log_scale: 0.0, mantissa: v }
            }
            Basis::Generic(b) => {
                let mut s = [ZERO; 3];
                for (x, f) in self.xi.iter().zip(&b.terms) {
                    let v = f(z);
                    for o in 0..3 {
                        s[o] += x * v[o];
                    }
                }
                Scaled { log_scale: 0.0, mantissa: s }
            }
        })
    }

    /// `F`, `F'` or `F''` at `z`.
    pub fn evaluate(&self, z: Complex64, order: usize) -> Result<Complex64> {
        if order > 2 {
            return Err(Error::InvalidArgument(format!("derivative order {order} > 2")));
        }
        Ok(self.eval_scaled(z)?.value(order))
    }

    /// `ln|F(z)|`, safe against overflow.
    pub fn ln_abs(&self, z: Complex64) -> Result<f64> {
        Ok(self.eval_scaled(z)?.ln_abs())
    }

    /// `√(Σ|φ_i(z)|²)`, the natural magnitude of `F` near `z`.
    pub fn local_scale(&self, z: Complex64) -> Result<f64> {
        Ok(self.ens.variance_profile(z)?.sqrt())
    }

    /// `ln √(Σ|φ_i(z)|²)`.
    pub fn ln_local_scale(&self, z: Complex64) -> Result<f64> {
        Ok(0.5 * self.ens.ln_variance_from(z, 0)?)
    }

    /// Direct (unnormalized) summation; only meaningful for small sizes.
    pub fn evaluate_direct(&self, z: Complex64) -> Result<Complex64> {
        let bv = self.ens.basis_values(z)?;
        let s: Complex64 = bv.values.iter().zip(&self.xi).map(|(v, x)| v[0] * x).sum();
        Ok(s * bv.log_scale.exp() - self.ens.level())
    }
}

fn trig_eval(coeffs: &[Complex64], n: usize, z: Complex64) -> [Complex64; 3] {
    let e = (I * z).exp();
    let ei = e.inv();
    let mut out = [coeffs[n], ZERO, ZERO];
    let (mut wp, mut wm) = (e, ei);
    for j in 1..=n {
        let fj = j as f64;
        let p = coeffs[n + j] * wp;
        let m = coeffs[n - j] * wm;
        out[0] += p + m;
        out[1] += (p - m) * fj;
        out[2] += (p + m) * (fj * fj);
        wp *= e;
        wm *= ei;
    }
    [out[0], out[1] * I, -out[2]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{CoefficientLaw, SlowlyVarying};
    use crate::region::Region;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kac_linear_root() {
        let e = Ensemble::new(&EnsembleSpec::kac(1, CoefficientLaw::gaussian()).unwrap()).unwrap();
        let r = e.realize(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(r.evaluate(c(-1.0, 0.0), 0).unwrap(), ZERO);
        assert_eq!(r.evaluate(c(0.0, 0.0), 1).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn trig_cosine_zero() {
        let spec = EnsembleSpec::trig(vec![0.0, 1.0], vec![0.0], 0.0, CoefficientLaw::gaussian()).unwrap();
        let e = Ensemble::new(&spec).unwrap();
        let r = e.realize(vec![c(1.0, 0.0); 3]).unwrap();
        assert!(r.evaluate(c(std::f64::consts::FRAC_PI_2, 0.0), 0).unwrap().norm() < 1e-16);
        let d1 = r.evaluate(c(0.3, 0.2), 1).unwrap();
        assert!((d1 + c(0.3, 0.2).sin()).norm() < 1e-14);
    }

    /// `ξ_j = 1/√(j!)`, which turns the Weyl series into `e^z`.
    fn exp_coefficients(len: usize) -> Vec<Complex64> {
        (0..len).map(|j| c((-0.5 * crate::special::ln_gamma(j as f64 + 1.0)).exp(), 0.0)).collect()
    }

    #[test]
    fn weyl_origin_is_one() {
        let spec = EnsembleSpec::weyl(Region::disk(c(0.0, 0.0), 3.0), CoefficientLaw::gaussian()).unwrap();
        let e = Ensemble::new(&spec).unwrap();
        let r = e.realize(vec![c(1.0, 0.0); e.len()]).unwrap();
        assert_eq!(r.evaluate(c(0.0, 0.0), 0).unwrap(), c(1.0, 0.0));
        assert!((e.variance_profile(c(0.0, 0.0)).unwrap() - 1.0).abs() < 1e-15);
        let r = e.realize(exp_coefficients(e.len())).unwrap();
        let z = c(1.2, -0.7);
        assert!((r.evaluate(z, 0).unwrap() - z.exp()).norm() < 1e-12 * z.exp().norm());
        assert!((r.evaluate(z, 2).unwrap() - z.exp()).norm() < 1e-11 * z.exp().norm());
        assert!(matches!(r.evaluate(c(4.0, 0.0), 0), Err(Error::OutOfValidatedRegion(_))));
    }

    #[test]
    fn weyl_rescaled_matches_definition() {
        let z0 = c(10.0, 0.0);
        let spec = EnsembleSpec::weyl(Region::disk(z0, 1.0), CoefficientLaw::gaussian()).unwrap();
        let e = Ensemble::new(&spec).unwrap();
        let r = e.realize(exp_coefficients(e.len())).unwrap();
        // P = e^z, so F = e^{z - |z0|^2/2 - (z - z0) z0}
        let z = c(10.3, 0.4);
        let want = (z - 0.5 * z0.norm_sqr() - (z - z0) * z0.conj()).exp();
        let got = r.evaluate(z, 0).unwrap();
        assert!((got - want).norm() < 1e-10 * want.norm(), "{got} vs {want}");
        let want1 = want * (1.0 - z0.conj());
        assert!((r.evaluate(z, 1).unwrap() - want1).norm() < 1e-10 * want1.norm());
        // variance profile of the rescaled function is e^{|z|²}/|g|² = e^{|z - z0|²}
        let v = e.variance_profile(z).unwrap();
        assert!((v - (z - z0).norm_sqr().exp()).abs() < 1e-9 * v);
    }

    #[test]
    fn elliptic_basis_matches_factorials() {
        let n = 30;
        let e = Ensemble::new(&EnsembleSpec::elliptic(n, CoefficientLaw::gaussian()).unwrap()).unwrap();
        let x = c(0.7, 0.0);
        let bv = e.basis_values(x).unwrap();
        let mut binom = 1.0f64;
        for i in 0..=n {
            let want = binom.sqrt() * x.re.powi(i as i32);
            let got = bv.values[i][0].re * bv.log_scale.exp();
            assert!((got - want).abs() <= 1e-10 * want, "i={i}");
            binom = binom * (n - i) as f64 / (i + 1) as f64;
        }
        let v = e.variance_profile(x).unwrap();
        assert!((v - (1.0 + 0.49f64).powi(n as i32)).abs() < 1e-10 * v);
    }

    #[test]
    fn elliptic_large_n_no_overflow() {
        let e = Ensemble::new(&EnsembleSpec::elliptic(10_000, CoefficientLaw::gaussian()).unwrap()).unwrap();
        let r = e.realize(vec![c(1.0, 0.0); 10_001]).unwrap();
        let v = r.eval_scaled(c(1.0, 0.0)).unwrap();
        assert!(v.ln_abs().is_finite());
        // all-ones elliptic polynomial at 1 is Σ √C(n,i)
        assert!(r.ln_abs(c(0.01, 0.0)).unwrap().is_finite());
    }

    #[test]
    fn kac_variance_geometric() {
        let n = 20;
        let e = Ensemble::new(&EnsembleSpec::kac(n, CoefficientLaw::gaussian()).unwrap()).unwrap();
        for x in [0.3, -0.8, 1.5] {
            let want = (1.0 - f64::powi(x, 2 * n as i32 + 2)) / (1.0 - x * x);
            let got = e.variance_profile(c(x, 0.0)).unwrap();
            assert!((got - want).abs() < 1e-12 * want);
        }
    }

    #[test]
    fn taylor_derivatives_consistent() {
        let spec = EnsembleSpec::taylor(
            2.5,
            SlowlyVarying::LogPower(1.5),
            Region::disk(c(0.0, 0.0), 0.8),
            CoefficientLaw::gaussian(),
        )
        .unwrap();
        let e = Ensemble::new(&spec).unwrap();
        let mut s = RngStream::new(1, 2);
        let r = e.draw(&mut s);
        let z = c(0.3, 0.2);
        let h = 1e-5;
        let fd = (r.evaluate(z + h, 0).unwrap() - r.evaluate(z - h, 0).unwrap()) / (2.0 * h);
        let d = r.evaluate(z, 1).unwrap();
        assert!((fd - d).norm() < 1e-7 * d.norm().max(1.0));
        let direct = r.evaluate_direct(z).unwrap();
        assert!((direct - r.evaluate(z, 0).unwrap()).norm() < 1e-10 * direct.norm());
    }
}
