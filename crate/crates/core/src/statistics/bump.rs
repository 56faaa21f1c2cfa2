use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::region::Region;

/// One factor of a product test function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Slot {
    Real { center: f64, radius: f64 },
    Complex { center: Complex64, radius: f64 },
}

impl Slot {
    fn radius(&self) -> f64 {
        match *self {
            Slot::Real { radius, .. } | Slot::Complex { radius, .. } => radius,
        }
    }

    fn distance(&self, z: Complex64) -> f64 {
        match *self {
            Slot::Real { center, radius } => (z.re - center).abs() / radius,
            Slot::Complex { center, radius } => (z - center).norm() / radius,
        }
    }

    pub fn support(&self) -> Region {
        match *self {
            Slot::Real { center, radius } => Region::Segment { a: center - radius, b: center + radius },
            Slot::Complex { center, radius } => Region::disk(center, radius),
        }
    }
}

/// `ψ(s) = exp(1 - 1/(1 - s²))` for `|s| < 1`, zero outside.
pub fn bump_profile(s: f64) -> f64 {
    let q = 1.0 - s * s;
    if q <= 0.0 {
        0.0
    } else {
        (1.0 - 1.0 / q).exp()
    }
}

/// Taylor coefficients of `ψ` at `s0` up to `order`, by series arithmetic.
fn profile_taylor(s0: f64, order: usize) -> Vec<f64> {
    let q = [1.0 - s0 * s0, -2.0 * s0, -1.0];
    let mut inv = vec![0.0; order + 1];
    inv[0] = 1.0 / q[0];
    for k in 1..=order {
        let mut acc = 0.0;
        for j in 1..=k.min(2) {
            acc += q[j] * inv[k - j];
        }
        inv[k] = -acc / q[0];
    }
    let g: Vec<f64> = inv.iter().enumerate().map(|(k, v)| if k == 0 { 1.0 - v } else { -v }).collect();
    let mut e = vec![0.0; order + 1];
    e[0] = g[0].exp();
    for k in 1..=order {
        let mut acc = 0.0;
        for j in 1..=k {
            acc += j as f64 * g[j] * e[k - j];
        }
        e[k] = acc / k as f64;
    }
    e
}

/// `sup_s |ψ^{(a)}(s)|` for `a = 0..=order`, sampled on a grid.
fn profile_derivative_sups(order: usize) -> Vec<f64> {
    let mut sups = vec![0.0f64; order + 1];
    let n = 4000;
    for i in 1..n {
        let s = -1.0 + 2.0 * i as f64 / n as f64;
        let e = profile_taylor(s, order);
        let mut fact = 1.0;
        for (a, c) in e.iter().enumerate() {
            if a > 0 {
                fact *= a as f64;
            }
            let v = (c * fact).abs();
            if v.is_finite() {
                sups[a] = sups[a].max(v);
            }
        }
    }
    sups
}

/// Product of smooth bumps, `k` real factors followed by `l` complex ones.
#[derive(Clone, Debug, PartialEq)]
pub struct BumpFunction {
    slots: Vec<Slot>,
    k: usize,
    sups: Vec<f64>,
}

impl BumpFunction {
    pub fn new(real: &[(f64, f64)], complex: &[(Complex64, f64)]) -> Result<Self> {
        let mut slots = Vec::with_capacity(real.len() + complex.len());
        for &(center, radius) in real {
            slots.push(Slot::Real { center, radius });
        }
        for &(center, radius) in complex {
            slots.push(Slot::Complex { center, radius });
        }
        if slots.is_empty() {
            return Err(Error::InvalidArgument("a bump needs at least one factor".into()));
        }
        for s in &slots {
            let r = s.radius();
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::InvalidArgument(format!("bump radius must be positive, got {r}")));
            }
        }
        let order = 2 * slots.len() + 4;
        let profile = profile_derivative_sups(order);
        let rmin = slots.iter().map(Slot::radius).fold(f64::INFINITY, f64::min);
        let sups = profile.iter().enumerate().map(|(a, s)| s / rmin.powi(a as i32)).collect();
        Ok(Self { slots, k: real.len(), sups })
    }

    pub fn real(center: f64, radius: f64) -> Result<Self> {
        Self::new(&[(center, radius)], &[])
    }

    pub fn complex(center: Complex64, radius: f64) -> Result<Self> {
        Self::new(&[], &[(center, radius)])
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.slots.len() - self.k
    }

    pub fn arity(&self) -> usize {
        self.slots.len()
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    /// Sampled `sup |∂^a G|` along a coordinate direction, `a = 0..=2(k+l)+4`.
    pub fn derivative_sups(&self) -> &[f64] {
        &self.sups
    }

    /// The `i`-th factor at `z`.
    pub fn factor(&self, i: usize, z: Complex64) -> f64 {
        bump_profile(self.slots[i].distance(z))
    }

    pub fn eval(&self, points: &[Complex64]) -> Result<f64> {
        if points.len() != self.slots.len() {
            return Err(Error::ArityMismatch {
                expected: format!("{} points", self.slots.len()),
                found: format!("{} points", points.len()),
            });
        }
        let mut v = 1.0;
        for (i, z) in points.iter().enumerate() {
            v *= self.factor(i, *z);
            if v == 0.0 {
                break;
            }
        }
        Ok(v)
    }

    /// Support of a univariate bump.
    pub fn support(&self) -> Result<Region> {
        self.univariate()?;
        Ok(self.slots[0].support())
    }

    fn univariate(&self) -> Result<Slot> {
        if self.slots.len() != 1 {
            return Err(Error::ArityMismatch { expected: "1 factor".into(), found: format!("{}", self.slots.len()) });
        }
        Ok(self.slots[0])
    }

    /// Planar Laplacian of a univariate complex bump.
    pub fn laplacian(&self, z: Complex64) -> Result<f64> {
        let Slot::Complex { center, radius } = self.univariate()? else {
            return Err(Error::InvalidArgument("laplacian needs a complex bump".into()));
        };
        let s = (z - center).norm() / radius;
        let q = 1.0 - s * s;
        if q <= 0.0 {
            return Ok(0.0);
        }
        let b = (1.0 - 1.0 / q).exp();
        let s2 = s * s;
        Ok(b / (radius * radius) * (-4.0 / (q * q) - 8.0 * s2 / (q * q * q) + 4.0 * s2 / (q * q * q * q)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_at_center_zero_outside() {
        let g = BumpFunction::new(&[(0.5, 0.1)], &[(Complex64::new(1.0, 1.0), 0.2)]).unwrap();
        assert_eq!(g.eval(&[Complex64::new(0.5, 0.0), Complex64::new(1.0, 1.0)]).unwrap(), 1.0);
        assert_eq!(g.eval(&[Complex64::new(0.61, 0.0), Complex64::new(1.0, 1.0)]).unwrap(), 0.0);
        assert!(matches!(g.eval(&[Complex64::new(0.5, 0.0)]), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn taylor_mode_matches_finite_differences() {
        let s0 = 0.37;
        let e = profile_taylor(s0, 3);
        let h = 1e-4;
        let d1 = (bump_profile(s0 + h) - bump_profile(s0 - h)) / (2.0 * h);
        let d2 = (bump_profile(s0 + h) - 2.0 * bump_profile(s0) + bump_profile(s0 - h)) / (h * h);
        assert!((e[0] - bump_profile(s0)).abs() < 1e-15);
        assert!((e[1] - d1).abs() < 1e-7);
        assert!((2.0 * e[2] - d2).abs() < 1e-5);
    }

    #[test]
    fn laplacian_matches_finite_differences() {
        let c = Complex64::new(0.3, -0.2);
        let g = BumpFunction::complex(c, 0.7).unwrap();
        let h = 1e-4;
        for z in [Complex64::new(0.5, 0.1), Complex64::new(0.0, -0.5), c] {
            let f = |w: Complex64| g.eval(&[w]).unwrap();
            let fd = (f(z + h) + f(z - h) + f(z + Complex64::new(0.0, h)) + f(z - Complex64::new(0.0, h)) - 4.0 * f(z))
                / (h * h);
            let an = g.laplacian(z).unwrap();
            assert!((fd - an).abs() < 1e-5 * an.abs().max(1.0), "{fd} vs {an}");
        }
    }

    #[test]
    fn sups_recorded() {
        let g = BumpFunction::real(0.0, 0.5).unwrap();
        let s = g.derivative_sups();
        assert_eq!(s.len(), 7);
        assert!((s[0] - 1.0).abs() < 1e-12);
        assert!(s.iter().all(|v| v.is_finite() && *v > 0.0));
    }
}
