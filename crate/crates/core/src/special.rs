//! Normal density, error function, log-gamma and an exactly rounded sum.

use std::f64::consts::PI;

pub const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

pub fn normal_pdf(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// `1/sinh(x)^2 - 1/x^2`, accurate near zero.
pub fn csch2_minus_inv2(x: f64) -> f64 {
    let x = x.abs();
    if x < 0.5 {
        // Laurent tail of csch^2: -1/3 + x^2/15 - 2x^4/189 + x^6/675 - 2x^8/10395 + ...
        let y = x * x;
        const C: [f64; 9] = [
            -1.0 / 3.0,
            1.0 / 15.0,
            -2.0 / 189.0,
            1.0 / 675.0,
            -2.0 / 10395.0,
            1382.0 / 58046625.0,
            -4.0 / 1403325.0,
            3617.0 / 10854718875.0,
            -87734.0 / 2292899734125.0,
        ];
        let mut acc = 0.0;
        for c in C.iter().rev() {
            acc = acc * y + c;
        }
        acc
    } else {
        let s = x.sinh();
        1.0 / (s * s) - 1.0 / (x * x)
    }
}

pub fn csch2(x: f64) -> f64 {
    if x.abs() > 350.0 {
        return 4.0 * (-2.0 * x.abs()).exp();
    }
    let s = x.sinh();
    1.0 / (s * s)
}

pub fn circle_point(k: usize, n: usize) -> num_complex::Complex64 {
    let th = 2.0 * PI * k as f64 / n as f64;
    num_complex::Complex64::new(th.cos(), th.sin())
}

/// Order-independent floating-point accumulator.
///
/// Keeps the non-overlapping partials of Shewchuk's algorithm, so the
/// represented value is the exact sum of every input and `value()` is its
/// correctly rounded double. Two accumulators fed the same multiset of
/// numbers in any order and any grouping report the same `value()`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExactSum {
    partials: Vec<f64>,
}

impl ExactSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, mut x: f64) {
        let mut i = 0;
        for j in 0..self.partials.len() {
            let mut y = self.partials[j];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                self.partials[i] = lo;
                i += 1;
            }
            x = hi;
        }
        self.partials.truncate(i);
        self.partials.push(x);
    }

    pub fn merge(&mut self, other: &ExactSum) {
        for &p in &other.partials {
            self.add(p);
        }
    }

    pub fn value(&self) -> f64 {
        let p = &self.partials;
        let Some(mut n) = p.len().checked_sub(1) else {
            return 0.0;
        };
        let mut hi = p[n];
        let mut lo = 0.0;
        while n > 0 {
            n -= 1;
            let x = hi;
            let y = p[n];
            hi = x + y;
            let yr = hi - x;
            lo = y - yr;
            if lo != 0.0 {
                break;
            }
        }
        // round-half-even correction, as in fsum
        if n > 0 && ((lo < 0.0 && p[n - 1] < 0.0) || (lo > 0.0 && p[n - 1] > 0.0)) {
            let y = lo * 2.0;
            let x = hi + y;
            if y == x - hi {
                hi = x;
            }
        }
        hi
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_sum_cancels() {
        let mut s = ExactSum::new();
        for x in [1e100, 1.0, -1e100, 1e-100] {
            s.add(x);
        }
        assert_eq!(s.value(), 1.0);
        let mut t = ExactSum::new();
        for _ in 0..10 {
            t.add(0.1);
        }
        assert_eq!(t.value(), 1.0);
    }

    #[test]
    fn exact_sum_merge_is_order_free() {
        let xs: Vec<f64> = (0..500).map(|i| ((i * 7919) % 1013) as f64 * 1.37e-3 - 0.4).collect();
        let mut whole = ExactSum::new();
        xs.iter().for_each(|&x| whole.add(x));
        let mut a = ExactSum::new();
        let mut b = ExactSum::new();
        xs[..123].iter().rev().for_each(|&x| a.add(x));
        xs[123..].iter().for_each(|&x| b.add(x));
        b.merge(&a);
        assert_eq!(whole.value().to_bits(), b.value().to_bits());
    }

    #[test]
    fn csch_series_matches_direct() {
        for &x in &[0.3, 0.45, 0.499] {
            let s = f64::sinh(x);
            let direct = 1.0 / (s * s) - 1.0 / (x * x);
            assert!((csch2_minus_inv2(x) - direct).abs() < 1e-12);
        }
        assert!((csch2_minus_inv2(0.0) + 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn normal_cdf_symmetry() {
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-16);
        assert!((normal_cdf(1.3) + normal_cdf(-1.3) - 1.0).abs() < 1e-15);
        assert!((normal_pdf(0.0) - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-16);
    }
}
