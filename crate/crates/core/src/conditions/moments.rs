use num_complex::Complex64;

use super::report::{ConditionReport, Measurement, Verdict};
use crate::ensembles::CoefficientLaw;
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::statistics::{pooled_z, Estimate};

/// Fixed seed for the moment samples, so reports are reproducible.
const MOMENT_SEED: u64 = 0x6d6f_6d65_6e74_7331;
const MAX_Z: f64 = 5.0;

fn moments(z: Complex64) -> [f64; 5] {
    [z.re, z.im, z.re * z.re, z.re * z.im, z.im * z.im]
}

const MOMENT_NAMES: [&str; 5] = ["E Re", "E Im", "E Re^2", "E Re Im", "E Im^2"];

fn sample_moments(law: &CoefficientLaw, index: usize, n: usize, stream: u64) -> Vec<Estimate> {
    let mut s = RngStream::new(MOMENT_SEED, stream);
    let mut est: Vec<Estimate> = MOMENT_NAMES.iter().map(|l| Estimate::new(*l, MOMENT_SEED)).collect();
    for _ in 0..n {
        let m = moments(law.sample(&mut s, index));
        for (e, v) in est.iter_mut().zip(m) {
            e.push(v);
        }
    }
    est
}

/// Whether two laws match to second order beyond `N₀ = max(N₀_A, N₀_B)` and
/// have means within `τ = min(τ_A, τ_B)` below it.
///
/// Above `N₀` the laws differ only at shifted indices, so `N₀` itself and
/// every shifted index are sampled; each mixed moment `E Re^a Im^b`,
/// `a + b ≤ 2`, must agree within 5 pooled standard errors.
pub fn c1_match_report(law_a: &CoefficientLaw, law_b: &CoefficientLaw, sample_n: usize) -> Result<ConditionReport> {
    if sample_n < 1000 {
        return Err(Error::InvalidArgument(format!("sample_n must be at least 1000, got {sample_n}")));
    }
    let n0 = law_a.exceptional_count.max(law_b.exceptional_count);
    let tau = law_a.moment_bound.min(law_b.moment_bound);
    let mut ms = Vec::new();
    let mut ok = true;
    let mut indices = vec![n0];
    indices.extend(law_a.mean_shifts.keys().chain(law_b.mean_shifts.keys()).copied().filter(|&i| i >= n0));
    indices.sort_unstable();
    indices.dedup();
    for (k, &i) in indices.iter().enumerate() {
        let a = sample_moments(law_a, i, sample_n, 2 * k as u64);
        let b = sample_moments(law_b, i, sample_n, 2 * k as u64 + 1);
        for ((ea, eb), name) in a.iter().zip(&b).zip(MOMENT_NAMES) {
            let (_, z) = pooled_z(ea.mean() - eb.mean(), ea.stderr(), eb.stderr());
            ok &= z.abs() <= MAX_Z;
            ms.push(Measurement::new(format!("{name} z-score at index {i}"), None, z, Some(MAX_Z)));
        }
    }
    let low: Vec<usize> =
        law_a.mean_shifts.keys().chain(law_b.mean_shifts.keys()).copied().filter(|&i| i < n0).collect();
    for i in low {
        let d = (law_a.mean(i) - law_b.mean(i)).norm();
        ok &= d <= tau;
        ms.push(Measurement::new(format!("|mean difference| at index {i}"), None, d, Some(tau)));
    }
    Ok(ConditionReport {
        condition: "C1".into(),
        subject: format!("{law_a} vs {law_b}"),
        measurements: ms,
        verdict: if ok { Verdict::Consistent } else { Verdict::Inconsistent },
        notes: vec![format!("N0 = {n0}, tau = {tau}, samples = {sample_n}")],
    })
}

/// Longest run of consecutive indices `i ∈ {1, …, n}` with
/// `|c_i| ≥ τ₁ · max_j max(|c_j|, |d_j|)`; the spread condition holds when
/// its length reaches `frac · n`. Returns the verdict and the run as an
/// inclusive index range.
pub fn check_c3(c: &[f64], d: &[f64], tau1: f64, frac: f64) -> Result<(bool, Option<(usize, usize)>)> {
    if c.len() < 2 {
        return Err(Error::InvalidArgument("need c_0..c_n with n >= 1".into()));
    }
    if !(tau1 > 0.0 && tau1 <= 1.0 && frac > 0.0 && frac <= 1.0) {
        return Err(Error::InvalidArgument("tau1 and frac must lie in (0, 1]".into()));
    }
    let n = c.len() - 1;
    let max = c.iter().chain(d).map(|x| x.abs()).fold(0.0, f64::max);
    if max == 0.0 {
        return Ok((false, None));
    }
    let mut best: Option<(usize, usize)> = None;
    let mut start = None;
    for i in 1..=n + 1 {
        let good = i <= n && c[i].abs() >= tau1 * max;
        match (good, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                if best.is_none_or(|(a, b)| i - s > b + 1 - a) {
                    best = Some((s, i - 1));
                }
                start = None;
            }
            _ => {}
        }
    }
    let len = best.map_or(0, |(a, b)| b + 1 - a);
    Ok((len as f64 >= frac * n as f64, best))
}
