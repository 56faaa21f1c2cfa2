use num_complex::Complex64;

use super::bump::{BumpFunction, Slot};
use super::estimate::Estimate;
use super::harness::{run_trials, TrialPlan};
use crate::ensembles::{CoefficientLaw, Ensemble, EnsembleSpec, Realization};
use crate::error::{Error, Result};
use crate::region::Region;
use crate::rootfind::{self, RootSet, DEFAULT_TOL};

fn prepare(spec: &EnsembleSpec, law: &CoefficientLaw) -> Result<Ensemble> {
    Ensemble::new(&spec.with_law(law.clone()))
}

/// Mean number of real zeros in the closed `window`.
pub fn windowed_count(
    spec: &EnsembleSpec,
    law: &CoefficientLaw,
    window: (f64, f64),
    plan: &TrialPlan,
) -> Result<Estimate> {
    let ens = prepare(spec, law)?;
    let label = format!("count[{}, {}]", window.0, window.1);
    run_trials(plan, &label, |s| {
        let r = ens.draw(s);
        Ok(rootfind::count_real(&r, window)? as f64)
    })
}

/// Mean of `Σ G(ζ)` over the zeros in the support of a univariate bump.
/// Real slots see the real zeros, complex slots every zero in the disk.
pub fn linear_statistic(
    spec: &EnsembleSpec,
    law: &CoefficientLaw,
    g: &BumpFunction,
    plan: &TrialPlan,
) -> Result<Estimate> {
    let support = g.support()?;
    let ens = prepare(spec, law)?;
    run_trials(plan, "linear", |s| {
        let r = ens.draw(s);
        linear_value(&r, g, &support)
    })
}

fn linear_value(r: &Realization, g: &BumpFunction, support: &Region) -> Result<f64> {
    let zeros: Vec<Complex64> = match g.slots()[0] {
        Slot::Real { center, radius } => rootfind::real_zeros(r, (center - radius, center + radius), DEFAULT_TOL)?
            .into_iter()
            .map(|x| Complex64::new(x, 0.0))
            .collect(),
        Slot::Complex { .. } => rootfind::roots_in(r, support, DEFAULT_TOL)?.roots_with_multiplicity(),
    };
    Ok(zeros.iter().map(|z| g.factor(0, *z)).sum())
}

/// `Σ G(ζ_1, …, ζ_{k+l})` over all ordered tuples, repetition allowed.
/// The first `k` slots run over real zeros, the remaining `l` over zeros in
/// the open upper half-plane, each repeated by multiplicity.
pub fn correlation_sum(rs: &RootSet, g: &BumpFunction, k: usize, l: usize) -> Result<f64> {
    if k == 0 || g.k() != k || g.l() != l {
        return Err(Error::ArityMismatch {
            expected: format!("k={}, l={}", g.k(), g.l()),
            found: format!("k={k}, l={l}"),
        });
    }
    let all = rs.roots_with_multiplicity();
    let real: Vec<Complex64> = rs
        .roots
        .iter()
        .zip(&rs.multiplicities)
        .zip(&rs.real_mask)
        .filter(|(_, &m)| m)
        .flat_map(|((z, &m), _)| std::iter::repeat_n(Complex64::new(z.re, 0.0), m as usize))
        .collect();
    let upper: Vec<Complex64> = all.into_iter().filter(|z| z.im > 0.0).collect();
    // per slot, only zeros where the factor is nonzero can contribute
    let pools: Vec<Vec<Complex64>> = (0..k + l)
        .map(|i| {
            let src = if i < k { &real } else { &upper };
            src.iter().copied().filter(|z| g.factor(i, *z) != 0.0).collect()
        })
        .collect();
    if pools.iter().any(Vec::is_empty) {
        return Ok(0.0);
    }
    let mut idx = vec![0usize; k + l];
    let mut tuple: Vec<Complex64> = pools.iter().map(|p| p[0]).collect();
    let mut total = 0.0;
    loop {
        total += g.eval(&tuple)?;
        let mut i = 0;
        loop {
            if i == idx.len() {
                return Ok(total);
            }
            idx[i] += 1;
            if idx[i] < pools[i].len() {
                tuple[i] = pools[i][idx[i]];
                break;
            }
            idx[i] = 0;
            tuple[i] = pools[i][0];
            i += 1;
        }
    }
}

/// Fraction of trials with at least two zeros in the closed disk
/// `B(x, γ)`, counted with multiplicity.
pub fn pair_repulsion_prob(
    spec: &EnsembleSpec,
    law: &CoefficientLaw,
    x: f64,
    gamma: f64,
    plan: &TrialPlan,
) -> Result<Estimate> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidArgument(format!("gamma must be positive, got {gamma}")));
    }
    let ens = prepare(spec, law)?;
    let disk = Region::disk(Complex64::new(x, 0.0), gamma);
    ens.check_point(Complex64::new(x + gamma, 0.0))?;
    ens.check_point(Complex64::new(x - gamma, 0.0))?;
    run_trials(plan, &format!("repulsion[{x}, {gamma}]"), |s| {
        let r = ens.draw(s);
        let rs = rootfind::roots_in(&r, &disk, DEFAULT_TOL)?;
        let inside: u32 =
            rs.roots.iter().zip(&rs.multiplicities).filter(|(z, _)| disk.contains(**z)).map(|(_, &m)| m).sum();
        Ok(if inside >= 2 { 1.0 } else { 0.0 })
    })
}
