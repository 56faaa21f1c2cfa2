//! The `check` subcommand: condition probes and identity checks.

use num_complex::Complex64;
use rand::seq::index::sample;
use rand::Rng;
use rand_distr::StandardNormal;

use super::config::ExperimentConfig;
use crate::conditions::{
    c1_match_report, c2_report, check_c3, green_identity_residual, jensen_zero_bound, parseval_check,
    ConditionProbeConfig, ConditionReport, Measurement, Verdict, GREEN_TOL,
};
use crate::ensembles::{Ensemble, EnsembleSpec, Family};
use crate::error::{Error, Result};
use crate::region::Region;
use crate::rootfind::{self, DEFAULT_TOL};
use crate::statistics::{run_trials, BumpFunction, TrialPlan};

pub const PARSEVAL_TOL: f64 = 1e-8;

/// A random exponential polynomial `Σ e_t cos(f_t x)`: 1 to 8 terms,
/// distinct frequencies below 64, complex gaussian weights.
pub fn random_exponential_polynomial<R: Rng + ?Sized>(rng: &mut R) -> (Vec<Complex64>, Vec<usize>) {
    let m = rng.random_range(1..=8);
    let freqs = sample(rng, 64, m).into_vec();
    let e = (0..m)
        .map(|_| Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal)))
        .collect();
    (e, freqs)
}

fn points_or_origin(cfg: &ExperimentConfig) -> Vec<Complex64> {
    let p = cfg.points();
    if p.is_empty() {
        vec![Complex64::new(0.0, 0.0)]
    } else {
        p
    }
}

pub fn run_check(cfg: &ExperimentConfig, plan: &TrialPlan) -> Result<ConditionReport> {
    let st = &cfg.statistic;
    let name = st.condition.as_deref().ok_or_else(|| Error::Config("statistic.condition is required".into()))?;
    match name {
        "c1" => {
            let b = cfg.law_b()?.ok_or_else(|| Error::Config("c1 needs a [law_b] section".into()))?;
            c1_match_report(&cfg.law.to_law()?, &b, (plan.trials as usize).max(1000))
        }
        "c2" => {
            let spec = cfg.spec()?;
            let mut pc = ConditionProbeConfig::new(points_or_origin(cfg));
            pc.trials = plan.trials;
            pc.alpha1 = st.alpha1.unwrap_or(pc.alpha1);
            pc.c1 = st.c1.unwrap_or(pc.c1);
            pc.validate().map_err(|e| Error::Config(e.to_string()))?;
            c2_report(&spec, &pc)
        }
        "c3" => c3(cfg),
        "jensen" => jensen(cfg, plan),
        "green" => green(cfg, plan),
        "parseval" => parseval(plan),
        other => Err(Error::Config(format!("unknown condition `{other}`"))),
    }
}

fn c3(cfg: &ExperimentConfig) -> Result<ConditionReport> {
    let spec = cfg.spec()?;
    let Family::Trig { c, d, .. } = &spec.family else {
        return Err(Error::Config("c3 applies to the trig family".into()));
    };
    let tau1 = cfg.statistic.tau1.unwrap_or(0.5);
    let frac = cfg.statistic.frac.unwrap_or(0.5);
    let (ok, run) = check_c3(c, d, tau1, frac).map_err(|e| Error::Config(e.to_string()))?;
    let n = c.len() - 1;
    let len = run.map_or(0, |(a, b)| b + 1 - a);
    let mut notes = vec![format!("tau1 = {tau1}, frac = {frac}")];
    if let Some((a, b)) = run {
        notes.push(format!("longest run: indices {a}..={b}"));
    }
    Ok(ConditionReport {
        condition: "C3".into(),
        subject: spec.label(),
        measurements: vec![Measurement::new("longest run", None, len as f64, Some(frac * n as f64))],
        verdict: if ok { Verdict::Consistent } else { Verdict::Inconsistent },
        notes,
    })
}

fn jensen(cfg: &ExperimentConfig, plan: &TrialPlan) -> Result<ConditionReport> {
    let spec = cfg.spec()?;
    let inner = cfg.statistic.radius.unwrap_or(0.5);
    let outer = cfg.statistic.outer_radius.unwrap_or(2.0 * inner);
    if !(inner > 0.0 && outer > inner) {
        return Err(Error::Config(format!("need 0 < radius < outer_radius, got {inner}, {outer}")));
    }
    let points = points_or_origin(cfg);
    let ens = Ensemble::new(&spec)?;
    for z in &points {
        ens.check_point(Complex64::new(z.norm() + outer, 0.0))?;
    }
    let est = run_trials(plan, "jensen-violations", |s| {
        let r = ens.draw(s);
        let mut bad = 0;
        for &z in &points {
            let bound = jensen_zero_bound(&r, z, inner, outer)?;
            let count = zeros_in_open_disk(&r, z, inner)?;
            if count as f64 > bound + 1e-9 {
                bad += 1;
            }
        }
        Ok(bad as f64)
    })?;
    let total = est.sum();
    Ok(ConditionReport {
        condition: "jensen".into(),
        subject: spec.label(),
        measurements: vec![Measurement::new("violations", None, total, None)],
        verdict: if total == 0.0 { Verdict::Consistent } else { Verdict::Inconsistent },
        notes: vec![format!("{} realizations, {} points, r = {inner}, R = {outer}", est.trials, points.len())],
    })
}

/// Zeros in `|w - z| < rho`, counted with multiplicity.
pub fn zeros_in_open_disk(r: &crate::ensembles::Realization, z: Complex64, rho: f64) -> Result<u32> {
    let rs = rootfind::roots_in(r, &Region::disk(z, rho), DEFAULT_TOL)?;
    Ok(rs.roots.iter().zip(&rs.multiplicities).filter(|(w, _)| (**w - z).norm() < rho).map(|(_, &m)| m).sum())
}

fn green(cfg: &ExperimentConfig, plan: &TrialPlan) -> Result<ConditionReport> {
    let spec: EnsembleSpec = cfg.spec()?;
    let (center, radius) = cfg.complex_bumps().first().copied().unwrap_or((Complex64::new(1.0, 0.0), 0.5));
    let g = BumpFunction::complex(center, radius).map_err(|e| Error::Config(e.to_string()))?;
    let grid = cfg.statistic.grid.unwrap_or(512);
    let ens = Ensemble::new(&spec)?;
    let est = run_trials(plan, "green-residual", |s| green_identity_residual(&ens.draw(s), &g, grid))?;
    Ok(ConditionReport {
        condition: "green".into(),
        subject: spec.label(),
        measurements: vec![
            Measurement::new("mean residual", Some(center), est.mean(), Some(GREEN_TOL)),
            Measurement::new("max residual", Some(center), est.max, Some(GREEN_TOL)),
        ],
        verdict: if est.max < GREEN_TOL { Verdict::Consistent } else { Verdict::Inconsistent },
        notes: vec![format!("grid {grid}, bump radius {radius}, {} realizations, {} failed", est.trials, est.failed)],
    })
}

fn parseval(plan: &TrialPlan) -> Result<ConditionReport> {
    let est = run_trials(plan, "parseval", |s| {
        let (e, f) = random_exponential_polynomial(s);
        let (q, a) = parseval_check(&e, &f)?;
        Ok((q - a).abs() / a)
    })?;
    Ok(ConditionReport {
        condition: "parseval".into(),
        subject: "random exponential polynomials".into(),
        measurements: vec![Measurement::new("max relative error", None, est.max, Some(PARSEVAL_TOL))],
        verdict: if est.max <= PARSEVAL_TOL { Verdict::Consistent } else { Verdict::Inconsistent },
        notes: vec![format!("{} cases", est.trials)],
    })
}
