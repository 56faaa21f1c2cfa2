//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::f64::consts::{PI, TAU};
use std::time::Instant;

use rootlab::baselines::{
    build_model, elliptic_expected, kac_gauss_expected, kac_rice_expected_count, trig_closed_form,
    trig_derivative_expected,
};
use rootlab::cli::{random_exponential_polynomial, run, zeros_in_open_disk, ExperimentConfig, Task};
use rootlab::conditions::{green_identity_residual, jensen_zero_bound, parseval_check};
use rootlab::ensembles::{CoefficientLaw, Ensemble, EnsembleSpec, Family, Realization, SlowlyVarying};
use rootlab::rootfind::{self, count_in_region, DEFAULT_TOL};
use rootlab::statistics::{
    pair_repulsion_prob, pooled_z, run_trials, run_trials_multi, windowed_count, BumpFunction, Estimate, TrialPlan,
};
use rootlab::{Complex64, Error, Region, Result, RngStream};

const FULL: (f64, f64) = (f64::NEG_INFINITY, f64::INFINITY);
const QUAD_TOL: f64 = 1e-10;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn plan(trials: u64, seed: u64) -> TrialPlan {
    TrialPlan::new(trials, seed)
}

fn show(e: &Estimate) -> String {
    format!("{:.4} ± {:.4}", e.mean(), e.stderr())
}

fn within(e: &Estimate, target: f64, k: f64) -> bool {
    (e.mean() - target).abs() <= k * e.stderr()
}

type Outcome = Result<(bool, String)>;
type Criterion = (&'static str, fn() -> Outcome);

fn kac_gaussian() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (n, seed) in [(100, 101), (1000, 102)] {
        let spec = EnsembleSpec::kac(n, CoefficientLaw::gaussian())?;
        let e = windowed_count(&spec, &spec.law, FULL, &plan(5000, seed))?;
        let want = kac_gauss_expected(n, QUAD_TOL)?;
        ok &= within(&e, want, 3.0);
        notes.push(format!("n={n}: {} vs {want:.4}", show(&e)));
    }
    Ok((ok, notes.join("; ")))
}

fn kac_universality() -> Outcome {
    let spec = EnsembleSpec::kac(1000, CoefficientLaw::gaussian())?;
    let g = windowed_count(&spec, &spec.law, FULL, &plan(8000, 201))?;
    let r = windowed_count(&spec, &CoefficientLaw::rademacher(), FULL, &plan(8000, 202))?;
    let diff = r.mean() - g.mean();
    let (pooled, _) = pooled_z(diff, r.stderr(), g.stderr());
    let ok = diff.abs() <= 1.0 && pooled < 0.08;
    Ok((
        ok,
        format!("rademacher {} gaussian {}: |diff| {:.4}, pooled stderr {pooled:.4}", show(&r), show(&g), diff.abs()),
    ))
}

fn trig_closed() -> Outcome {
    let n = 200;
    let ones = vec![1.0; n + 1];
    let want = trig_closed_form(&ones, 0.0, 0.0, TAU)?;
    let spec = EnsembleSpec::trig_flat(n, CoefficientLaw::gaussian())?;
    let g = windowed_count(&spec, &spec.law, (0.0, TAU), &plan(1000, 301))?;
    let r = windowed_count(&spec, &CoefficientLaw::rademacher(), (0.0, TAU), &plan(1000, 302))?;
    let level = EnsembleSpec::trig(ones.clone(), vec![1.0; n], 1.0, CoefficientLaw::gaussian())?;
    let u = windowed_count(&level, &level.law, (0.0, TAU), &plan(1000, 303))?;
    let damp = (-0.5f64).exp();
    let (_, z) = pooled_z(u.mean() - damp * g.mean(), u.stderr(), damp * g.stderr());
    let ok = within(&g, want, 3.0) && within(&r, want, 3.0) && z.abs() <= 3.0;
    Ok((
        ok,
        format!(
            "target {want:.4}: gaussian {}, rademacher {}; u=1 {} vs e^-1/2 x u=0 z {z:.2}",
            show(&g),
            show(&r),
            show(&u)
        ),
    ))
}

fn trig_derivative() -> Outcome {
    let n = 200;
    let family = Family::Trig { c: vec![1.0; n + 1], d: vec![1.0; n], level: 0.0, derivative: 1 };
    let spec = EnsembleSpec::with_defaults(family, CoefficientLaw::gaussian())?;
    let e = windowed_count(&spec, &spec.law, (0.0, TAU), &plan(1000, 401))?;
    let want = trig_derivative_expected(1, n, 0.0, TAU);
    let exact = kac_rice_expected_count(&build_model(&spec)?, 0.0, TAU, QUAD_TOL)?;
    let z = (e.mean() - want) / e.stderr();
    Ok((z.abs() <= 3.0, format!("{} vs main term {want:.4} (z {z:.2}); Kac-Rice at this n {exact:.4}", show(&e))))
}

fn elliptic() -> Outcome {
    let n = 400;
    let want = elliptic_expected(n);
    let spec = EnsembleSpec::elliptic(n, CoefficientLaw::gaussian())?;
    let mut ok = true;
    let mut notes = Vec::new();
    for (law, seed) in [(CoefficientLaw::gaussian(), 501), (CoefficientLaw::rademacher(), 502)] {
        let e = windowed_count(&spec, &law, FULL, &plan(4000, seed))?;
        ok &= within(&e, want, 3.0) && e.stderr() <= 0.3;
        notes.push(format!("{} {}", law.kind.name(), show(&e)));
    }
    Ok((ok, format!("target {want}: {}", notes.join(", "))))
}

fn weyl_flat() -> Outcome {
    let disk = Region::disk(c(10.0, 0.0), 1.0);
    let spec = EnsembleSpec::weyl(Region::disk(c(0.0, 0.0), 11.5), CoefficientLaw::gaussian_complex())?
        .with_truncation_tol(1e-12)?;
    let count = |law: CoefficientLaw, seed| -> Result<Estimate> {
        let ens = Ensemble::new(&spec.with_law(law))?;
        run_trials(&plan(4000, seed), "weyl disk", |s| {
            let r = ens.draw(s);
            Ok(count_in_region(&rootfind::roots_in(&r, &disk, DEFAULT_TOL)?, &disk)? as f64)
        })
    };
    let g = count(CoefficientLaw::gaussian_complex(), 601)?;
    let r = count(CoefficientLaw::rademacher_complex(), 602)?;
    let (_, z) = pooled_z(r.mean() - g.mean(), r.stderr(), g.stderr());
    let ok = within(&g, 1.0, 3.0) && z.abs() <= 3.0;
    Ok((ok, format!("gaussian {}, rademacher-complex {} (pooled z {z:.2})", show(&g), show(&r))))
}

fn taylor_slope() -> Outcome {
    let ks = [4, 5, 6, 7, 8, 9];
    let xs: Vec<f64> = ks.iter().map(|&k| k as f64 * std::f64::consts::LN_2).collect();
    let xbar = xs.iter().sum::<f64>() / xs.len() as f64;
    let sxx: f64 = xs.iter().map(|x| (x - xbar).powi(2)).sum();
    let domain = Region::disk(c(0.0, 0.0), 1.0 - 2f64.powi(-10));
    let spec = EnsembleSpec::taylor(4.0, SlowlyVarying::Constant(1.0), domain, CoefficientLaw::gaussian())?;
    let ens = Ensemble::new(&spec)?;
    let outer = 1.0 - 2f64.powi(-9);
    // the per-trial slope averages to the slope of the mean counts
    let est = run_trials_multi(&plan(2000, 701), &["slope"], |s| {
        let r = ens.draw(s);
        let zeros = rootfind::real_zeros(&r, (0.0, outer), DEFAULT_TOL)?;
        let counts: Vec<f64> =
            ks.iter().map(|&k| zeros.iter().filter(|&&x| x <= 1.0 - 2f64.powi(-k)).count() as f64).collect();
        let ybar = counts.iter().sum::<f64>() / counts.len() as f64;
        Ok(vec![xs.iter().zip(&counts).map(|(x, y)| (x - xbar) * (y - ybar)).sum::<f64>() / sxx])
    })?;
    let slope = &est[0];
    let want = 1.0 / PI;
    let rel = (slope.mean() - want).abs() / want;
    Ok((rel <= 0.15, format!("slope {} vs 1/pi {want:.4}: relative error {:.3}", show(slope), rel)))
}

fn repulsion() -> Outcome {
    let n = 200;
    let spec = EnsembleSpec::trig_flat(n, CoefficientLaw::gaussian())?;
    let wide = pair_repulsion_prob(&spec, &spec.law, PI, 4.0 / n as f64, &plan(4000, 801))?;
    let narrow = pair_repulsion_prob(&spec, &spec.law, PI, 2.0 / n as f64, &plan(4000, 802))?;
    let (p1, p2) = (wide.mean(), narrow.mean());
    if p2 <= 0.0 {
        return Ok((false, format!("no pairs at gamma = 2/n (wide {})", show(&wide))));
    }
    let ratio = p1 / p2;
    let se = ratio * ((wide.stderr() / p1).powi(2) + (narrow.stderr() / p2).powi(2)).sqrt();
    let lower = ratio - 1.645 * se;
    Ok((
        lower >= 2.0,
        format!(
            "P(4/n) {} P(2/n) {}: ratio {ratio:.3}, one-sided 95% lower bound {lower:.3}",
            show(&wide),
            show(&narrow)
        ),
    ))
}

fn jensen() -> Outcome {
    let g = CoefficientLaw::gaussian;
    let specs = [
        EnsembleSpec::kac(40, g())?,
        EnsembleSpec::elliptic(30, CoefficientLaw::rademacher())?,
        EnsembleSpec::trig_flat(20, g())?,
        EnsembleSpec::weyl(Region::disk(c(0.0, 0.0), 5.0), CoefficientLaw::gaussian_complex())?,
        EnsembleSpec::taylor(2.0, SlowlyVarying::Constant(1.0), Region::disk(c(0.0, 0.0), 0.9), g())?,
    ];
    let ensembles = specs.iter().map(Ensemble::new).collect::<Result<Vec<_>>>()?;
    let mut violations = 0;
    let mut zeros = 0;
    for i in 0..1000u64 {
        let ens = &ensembles[i as usize % ensembles.len()];
        let r = ens.draw(&mut RngStream::new(901, i));
        let z = c(0.3 * ((i % 7) as f64 / 3.0 - 1.0), 0.1 * ((i % 3) as f64 - 1.0));
        let (inner, outer) = (0.2, 0.4);
        let bound = jensen_zero_bound(&r, z, inner, outer)?;
        let count = zeros_in_open_disk(&r, z, inner)?;
        zeros += count;
        if count as f64 > bound + 1e-9 {
            violations += 1;
        }
    }
    Ok((violations == 0, format!("{violations} violations over 1000 realizations ({zeros} zeros counted)")))
}

fn green_residual(r: &Realization, g: &BumpFunction, grid: usize) -> Result<Option<f64>> {
    match green_identity_residual(r, g, grid) {
        Ok(v) => Ok(Some(v)),
        Err(Error::GridTooCoarse(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn green() -> Outcome {
    let spec = EnsembleSpec::trig_flat(20, CoefficientLaw::gaussian())?;
    let ens = Ensemble::new(&spec)?;
    let g = BumpFunction::complex(c(1.0, 0.0), 0.5)?;
    let grids = [128, 256, 512];
    let (mut mean, mut max) = ([0.0f64; 3], [0.0f64; 3]);
    let (mut above, mut unresolved, mut local_up) = (0, 0, 0);
    for i in 0..100 {
        let r = ens.draw(&mut RngStream::new(1001, i));
        let mut v = [f64::INFINITY; 3];
        for (slot, &grid) in v.iter_mut().zip(&grids) {
            match green_residual(&r, &g, grid)? {
                Some(x) => *slot = x,
                None => unresolved += 1,
            }
        }
        if v[2] >= 1e-2 {
            above += 1;
        }
        if v[2] > v[0] {
            local_up += 1;
        }
        for k in 0..3 {
            mean[k] += v[k] / 100.0;
            max[k] = max[k].max(v[k]);
        }
    }
    // the log singularities make single realizations jitter near the floor,
    // so refinement is judged on the mean and the max over realizations
    let monotone = mean.windows(2).all(|w| w[1] < w[0]) && max.windows(2).all(|w| w[1] < w[0]);
    Ok((
        above == 0 && monotone,
        format!(
            "mean {:.2e} > {:.2e} > {:.2e}, max {:.2e} > {:.2e} > {:.2e} over grids 128/256/512; {above} above 1e-2; \
             {unresolved} unresolved; {local_up} single realizations coarser-better",
            mean[0], mean[1], mean[2], max[0], max[1], max[2]
        ),
    ))
}

fn parseval() -> Outcome {
    let mut rng = RngStream::new(1101, 0);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let (e, f) = random_exponential_polynomial(&mut rng);
        let (q, a) = parseval_check(&e, &f)?;
        worst = worst.max((q - a).abs() / a);
    }
    Ok((worst <= 1e-8, format!("max relative error {worst:.2e} over 10 cases")))
}

fn determinism() -> Outcome {
    let configs = [
        (Task::Count, "[ensemble]\nfamily = \"kac\"\nn = 200\n[law]\nkind = \"rademacher\"\n[statistic]\nwindow = [-1.0, 1.0]\n[run]\ntrials = 400\nseed = 1201\n"),
        (Task::Count, "[ensemble]\nfamily = \"trig\"\nn = 50\n[statistic]\nwindow = [0.0, 3.0]\n[run]\ntrials = 300\nseed = 1202\n"),
        (Task::Linear, "[ensemble]\nfamily = \"weyl\"\n[law]\nkind = \"gaussian-complex\"\n[statistic]\nkind = \"linear\"\ncomplex_bumps = [[1.0, 1.0, 1.0]]\n[run]\ntrials = 300\nseed = 1203\n"),
        (Task::Compare, "[ensemble]\nfamily = \"elliptic\"\nn = 60\n[law]\nkind = \"gaussian\"\n[law_b]\nkind = \"uniform\"\n[statistic]\nwindow = [-2.0, 2.0]\n[run]\ntrials = 300\nseed = 1204\n"),
        (Task::Repulsion, "[ensemble]\nfamily = \"trig\"\nn = 40\n[statistic]\nkind = \"repulsion\"\nx = 2.0\nradius = 0.1\n[run]\ntrials = 300\nseed = 1205\n"),
    ];
    let mut same = 0;
    for (task, text) in configs {
        let mut cfg = ExperimentConfig::parse(text)?;
        cfg.run.lanes = Some(1);
        let one = run(task, &cfg)?;
        cfg.run.lanes = Some(8);
        if run(task, &cfg)? == one {
            same += 1;
        }
    }
    Ok((same == configs.len(), format!("{same}/{} reports byte-identical between 1 and 8 lanes", configs.len())))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("kac gaussian mean count", kac_gaussian),
        ("kac universality", kac_universality),
        ("trig closed form", trig_closed),
        ("trig derivative constant", trig_derivative),
        ("elliptic sqrt(n)", elliptic),
        ("flat intensity", weyl_flat),
        ("taylor slope", taylor_slope),
        ("repulsion direction", repulsion),
        ("jensen dominance", jensen),
        ("green identity", green),
        ("parseval", parseval),
        ("lane determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (ok, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
        failed += usize::from(!ok);
        println!(
            "{} {:>2} {name}: {detail} [{:.1}s]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            t.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
