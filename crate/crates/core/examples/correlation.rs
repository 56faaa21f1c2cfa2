//! Linear statistics and two-point correlation sums of real zeros,
//! against the Kac–Rice density of the gaussian model.

use rootlab::baselines::build_model;
use rootlab::ensembles::{CoefficientLaw, Ensemble, EnsembleSpec};
use rootlab::rootfind::{roots_trig, DEFAULT_TOL};
use rootlab::statistics::{correlation_sum, linear_statistic, run_trials, BumpFunction, TrialPlan};

fn main() -> rootlab::Result<()> {
    let spec = EnsembleSpec::trig_flat(40, CoefficientLaw::rademacher())?;
    let plan = TrialPlan::new(500, 21);

    let g = BumpFunction::real(1.0, 0.4)?;
    let lin = linear_statistic(&spec, &spec.law, &g, &plan)?;
    let model = build_model(&spec)?;
    println!("density at 1.0: {:.4} zeros per unit length", model.density(1.0)?);
    println!("linear statistic: {:.4} ± {:.4}", lin.mean(), lin.stderr());

    // mean spacing here is about 0.135
    let ens = Ensemble::new(&spec)?;
    for shift in [0.05, 0.15, 0.4] {
        let pair = BumpFunction::new(&[(1.0, 0.1), (1.0 + shift, 0.1)], &[])?;
        let e = run_trials(&plan, "pairs", |s| {
            let rs = roots_trig(&ens.draw(s), None, DEFAULT_TOL)?;
            correlation_sum(&rs, &pair, 2, 0)
        })?;
        println!("shift {shift:.2}: correlation sum {:.5} ± {:.5}", e.mean(), e.stderr());
    }
    Ok(())
}
