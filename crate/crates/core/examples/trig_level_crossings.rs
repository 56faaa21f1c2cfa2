//! Level crossings of a flat random trigonometric polynomial.
//!
//! Counts on `[0, 2π]` at levels `u = 0, 1, 2` next to the closed form
//! `2 √(Σ j² / Σ 1) e^{-u²/2}`, for gaussian and Rademacher coefficients.

use std::f64::consts::TAU;

use rootlab::baselines::trig_closed_form;
use rootlab::ensembles::{CoefficientLaw, EnsembleSpec};
use rootlab::statistics::{windowed_count, TrialPlan};

fn main() -> rootlab::Result<()> {
    let n = 60;
    let ones = vec![1.0; n + 1];
    let plan = TrialPlan::new(400, 3);
    for u in [0.0, 1.0, 2.0] {
        let spec = EnsembleSpec::trig(ones.clone(), vec![1.0; n], u, CoefficientLaw::gaussian())?;
        let want = trig_closed_form(&ones, u, 0.0, TAU)?;
        for law in [CoefficientLaw::gaussian(), CoefficientLaw::rademacher()] {
            let e = windowed_count(&spec, &law, (0.0, TAU), &plan)?;
            println!("u = {u}  {:<12} {:8.3} ± {:.3}   closed form {want:.3}", law.kind.name(), e.mean(), e.stderr());
        }
    }
    Ok(())
}
