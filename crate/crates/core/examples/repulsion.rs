//! Probability of two zeros in a small disk around a real point, for a
//! gaussian trigonometric polynomial, as the disk shrinks.

use std::f64::consts::PI;

use rootlab::ensembles::{CoefficientLaw, EnsembleSpec};
use rootlab::statistics::{pair_repulsion_prob, TrialPlan};

fn main() -> rootlab::Result<()> {
    let n = 100;
    let spec = EnsembleSpec::trig_flat(n, CoefficientLaw::gaussian())?;
    let plan = TrialPlan::new(2000, 9);
    let mut last: Option<f64> = None;
    for scale in [8.0, 4.0, 2.0, 1.0] {
        let gamma = scale / n as f64;
        let e = pair_repulsion_prob(&spec, &spec.law, PI, gamma, &plan)?;
        let ratio = last.map(|p| format!("  ratio to previous {:.2}", p / e.mean())).unwrap_or_default();
        println!("gamma = {gamma:.3}: P(two zeros) = {:.4} ± {:.4}{ratio}", e.mean(), e.stderr());
        last = Some(e.mean());
    }
    Ok(())
}
