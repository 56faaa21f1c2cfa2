//! Real zeros of elliptic polynomials under three coefficient laws with
//! matching first two moments. The gaussian mean is exactly √n.

use rootlab::baselines::elliptic_expected;
use rootlab::ensembles::{CoefficientLaw, EnsembleSpec};
use rootlab::statistics::{compare, windowed_count, TrialPlan};

fn main() -> rootlab::Result<()> {
    let full = (f64::NEG_INFINITY, f64::INFINITY);
    let plan = TrialPlan::new(1000, 11);
    for n in [25, 100] {
        let spec = EnsembleSpec::elliptic(n, CoefficientLaw::gaussian())?;
        let g = windowed_count(&spec, &spec.law, full, &plan)?;
        println!("n = {n}: gaussian {:.3} ± {:.3}, sqrt(n) = {}", g.mean(), g.stderr(), elliptic_expected(n));
        for law in [CoefficientLaw::rademacher(), CoefficientLaw::uniform(3f64.sqrt())?] {
            let e = windowed_count(&spec, &law, full, &plan)?;
            let c = compare(&e, &g);
            println!(
                "    {:<10} {:.3} ± {:.3}  z vs gaussian {:+.2}",
                law.kind.name(),
                e.mean(),
                e.stderr(),
                c.z_score
            );
        }
    }
    Ok(())
}
