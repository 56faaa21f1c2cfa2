//! Real zeros of a random Taylor series with regularly varying
//! coefficients, on `[0, r]` as `r → 1`. The count grows like
//! `(√γ / 2π) log(1/(1-r))`.

use rootlab::baselines::taylor_expected;
use rootlab::ensembles::{CoefficientLaw, EnsembleSpec, SlowlyVarying};
use rootlab::statistics::{windowed_count, TrialPlan};
use rootlab::{Complex64, Region};

fn main() -> rootlab::Result<()> {
    let gamma = 4.0;
    let domain = Region::disk(Complex64::new(0.0, 0.0), 1.0 - 2f64.powi(-8));
    let spec = EnsembleSpec::taylor(gamma, SlowlyVarying::Constant(1.0), domain, CoefficientLaw::gaussian())?;
    for k in [3, 5, 7] {
        let r = 1.0 - 2f64.powi(-k);
        let e = windowed_count(&spec, &spec.law, (0.0, r), &TrialPlan::new(300, 2))?;
        println!("r = {r:.5}: {:.3} ± {:.3}, main term {:.3}", e.mean(), e.stderr(), taylor_expected(gamma, r)?);
    }
    Ok(())
}
