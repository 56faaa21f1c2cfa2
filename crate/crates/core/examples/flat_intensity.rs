//! Zeros of the Weyl series in unit disks along the real axis.
//!
//! The complex gaussian version has intensity 1/π, so every unit disk holds
//! one zero on average wherever it sits.

use rootlab::baselines::flat_expected;
use rootlab::ensembles::{CoefficientLaw, Ensemble, EnsembleSpec};
use rootlab::rootfind::{count_in_region, roots_in, DEFAULT_TOL};
use rootlab::statistics::{run_trials, TrialPlan};
use rootlab::{Complex64, Region};

fn main() -> rootlab::Result<()> {
    let spec = EnsembleSpec::weyl(Region::disk(Complex64::new(0.0, 0.0), 9.5), CoefficientLaw::gaussian_complex())?
        .with_truncation_tol(1e-12)?;
    for law in [CoefficientLaw::gaussian_complex(), CoefficientLaw::rademacher_complex()] {
        let ens = Ensemble::new(&spec.with_law(law.clone()))?;
        for x in [0.0, 4.0, 8.0] {
            let disk = Region::disk(Complex64::new(x, 0.0), 1.0);
            let e = run_trials(&TrialPlan::new(1000, 5), "zeros in disk", |s| {
                let r = ens.draw(s);
                Ok(count_in_region(&roots_in(&r, &disk, DEFAULT_TOL)?, &disk)? as f64)
            })?;
            println!(
                "{:<20} disk at {x:>3}: {:.3} ± {:.3} (flat {})",
                law.kind.name(),
                e.mean(),
                e.stderr(),
                flat_expected(&disk)?
            );
        }
    }
    Ok(())
}
