//! Structural checks: moment matching, coefficient regularity, Jensen's
//! bound and Green's identity on single realizations.

use rootlab::conditions::{c1_match_report, check_c3, green_identity_residual, jensen_zero_bound};
use rootlab::ensembles::{CoefficientLaw, Ensemble, EnsembleSpec};
use rootlab::statistics::BumpFunction;
use rootlab::{Complex64, RngStream};

fn main() -> rootlab::Result<()> {
    let report = c1_match_report(&CoefficientLaw::gaussian(), &CoefficientLaw::rademacher(), 2000)?;
    println!("{}", report.to_json()?);

    let n = 30;
    let c: Vec<f64> = (0..=n).map(|j| 1.0 + 0.5 * (j as f64 / n as f64)).collect();
    let (ok, witness) = check_c3(&c, &c[1..], 0.5, 0.5)?;
    println!("regular coefficients: {ok} {witness:?}");

    let ens = Ensemble::new(&EnsembleSpec::trig_flat(20, CoefficientLaw::gaussian())?)?;
    let g = BumpFunction::complex(Complex64::new(1.0, 0.0), 0.5)?;
    for i in 0..3 {
        let r = ens.draw(&mut RngStream::new(4, i));
        let bound = jensen_zero_bound(&r, Complex64::new(1.0, 0.0), 0.3, 0.6)?;
        let residual = green_identity_residual(&r, &g, 256)?;
        println!("realization {i}: Jensen bound {bound:.2}, Green residual {residual:.2e}");
    }
    Ok(())
}
