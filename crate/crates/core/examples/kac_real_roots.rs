//! Real zeros of Kac polynomials against the gaussian mean `(2/π) log n`.

use std::time::Instant;

use rootlab::ensembles::{CoefficientLaw, Ensemble, EnsembleSpec};
use rootlab::rootfind::count_real;
use rootlab::RngStream;

fn main() -> rootlab::Result<()> {
    let trials = 200;
    for n in [10, 100, 1000] {
        let ens = Ensemble::new(&EnsembleSpec::kac(n, CoefficientLaw::gaussian())?)?;
        let t = Instant::now();
        let mut total = 0usize;
        for i in 0..trials {
            let r = ens.draw(&mut RngStream::new(7, i));
            total += count_real(&r, (f64::NEG_INFINITY, f64::INFINITY))?;
        }
        let mean = total as f64 / trials as f64;
        println!(
            "n = {n:5}: mean real zeros {mean:.3}, (2/pi) ln n = {:.3}, {:.2} ms/trial",
            2.0 / std::f64::consts::PI * (n as f64).ln(),
            t.elapsed().as_secs_f64() * 1e3 / trials as f64
        );
    }
    Ok(())
}
