//! Random-function families `F(z) = Σ ξ_i φ_i(z)`: laws, specs, sampling
//! and stable evaluation.

mod law;
mod realization;
mod spec;
mod truncation;

pub use law::{CoefficientLaw, LawKind};
pub(crate) use realization::Basis;
pub use realization::{BasisValues, Ensemble, Realization, Scaled};
pub use spec::{BasisFn, EnsembleSpec, Family, GenericBasis, LocalScale, SlowlyVarying, DEFAULT_TRUNCATION_TOL};
pub use truncation::truncation_length;

use num_complex::Complex64;

use crate::error::Result;
use crate::rng::RngStream;

/// Draws one realization. Prefer [`Ensemble::draw`] in loops: it reuses the
/// prepared basis.
pub fn draw(spec: &EnsembleSpec, stream: &mut RngStream) -> Result<Realization> {
    Ok(Ensemble::new(spec)?.draw(stream))
}

pub fn evaluate(r: &Realization, z: Complex64, order: usize) -> Result<Complex64> {
    r.evaluate(z, order)
}

/// `Σ_i |φ_i(z)|²`.
pub fn variance_profile(spec: &EnsembleSpec, z: Complex64) -> Result<f64> {
    Ensemble::new(spec)?.variance_profile(z)
}
