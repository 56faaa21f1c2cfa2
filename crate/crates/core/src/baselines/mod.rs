//! Gaussian answers: the Kac–Rice integral and the closed forms.

mod catalogue;
mod closed;
mod model;
pub mod quadrature;

pub use catalogue::{catalogue, BaselineEntry, BaselineKind};
pub use closed::{
    elliptic_expected, flat_expected, kac_density, kac_gauss_expected, taylor_expected, trig_closed_form,
    trig_derivative_expected,
};
pub use model::{build_model, kac_rice_expected_count, GaussianProcessModel, Moments};
pub use quadrature::DEFAULT_QUAD_TOL;
