//! Numerical evaluation: Frobenius series of the Heun equation at `z = 0`,
//! the Gauss hypergeometric function, ODE residuals and path quadrature.

mod gauss;
mod hyp_form;
mod quadrature;
mod residual;
mod series;

pub use gauss::{gauss_2f1, gauss_2f1_jet, gauss_2f1_series, SeriesSum, GAUSS_SERIES_LIMIT};
pub use hyp_form::{eval_hyp_form, hyp_form_jet};
pub use quadrature::{cauchy_jet, gauss_legendre, integrate_segment, QuadratureSolution};
pub use residual::{heun_operator, ode_residual};
pub use series::{heun_eval, heun_series, heun_series_ordinary, SeriesSolution, DEFAULT_ORDER};

use crate::scalar::C64;

/// Value with first and second derivative.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub value: C64,
    pub d1: C64,
    pub d2: C64,
}

impl Jet {
    pub fn constant(value: C64) -> Self {
        Jet { value, d1: C64::new(0.0, 0.0), d2: C64::new(0.0, 0.0) }
    }
}
