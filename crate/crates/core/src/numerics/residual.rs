use num_traits::Zero;

use super::Jet;
use crate::error::Error;
use crate::params::HeunParams;
use crate::scalar::{fmt_c64, C64};

/// `H'' + (Γ/z + Δ/(z-1) + ε/(z-d)) H' + (abz - q) / (z(z-1)(z-d)) H`
pub fn heun_operator(p: &HeunParams, h: &Jet, z: C64) -> Result<C64, Error> {
    let (z1, zd) = (z - 1.0, z - p.d());
    if z == C64::zero() || z1 == C64::zero() || zd == C64::zero() {
        return Err(Error::SingularPoint(fmt_c64(z)));
    }
    let drift = p.gamma() / z + p.delta() / z1 + p.epsilon() / zd;
    let potential = (p.a() * p.b() * z - p.q()) / (z * z1 * zd);
    Ok(h.d2 + drift * h.d1 + potential * h.value)
}

/// Absolute residual `|L[H](z)|` for the supplied value and derivatives.
pub fn ode_residual(p: &HeunParams, value: C64, d1: C64, d2: C64, z: C64) -> Result<f64, Error> {
    heun_operator(p, &Jet { value, d1, d2 }, z).map(|r| r.norm())
}
