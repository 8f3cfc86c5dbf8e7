//! Limit density of the discrete-time quantum walk.

use alloc::format;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::numerics::Jet;
use crate::params::{make_params, HeunParams};
use crate::scalar::{fmt_c64, real, C64};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantumWalkInput {
    pub d: f64,
}

impl Default for QuantumWalkInput {
    fn default() -> Self {
        QuantumWalkInput { d: 4.0 }
    }
}

/// `Γ = 1/2`, `Δ = 2`, `ε = 3/2`, `a = b = 3/2`, `q = (2d+1)/4`.
pub fn quantum_walk_params(input: &QuantumWalkInput) -> Result<HeunParams, Error> {
    if !(input.d > 0.0) {
        return Err(Error::InvalidInput(format!("d must be positive, got {}", input.d)));
    }
    make_params(real(input.d), real((2.0 * input.d + 1.0) / 4.0), real(1.5), real(1.5), real(0.5), real(2.0))
}

fn check_point(z: C64, d: f64) -> Result<(), Error> {
    if (z - 1.0).norm() < 1e-12 || (z.im == 0.0 && z.re >= d) {
        return Err(Error::OutOfDomain { z: fmt_c64(z), limit: d });
    }
    Ok(())
}

/// `√(1-d) / (π(1-z)√(d-z))` as printed; imaginary for `d > 1`.
pub fn quantum_walk_density_raw(z: C64, d: f64) -> Result<C64, Error> {
    check_point(z, d)?;
    Ok(real(1.0 - d).sqrt() / (PI * (1.0 - z) * (d - z).sqrt()))
}

/// The density rescaled to `H(0) = 1`: `√d / ((1-z)√(d-z))`.
pub fn quantum_walk_density(z: C64, d: f64) -> Result<C64, Error> {
    check_point(z, d)?;
    Ok(d.sqrt() / ((1.0 - z) * (d - z).sqrt()))
}

/// Normalized density with two derivatives, from the logarithmic derivative
/// `1/(1-z) + 1/(2(d-z))`.
pub fn quantum_walk_density_jet(z: C64, d: f64) -> Result<Jet, Error> {
    let h = quantum_walk_density(z, d)?;
    let (u, v) = ((1.0 - z).inv(), (d - z).inv());
    let l1 = u + 0.5 * v;
    let l2 = u * u + 0.5 * v * v;
    Ok(Jet { value: h, d1: h * l1, d2: h * (l1 * l1 + l2) })
}
