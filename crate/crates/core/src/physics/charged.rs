//! Charged particle on a sphere with a monopole field and Coulomb repulsion.

use alloc::format;
use alloc::vec;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::maps::{PowerPrefactor, RationalMap};
use crate::numerics::QuadratureSolution;
use crate::params::{make_params, HeunParams};
use crate::reduction::HypergeometricForm;
use crate::scalar::{real, C64};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChargedParticleInput {
    /// Monopole strength.
    pub s: f64,
    pub m: i32,
    /// Sphere radius.
    pub r: f64,
    /// Bohr radius; `f64::INFINITY` switches the Coulomb term off.
    pub l0: f64,
    pub eps_prime: f64,
}

/// Which root of `√(4S² + 4ε' + 1)` enters `a`; the other enters `b`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootOrder {
    #[default]
    PlusFirst,
    MinusFirst,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChargedParams {
    pub params: HeunParams,
    pub a_prime: f64,
    pub b_prime: f64,
    /// `4S² + 4ε' + 1 < 0`: `a` and `b` are complex conjugates.
    pub complex_ab: bool,
}

impl ChargedParticleInput {
    pub fn primes(&self) -> (f64, f64) {
        let s = self.s;
        let m = self.m as f64;
        ((s - m).abs(), (s + m).abs())
    }

    fn check(&self) -> Result<(), Error> {
        if !(self.s.is_finite() && self.r.is_finite() && self.eps_prime.is_finite()) || self.l0.is_nan() {
            return Err(Error::NonFinite("charged-particle input"));
        }
        if !(self.r > 0.0) || !(self.l0 > 0.0) {
            return Err(Error::InvalidInput(format!("R and l0 must be positive, got R = {}, l0 = {}", self.r, self.l0)));
        }
        Ok(())
    }
}

/// `Γ = 2a'+1`, `Δ = ε = b'+1`, `d = -1`, `q = -4R/l₀`,
/// `a, b = a'+b'+1 ± √(4S²+4ε'+1)` with `a' = |S-m|`, `b' = |S+m|`.
pub fn charged_particle_params(input: &ChargedParticleInput, order: RootOrder) -> Result<ChargedParams, Error> {
    input.check()?;
    let (ap, bp) = input.primes();
    let disc = 4.0 * input.s * input.s + 4.0 * input.eps_prime + 1.0;
    let root = real(disc).sqrt();
    let sign = match order {
        RootOrder::PlusFirst => 1.0,
        RootOrder::MinusFirst => -1.0,
    };
    let centre = ap + bp + 1.0;
    let q = if input.l0.is_infinite() { 0.0 } else { -4.0 * input.r / input.l0 };
    let params = make_params(real(-1.0), real(q), centre + sign * root, centre - sign * root, real(2.0 * ap + 1.0), real(bp + 1.0))?;
    Ok(ChargedParams { params, a_prime: ap, b_prime: bp, complex_ab: disc < 0.0 })
}

/// `ε' = (a'+b')(a'+b'+2)/4 - S²`, the energy at which `ab = 0`.
pub fn charged_particle_trivial_energy(a_prime: f64, b_prime: f64, s: f64) -> f64 {
    let t = a_prime + b_prime;
    t * (t + 2.0) / 4.0 - s * s
}

/// `F((a'+b'+1+√(4S²+4ε'+1))/2, (a'+b'+1-√(…))/2; a'+1; z²)`
pub fn charged_particle_harmonic_form(input: &ChargedParticleInput) -> Result<HypergeometricForm, Error> {
    input.check()?;
    let (ap, bp) = input.primes();
    let root = real(4.0 * input.s * input.s + 4.0 * input.eps_prime + 1.0).sqrt();
    let centre = ap + bp + 1.0;
    let arg = RationalMap::polynomial(vec![C64::zero(), C64::zero(), C64::one()])?;
    Ok(HypergeometricForm::new((centre + root) / 2.0, (centre - root) / 2.0, real(ap + 1.0), arg, PowerPrefactor::one()))
}

/// `C1 + C2 ∫_{base}^{z} t^(-Γ)(t-1)^(-Δ)(t+1)^(-ε) dt`, factors normalized at `base`.
pub fn charged_particle_quadrature(p: &HeunParams, base: C64, c1: C64, c2: C64) -> Result<QuadratureSolution, Error> {
    QuadratureSolution::new([C64::zero(), C64::one(), p.d()], [-p.gamma(), -p.delta(), -p.epsilon()], base, c1, c2)
}
