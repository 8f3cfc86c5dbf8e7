//! s-wave bound states of the attractive inverse-square potential with a
//! deformed commutator.

use alloc::format;
use alloc::string::String;
use alloc::vec;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::maps::{PowerPrefactor, RationalMap};
use crate::params::{make_params, HeunParams};
use crate::reduction::{CatalogPair, HypergeometricForm};
use crate::scalar::real;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InverseSquareInput {
    pub omega: f64,
    /// `ω₄ ∈ (0, 1)`
    pub omega4: f64,
    /// `κ > 0`
    pub kappa: f64,
}

impl InverseSquareInput {
    pub fn check(&self) -> Result<(), Error> {
        if !(self.omega.is_finite() && self.omega4.is_finite() && self.kappa.is_finite()) {
            return Err(Error::NonFinite("inverse-square input"));
        }
        if !(self.kappa > 0.0) {
            return Err(Error::InvalidInput(format!("κ must be positive, got {}", self.kappa)));
        }
        if !(self.omega4 > 0.0 && self.omega4 < 1.0) {
            return Err(Error::InvalidInput(format!("ω₄ must lie in (0, 1), got {}", self.omega4)));
        }
        if (2.0 * self.omega - 1.0).abs() < 1e-12 {
            return Err(Error::InvalidInput(String::from("ω = 1/2 leaves d = 2ω/(2ω - 1) undefined")));
        }
        Ok(())
    }

    /// `κ/(1 - 2ω)`
    fn k(&self) -> f64 {
        self.kappa / (1.0 - 2.0 * self.omega)
    }
}

/// `Γ = 3/2`, `Δ = 1/2 - ω₄`, `ε = 2`, `q = 3/2 + κ/(1-2ω)`,
/// `a, b = (3 - ω₄ ∓ ν)/2`, `ν = √((ω₄-1)² - 4κ/(1-2ω))`, `d = 2ω/(2ω-1)`.
pub fn inverse_square_params(input: &InverseSquareInput) -> Result<HeunParams, Error> {
    input.check()?;
    let w4 = input.omega4;
    let nu = real((w4 - 1.0) * (w4 - 1.0) - 4.0 * input.k()).sqrt();
    let a = (3.0 - w4 - nu) / 2.0;
    let b = (3.0 - w4 + nu) / 2.0;
    let d = real(2.0 * input.omega / (2.0 * input.omega - 1.0));
    make_params(d, real(1.5 + input.k()), a, b, real(1.5), real(0.5 - w4))
}

/// The `ω₄ = 1/2` solution as written for this problem:
/// `F(5/4 - √(2ω-1+16κ)/(4√(2ω-1)), 5/4 + …; 3/2; (2ω-1)z/(2ω))`.
pub fn inverse_square_half_form(omega: f64, kappa: f64) -> Result<HypergeometricForm, Error> {
    let w = real(2.0 * omega - 1.0);
    let shift = (w + 16.0 * kappa).sqrt() / (4.0 * w.sqrt());
    let arg = RationalMap::polynomial(vec![real(0.0), w / (2.0 * omega)])?;
    Ok(HypergeometricForm::new(1.25 - shift, 1.25 + shift, real(1.5), arg, PowerPrefactor::one()))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    /// `q = abp` forces `ω₄ = 1/2`, which is already the `Δ = 0, q = ab` case.
    Trivializes { omega: f64 },
    /// `κ` is fixed and not positive.
    NegativeKappa { omega: f64, kappa: f64 },
    /// `κ(ω₄)` is positive only for `ω₄` outside `(0, 1)`.
    NeedsOmega4OutsideRange { omega: f64, kappa_at_0: f64, kappa_at_1: f64 },
    /// Some admissible `(ω₄, κ)` satisfies `q = abp`.
    Feasible { omega: f64, omega4: f64, kappa: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Feasibility {
    pub d: f64,
    pub p: f64,
    pub feasible: bool,
    pub verdict: Verdict,
    pub reason: String,
}

/// Whether `q = abp` can hold at `d = pair.d` with `κ > 0` and `ω₄ ∈ (0, 1)`.
///
/// With `K = κ/(1-2ω)` one has `ab = 2 - ω₄ + K`, so `q = abp` reads
/// `K(1-p) = p(2-ω₄) - 3/2`, and `d` fixes `ω = d/(2(d-1))`, `κ = K/(1-d)`.
pub fn inverse_square_feasibility(pair: &CatalogPair) -> Feasibility {
    let (d, p) = (pair.d, pair.p);
    let omega = d / (2.0 * (d - 1.0));
    let kappa_of = |w4: f64| (p * (2.0 - w4) - 1.5) / ((1.0 - p) * (1.0 - d));
    let (verdict, reason) = if (p - 1.0).abs() < 1e-12 {
        (
            Verdict::Trivializes { omega },
            String::from("q = ab forces ω₄ = 1/2, the case Δ = 0, q = ab already found; no nontrivial reduction"),
        )
    } else if p.abs() < 1e-12 {
        let kappa = kappa_of(0.0);
        if kappa > 0.0 {
            (Verdict::Feasible { omega, omega4: 0.5, kappa }, format!("q = 0 gives κ = {kappa} > 0 for every ω₄"))
        } else {
            (Verdict::NegativeKappa { omega, kappa }, format!("q = 0 requires ω = {omega}, κ = {kappa} ≤ 0, prohibited"))
        }
    } else {
        // κ is linear in ω₄; positive somewhere in (0, 1) iff positive at an end
        let (k0, k1) = (kappa_of(0.0), kappa_of(1.0));
        if k0 > 0.0 || k1 > 0.0 {
            let w4 = if k0 > 0.0 && k1 > 0.0 {
                0.5
            } else {
                // root of the linear function, then halfway to the positive end
                let root = k0 / (k0 - k1);
                if k0 > 0.0 { root / 2.0 } else { (root + 1.0) / 2.0 }
            };
            (Verdict::Feasible { omega, omega4: w4, kappa: kappa_of(w4) }, format!("κ(ω₄ = {w4}) = {} > 0", kappa_of(w4)))
        } else {
            (
                Verdict::NeedsOmega4OutsideRange { omega, kappa_at_0: k0, kappa_at_1: k1 },
                format!("κ(ω₄) ranges over [{}, {}] on [0, 1]; positive κ needs ω₄ outside (0, 1)", k0.min(k1), k0.max(k1)),
            )
        }
    };
    let feasible = matches!(verdict, Verdict::Feasible { .. });
    Feasibility { d, p, feasible, verdict, reason }
}
