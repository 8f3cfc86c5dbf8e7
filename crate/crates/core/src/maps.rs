//! Argument maps and power prefactors.
//!
//! Identities and reductions are equalities of the form
//! `H(z) = P(z) · G(m(z))` where `m` is a Möbius or rational map and `P` a
//! product of powers of affine factors. All prefactors built here are
//! normalized so that every non-constant base equals 1 at `z = 0`; the
//! principal branch is then continuous on the grids the verifier uses.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::scalar::{fmt_c64, is_finite, pow_principal, serde_c64, serde_c64_vec, C64, TOL_EXACT};

/// `z ↦ (αz + β) / (γz + δ)`
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MobiusMap {
    #[serde(with = "serde_c64")]
    pub alpha: C64,
    #[serde(with = "serde_c64")]
    pub beta: C64,
    #[serde(with = "serde_c64")]
    pub gamma: C64,
    #[serde(with = "serde_c64")]
    pub delta: C64,
}

impl MobiusMap {
    pub fn new(alpha: C64, beta: C64, gamma: C64, delta: C64) -> Result<Self, Error> {
        let m = MobiusMap { alpha, beta, gamma, delta };
        let scale = alpha.norm().max(beta.norm()).max(gamma.norm()).max(delta.norm());
        if !(m.det().norm() > TOL_EXACT * scale * scale) {
            return Err(Error::DegenerateMap("αδ - βγ = 0"));
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        MobiusMap { alpha: C64::one(), beta: C64::zero(), gamma: C64::zero(), delta: C64::one() }
    }

    pub fn det(&self) -> C64 {
        self.alpha * self.delta - self.beta * self.gamma
    }

    pub fn apply(&self, z: C64) -> C64 {
        (self.alpha * z + self.beta) / (self.gamma * z + self.delta)
    }

    /// `self ∘ inner`
    pub fn compose(&self, inner: &MobiusMap) -> MobiusMap {
        MobiusMap {
            alpha: self.alpha * inner.alpha + self.beta * inner.gamma,
            beta: self.alpha * inner.beta + self.beta * inner.delta,
            gamma: self.gamma * inner.alpha + self.delta * inner.gamma,
            delta: self.gamma * inner.beta + self.delta * inner.delta,
        }
    }

    pub fn inverse(&self) -> MobiusMap {
        MobiusMap { alpha: self.delta, beta: -self.beta, gamma: -self.gamma, delta: self.alpha }
    }

    /// Point sent to infinity, if finite.
    pub fn pole(&self) -> Option<C64> {
        if self.gamma.norm() <= TOL_EXACT * self.delta.norm() {
            None
        } else {
            Some(-self.delta / self.gamma)
        }
    }

    /// Preimage of a finite point `w`; `None` when the preimage is infinity.
    pub fn preimage(&self, w: C64) -> Option<C64> {
        let inv = self.inverse();
        let den = inv.gamma * w + inv.delta;
        if den.norm() <= TOL_EXACT * (inv.gamma.norm() + inv.delta.norm()) {
            None
        } else {
            Some((inv.alpha * w + inv.beta) / den)
        }
    }

    /// Equality with the identity map up to an overall scale.
    pub fn is_identity(&self, tol: f64) -> bool {
        let s = if self.delta.norm() > self.alpha.norm() { self.delta } else { self.alpha };
        if s.norm() == 0.0 {
            return false;
        }
        (self.alpha / s - 1.0).norm() <= tol
            && (self.delta / s - 1.0).norm() <= tol
            && (self.beta / s).norm() <= tol
            && (self.gamma / s).norm() <= tol
    }
}

/// `(c0 + c1 z)^exponent`, principal branch.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineFactor {
    #[serde(with = "serde_c64")]
    pub c0: C64,
    #[serde(with = "serde_c64")]
    pub c1: C64,
    #[serde(with = "serde_c64")]
    pub exponent: C64,
}

impl AffineFactor {
    pub fn new(c0: C64, c1: C64, exponent: C64) -> Self {
        AffineFactor { c0, c1, exponent }
    }

    pub fn base(&self, z: C64) -> C64 {
        self.c0 + self.c1 * z
    }

    pub fn eval(&self, z: C64) -> C64 {
        pow_principal(self.base(z), self.exponent)
    }

    pub fn is_constant(&self) -> bool {
        self.c1.norm() <= TOL_EXACT * self.c0.norm()
    }

    /// Zero of the base, if it depends on `z`.
    pub fn zero(&self) -> Option<C64> {
        if self.is_constant() {
            None
        } else {
            Some(-self.c0 / self.c1)
        }
    }
}

/// Product of affine powers; the empty product is 1.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PowerPrefactor {
    pub factors: Vec<AffineFactor>,
}

impl PowerPrefactor {
    pub fn one() -> Self {
        PowerPrefactor { factors: Vec::new() }
    }

    pub fn single(c0: C64, c1: C64, exponent: C64) -> Self {
        PowerPrefactor { factors: vec![AffineFactor::new(c0, c1, exponent)] }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.factors.iter().fold(C64::one(), |acc, f| acc * f.eval(z))
    }

    /// `(P, P', P'')` at `z`.
    pub fn jet(&self, z: C64) -> (C64, C64, C64) {
        let p = self.eval(z);
        // P'/P = Σ e c1 / base,   (P'/P)' = -Σ e c1² / base²
        let mut l = C64::zero();
        let mut dl = C64::zero();
        for f in &self.factors {
            if f.is_constant() {
                continue;
            }
            let u = f.c1 / f.base(z);
            l += f.exponent * u;
            dl -= f.exponent * u * u;
        }
        (p, p * l, p * (l * l + dl))
    }

    pub fn mul(&self, other: &PowerPrefactor) -> PowerPrefactor {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        PowerPrefactor { factors }.simplified()
    }

    /// `P(m(z))` rewritten as a product of affine powers normalized at `z = 0`.
    ///
    /// Requires `m(0)` finite and every base non-zero at `m(0)`.
    pub fn compose_mobius(&self, m: &MobiusMap) -> Result<PowerPrefactor, Error> {
        if m.delta.norm() <= TOL_EXACT * m.beta.norm() {
            return Err(Error::DegenerateMap("argument map sends 0 to infinity"));
        }
        let w0 = m.beta / m.delta;
        let v = m.gamma / m.delta;
        let mut factors = Vec::with_capacity(2 * self.factors.len());
        for f in &self.factors {
            let at0 = f.base(w0);
            if at0.norm() <= TOL_EXACT * (f.c0.norm() + f.c1.norm()) {
                return Err(Error::DegenerateMap("prefactor base vanishes at the image of 0"));
            }
            // (c0 + c1 m(z))^e = (c0 + c1 m(0))^e · (1 + u z)^e · (1 + v z)^(-e)
            let u = (f.c0 * m.gamma + f.c1 * m.alpha) / (f.c0 * m.delta + f.c1 * m.beta);
            factors.push(AffineFactor::new(at0, C64::zero(), f.exponent));
            factors.push(AffineFactor::new(C64::one(), u, f.exponent));
            factors.push(AffineFactor::new(C64::one(), v, -f.exponent));
        }
        Ok(PowerPrefactor { factors }.simplified())
    }

    /// Collects constants, merges equal bases, drops unit factors.
    pub fn simplified(self) -> PowerPrefactor {
        let tol = TOL_EXACT;
        let mut constant = C64::one();
        let mut merged: Vec<AffineFactor> = Vec::new();
        for f in self.factors {
            if f.is_constant() {
                constant *= f.eval(C64::zero());
                continue;
            }
            let (c0, c1) = if (f.c0 - 1.0).norm() <= tol || f.c0.norm() <= tol {
                (f.c0, f.c1)
            } else {
                constant *= pow_principal(f.c0, f.exponent);
                (C64::one(), f.c1 / f.c0)
            };
            match merged
                .iter_mut()
                .find(|g| (g.c0 - c0).norm() <= tol && (g.c1 - c1).norm() <= tol * (1.0 + c1.norm()))
            {
                Some(g) => g.exponent += f.exponent,
                None => merged.push(AffineFactor::new(c0, c1, f.exponent)),
            }
        }
        merged.retain(|g| g.exponent.norm() > tol * (1.0 + g.c1.norm()));
        if (constant - 1.0).norm() > tol {
            merged.push(AffineFactor::new(constant, C64::zero(), C64::one()));
        }
        PowerPrefactor { factors: merged }
    }

    /// Zeros of the non-constant bases.
    pub fn branch_points(&self) -> impl Iterator<Item = C64> + '_ {
        self.factors.iter().filter_map(|f| f.zero())
    }
}

/// `R(z) = N(z) / D(z)`, coefficients in ascending powers, degree at most 4.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalMap {
    #[serde(rename = "arg_num", with = "serde_c64_vec")]
    pub num: Vec<C64>,
    #[serde(rename = "arg_den", with = "serde_c64_vec")]
    pub den: Vec<C64>,
}

pub const MAX_RATIONAL_DEGREE: usize = 4;

impl RationalMap {
    pub fn new(num: Vec<C64>, den: Vec<C64>) -> Result<Self, Error> {
        let num = poly::trimmed(num);
        let den = poly::trimmed(den);
        if den.iter().all(|c| *c == C64::zero()) {
            return Err(Error::DegenerateMap("denominator is identically zero"));
        }
        if num.iter().chain(den.iter()).any(|c| !is_finite(*c)) {
            return Err(Error::NonFinite("rational map"));
        }
        let r = RationalMap { num, den };
        if r.degree() > MAX_RATIONAL_DEGREE {
            return Err(Error::DegenerateMap("rational map degree exceeds 4"));
        }
        Ok(r)
    }

    pub fn identity() -> Self {
        RationalMap { num: vec![C64::zero(), C64::one()], den: vec![C64::one()] }
    }

    pub fn polynomial(coeffs: Vec<C64>) -> Result<Self, Error> {
        RationalMap::new(coeffs, vec![C64::one()])
    }

    pub fn from_mobius(m: &MobiusMap) -> Self {
        RationalMap { num: vec![m.beta, m.alpha], den: vec![m.delta, m.gamma] }
    }

    pub fn degree(&self) -> usize {
        poly::degree(&self.num).max(poly::degree(&self.den))
    }

    pub fn eval(&self, z: C64) -> C64 {
        poly::eval(&self.num, z) / poly::eval(&self.den, z)
    }

    /// `(R, R', R'')` at `z`.
    pub fn jet(&self, z: C64) -> (C64, C64, C64) {
        let (n, n1, n2) = poly::jet(&self.num, z);
        let (d, d1, d2) = poly::jet(&self.den, z);
        let r = n / d;
        let r1 = (n1 * d - n * d1) / (d * d);
        // R'' = (N'' - 2 R' D' - R D'') / D
        let r2 = (n2 - 2.0 * r1 * d1 - r * d2) / d;
        (r, r1, r2)
    }

    /// `R(m(z))`
    pub fn compose_mobius(&self, m: &MobiusMap) -> Result<RationalMap, Error> {
        let k = self.degree();
        let lin_num = [m.beta, m.alpha];
        let lin_den = [m.delta, m.gamma];
        let lift = |coeffs: &[C64]| -> Vec<C64> {
            let mut out = vec![C64::zero(); k + 1];
            for (j, c) in coeffs.iter().enumerate() {
                if *c == C64::zero() {
                    continue;
                }
                let term = poly::mul(&poly::pow(&lin_num, j), &poly::pow(&lin_den, k - j));
                for (i, t) in term.iter().enumerate() {
                    out[i] += *c * *t;
                }
            }
            out
        };
        RationalMap::new(lift(&self.num), lift(&self.den))
    }

    /// Distance from the origin to the nearest point where `R` reaches 1 or
    /// infinity: the singular points of `F(R(z))` for the Gauss function.
    pub fn singular_radius(&self) -> f64 {
        let shifted = poly::sub(&self.num, &self.den);
        poly::roots(&shifted)
            .into_iter()
            .chain(poly::roots(&self.den))
            .map(|r| r.norm())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Ascending powers, e.g. `2.25z - 1.5z^2 + 0.25z^3`.
fn format_poly(p: &[C64]) -> String {
    let mut out = String::new();
    for (k, c) in p.iter().enumerate() {
        if *c == C64::zero() {
            continue;
        }
        let power = match k {
            0 => String::new(),
            1 => String::from("z"),
            _ => format!("z^{k}"),
        };
        let negative_real = c.im == 0.0 && c.re < 0.0;
        let magnitude = if negative_real { -*c } else { *c };
        let coeff = if k > 0 && magnitude == C64::one() {
            String::new()
        } else if magnitude.im != 0.0 && magnitude.re != 0.0 {
            format!("({})", fmt_c64(magnitude))
        } else {
            fmt_c64(magnitude)
        };
        match (out.is_empty(), negative_real) {
            (true, false) => out.push_str(&format!("{coeff}{power}")),
            (true, true) => out.push_str(&format!("-{coeff}{power}")),
            (false, false) => out.push_str(&format!(" + {coeff}{power}")),
            (false, true) => out.push_str(&format!(" - {coeff}{power}")),
        }
    }
    if out.is_empty() {
        String::from("0")
    } else {
        out
    }
}

impl fmt::Display for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = format_poly(&self.num);
        if self.den.len() == 1 && self.den[0] == C64::one() {
            return f.write_str(&num);
        }
        let wrap = |s: String| if s.contains(' ') { format!("({s})") } else { s };
        write!(f, "{}/{}", wrap(num), wrap(format_poly(&self.den)))
    }
}

/// Dense complex polynomials, ascending coefficients.
pub mod poly {
    use super::*;

    pub fn trimmed(mut p: Vec<C64>) -> Vec<C64> {
        while p.len() > 1 && p.last().is_some_and(|c| *c == C64::zero()) {
            p.pop();
        }
        if p.is_empty() {
            p.push(C64::zero());
        }
        p
    }

    pub fn degree(p: &[C64]) -> usize {
        let scale = p.iter().map(|c| c.norm()).fold(0.0, f64::max);
        p.iter().rposition(|c| c.norm() > 1e-14 * scale).unwrap_or(0)
    }

    pub fn eval(p: &[C64], z: C64) -> C64 {
        p.iter().rev().fold(C64::zero(), |acc, c| acc * z + c)
    }

    /// Value and first two derivatives by Horner's scheme.
    pub fn jet(p: &[C64], z: C64) -> (C64, C64, C64) {
        let (mut v, mut d1, mut half_d2) = (C64::zero(), C64::zero(), C64::zero());
        for c in p.iter().rev() {
            half_d2 = half_d2 * z + d1;
            d1 = d1 * z + v;
            v = v * z + c;
        }
        (v, d1, 2.0 * half_d2)
    }

    pub fn mul(a: &[C64], b: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    pub fn pow(a: &[C64], n: usize) -> Vec<C64> {
        (0..n).fold(vec![C64::one()], |acc, _| mul(&acc, a))
    }

    pub fn sub(a: &[C64], b: &[C64]) -> Vec<C64> {
        let n = a.len().max(b.len());
        (0..n)
            .map(|i| a.get(i).copied().unwrap_or_default() - b.get(i).copied().unwrap_or_default())
            .collect()
    }

    /// All complex roots (Durand–Kerner, Newton-polished). Low degree only.
    pub fn roots(p: &[C64]) -> Vec<C64> {
        let n = degree(p);
        if n == 0 {
            return Vec::new();
        }
        let lead = p[n];
        let monic: Vec<C64> = p[..=n].iter().map(|c| c / lead).collect();
        let bound = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
        let seed = C64::new(0.4, 0.9);
        let mut z: Vec<C64> = (0..n).map(|k| seed.powu(k as u32) * bound.min(2.0)).collect();
        for _ in 0..500 {
            let mut delta = 0.0f64;
            for i in 0..n {
                let mut den = C64::one();
                for j in 0..n {
                    if i != j {
                        den *= z[i] - z[j];
                    }
                }
                if den == C64::zero() {
                    den = C64::new(1e-12, 0.0);
                }
                let step = eval(&monic, z[i]) / den;
                z[i] -= step;
                delta = delta.max(step.norm() / (1.0 + z[i].norm()));
            }
            if delta < 1e-15 {
                break;
            }
        }
        for r in z.iter_mut() {
            for _ in 0..3 {
                let (v, d, _) = jet(&monic, *r);
                if d == C64::zero() {
                    break;
                }
                *r -= v / d;
            }
        }
        z
    }
}
