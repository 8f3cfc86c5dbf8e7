//! Validated Heun parameter sets.
//!
//! `epsilon` is never a free input: every constructor derives it from the
//! Fuchsian relation `a + b + 1 = Γ + Δ + ε`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::scalar::{is_finite, serde_c64, C64, TOL_EXACT};

/// The seven parameters `(d, q; a, b, Γ, Δ, ε)` of the general Heun equation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ParamsRepr", into = "ParamsRepr")]
pub struct HeunParams {
    d: C64,
    q: C64,
    a: C64,
    b: C64,
    gamma: C64,
    delta: C64,
    epsilon: C64,
}

/// Builds a parameter set with `epsilon := a + b + 1 - gamma - delta`.
pub fn make_params(d: C64, q: C64, a: C64, b: C64, gamma: C64, delta: C64) -> Result<HeunParams, Error> {
    for (name, v) in [("d", d), ("q", q), ("a", a), ("b", b), ("gamma", gamma), ("delta", delta)] {
        if !is_finite(v) {
            return Err(Error::NonFinite(name));
        }
    }
    if d.norm() <= TOL_EXACT || (d - 1.0).norm() <= TOL_EXACT {
        return Err(Error::SingularD(d.re));
    }
    let epsilon = a + b + 1.0 - gamma - delta;
    if !is_finite(epsilon) {
        return Err(Error::NonFinite("epsilon"));
    }
    Ok(HeunParams { d, q, a, b, gamma, delta, epsilon })
}

impl HeunParams {
    /// Assembles a parameter set verbatim, `epsilon` included, without any
    /// checks. Only useful for exercising [`validate`] on foreign data.
    pub fn from_components_unchecked(d: C64, q: C64, a: C64, b: C64, gamma: C64, delta: C64, epsilon: C64) -> Self {
        HeunParams { d, q, a, b, gamma, delta, epsilon }
    }

    #[inline]
    pub fn d(&self) -> C64 {
        self.d
    }
    #[inline]
    pub fn q(&self) -> C64 {
        self.q
    }
    #[inline]
    pub fn a(&self) -> C64 {
        self.a
    }
    #[inline]
    pub fn b(&self) -> C64 {
        self.b
    }
    #[inline]
    pub fn gamma(&self) -> C64 {
        self.gamma
    }
    #[inline]
    pub fn delta(&self) -> C64 {
        self.delta
    }
    #[inline]
    pub fn epsilon(&self) -> C64 {
        self.epsilon
    }

    /// Same equation with a different accessory parameter.
    pub fn with_q(&self, q: C64) -> Result<Self, Error> {
        make_params(self.d, q, self.a, self.b, self.gamma, self.delta)
    }

    /// `H` is symmetric in `a` and `b`; this returns the interchanged set.
    pub fn swap_ab(&self) -> Self {
        HeunParams { a: self.b, b: self.a, ..*self }
    }

    /// `|a + b + 1 - (Γ + Δ + ε)| / (1 + |a| + |b|)`
    pub fn fuchsian_residual(&self) -> f64 {
        (self.a + self.b + 1.0 - self.gamma - self.delta - self.epsilon).norm()
            / (1.0 + self.a.norm() + self.b.norm())
    }

    /// Radius of convergence of the Frobenius series at the origin.
    pub fn series_radius(&self) -> f64 {
        self.d.norm().min(1.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    NonFinite(&'static str),
    DAtZero,
    DAtOne,
    Fuchsian { residual: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonFinite(name) => write!(f, "{name} is not finite"),
            Violation::DAtZero => f.write_str("d at regular singularity 0"),
            Violation::DAtOne => f.write_str("d at regular singularity 1"),
            Violation::Fuchsian { residual } => {
                write!(f, "Fuchsian constraint a+b+1=Γ+Δ+ε violated (relative residual {residual:e})")
            }
        }
    }
}

/// Every violated invariant; an empty list means the set is valid.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Validity {
    pub violations: Vec<Violation>,
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate(params: &HeunParams, tol_exact: f64) -> Validity {
    let mut violations = Vec::new();
    let fields = [
        ("d", params.d),
        ("q", params.q),
        ("a", params.a),
        ("b", params.b),
        ("gamma", params.gamma),
        ("delta", params.delta),
        ("epsilon", params.epsilon),
    ];
    for (name, v) in fields {
        if !is_finite(v) {
            violations.push(Violation::NonFinite(name));
        }
    }
    if params.d.norm() <= tol_exact {
        violations.push(Violation::DAtZero);
    }
    if (params.d - 1.0).norm() <= tol_exact {
        violations.push(Violation::DAtOne);
    }
    let residual = params.fuchsian_residual();
    if !(residual <= tol_exact) {
        violations.push(Violation::Fuchsian { residual });
    }
    Validity { violations }
}

#[derive(Serialize, Deserialize)]
struct ParamsRepr {
    #[serde(with = "serde_c64")]
    d: C64,
    #[serde(with = "serde_c64")]
    q: C64,
    #[serde(with = "serde_c64")]
    a: C64,
    #[serde(with = "serde_c64")]
    b: C64,
    #[serde(with = "serde_c64")]
    gamma: C64,
    #[serde(with = "serde_c64")]
    delta: C64,
    // ignored on input, recomputed from the Fuchsian relation
    #[serde(default, skip_deserializing, with = "serde_c64")]
    epsilon: C64,
}

impl TryFrom<ParamsRepr> for HeunParams {
    type Error = String;

    fn try_from(r: ParamsRepr) -> Result<Self, Self::Error> {
        make_params(r.d, r.q, r.a, r.b, r.gamma, r.delta).map_err(|e| format!("{e}"))
    }
}

impl From<HeunParams> for ParamsRepr {
    fn from(p: HeunParams) -> Self {
        ParamsRepr { d: p.d, q: p.q, a: p.a, b: p.b, gamma: p.gamma, delta: p.delta, epsilon: p.epsilon }
    }
}
