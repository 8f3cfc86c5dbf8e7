//! Heun-function identities that move the third finite singularity `d`.
//!
//! Each identity is an equality `H_p(z) = P(z) · H_p'(m(z))` between local
//! solutions normalized by `H(0) = 1`:
//!
//! * line 5:  `d ↦ d/(d-1)`, `m(z) = z/(z-1)`, `P(z) = (1-z)^(-a)`
//! * line 9:  `d ↦ 1/d`,     `m(z) = z/d`,     `P(z) = 1`
//! * line 17: `-1 ↦ 2`,       `m(z) = 2z/(z+1)`, `P(z) = (1+z)^(-a)`

use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::maps::{MobiusMap, PowerPrefactor};
use crate::params::{make_params, HeunParams};
use crate::scalar::{approx_eq, fmt_c64, real, C64, TOL_EXACT};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IdentityId {
    Line5,
    Line9,
    Line17,
}

impl IdentityId {
    pub const ALL: [IdentityId; 3] = [IdentityId::Line5, IdentityId::Line9, IdentityId::Line17];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::Line5 => "line5",
            IdentityId::Line9 => "line9",
            IdentityId::Line17 => "line17",
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "line5" | "5" => Ok(IdentityId::Line5),
            "line9" | "9" => Ok(IdentityId::Line9),
            "line17" | "17" => Ok(IdentityId::Line17),
            other => Err(Error::InvalidInput(format!("unknown identity '{other}'"))),
        }
    }
}

/// `H_p(z) = prefactor(z) · H_params(arg_map(z))`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransformResult {
    pub params: HeunParams,
    pub arg_map: MobiusMap,
    pub prefactor: PowerPrefactor,
    /// Identities applied, first to last. Empty for the trivial transform.
    pub steps: Vec<IdentityId>,
}

impl TransformResult {
    pub fn identity(p: &HeunParams) -> Self {
        TransformResult { params: *p, arg_map: MobiusMap::identity(), prefactor: PowerPrefactor::one(), steps: Vec::new() }
    }

    /// Applies `id` to the transformed parameters and composes the maps.
    pub fn then(&self, id: IdentityId) -> Result<TransformResult, Error> {
        let next = apply(id, &self.params)?;
        // H_p(z) = P1(z) P2(m1(z)) H_p2(m2(m1(z)))
        let prefactor = self.prefactor.mul(&next.prefactor.compose_mobius(&self.arg_map)?);
        let mut steps = self.steps.clone();
        steps.extend(next.steps);
        Ok(TransformResult { params: next.params, arg_map: next.arg_map.compose(&self.arg_map), prefactor, steps })
    }
}

fn single(params: HeunParams, arg_map: MobiusMap, prefactor: PowerPrefactor, id: IdentityId) -> TransformResult {
    TransformResult { params, arg_map, prefactor, steps: vec![id] }
}

fn rebuild(d: C64, q: C64, a: C64, b: C64, gamma: C64, delta: C64) -> Result<HeunParams, Error> {
    make_params(d, q, a, b, gamma, delta)
}

/// `H(d,q;a,b,Γ,Δ;z) = (1-z)^(-a) H(d/(d-1), (adΓ-q)/(d-1); a, a-Δ+1, Γ, a-b+1; z/(z-1))`
pub fn apply_line5(p: &HeunParams) -> Result<TransformResult, Error> {
    let (d, q, a, b, g, dl) = (p.d(), p.q(), p.a(), p.b(), p.gamma(), p.delta());
    let params = rebuild(d / (d - 1.0), (a * d * g - q) / (d - 1.0), a, a - dl + 1.0, g, a - b + 1.0)?;
    let arg_map = MobiusMap::new(C64::one(), C64::zero(), C64::one(), real(-1.0))?;
    Ok(single(params, arg_map, PowerPrefactor::single(C64::one(), real(-1.0), -a), IdentityId::Line5))
}

/// `H(d,q;a,b,Γ,Δ;z) = H(1/d, q/d; a, b, Γ, a+b-Γ-Δ+1; z/d)`
pub fn apply_line9(p: &HeunParams) -> Result<TransformResult, Error> {
    let (d, q, a, b, g, dl) = (p.d(), p.q(), p.a(), p.b(), p.gamma(), p.delta());
    let params = rebuild(d.inv(), q / d, a, b, g, a + b - g - dl + 1.0)?;
    let arg_map = MobiusMap::new(C64::one(), C64::zero(), C64::zero(), d)?;
    Ok(single(params, arg_map, PowerPrefactor::one(), IdentityId::Line9))
}

/// `H(-1,q;a,b,Γ,Δ;z) = (1+z)^(-a) H(2, aΓ-q; a, Δ+Γ-b, Γ, Δ; 2z/(z+1))`
pub fn apply_line17(p: &HeunParams) -> Result<TransformResult, Error> {
    if !approx_eq(p.d(), real(-1.0), TOL_EXACT) {
        return Err(Error::InapplicableIdentity {
            identity: "line17",
            reason: format!("requires d = -1, got d = {}", fmt_c64(p.d())),
        });
    }
    let (q, a, b, g, dl) = (p.q(), p.a(), p.b(), p.gamma(), p.delta());
    let params = rebuild(real(2.0), a * g - q, a, dl + g - b, g, dl)?;
    let arg_map = MobiusMap::new(real(2.0), C64::zero(), C64::one(), C64::one())?;
    Ok(single(params, arg_map, PowerPrefactor::single(C64::one(), C64::one(), -a), IdentityId::Line17))
}

pub fn apply(id: IdentityId, p: &HeunParams) -> Result<TransformResult, Error> {
    match id {
        IdentityId::Line5 => apply_line5(p),
        IdentityId::Line9 => apply_line9(p),
        IdentityId::Line17 => apply_line17(p),
    }
}

/// Maximum number of identities composed by the orbit search.
pub const MAX_DEPTH: usize = 3;

fn same_d(x: C64, y: C64, tol: f64) -> bool {
    approx_eq(x, y, tol)
}

/// Breadth-first search over identity compositions, shortest first.
fn search(p: &HeunParams, tol: f64, mut stop: impl FnMut(&TransformResult) -> bool) -> Vec<TransformResult> {
    let mut seen: Vec<TransformResult> = vec![TransformResult::identity(p)];
    let mut queue: VecDeque<(TransformResult, usize)> = VecDeque::new();
    queue.push_back((TransformResult::identity(p), 0));
    if stop(&seen[0]) {
        return seen;
    }
    while let Some((node, depth)) = queue.pop_front() {
        if depth == MAX_DEPTH {
            continue;
        }
        for id in IdentityId::ALL {
            let Ok(next) = node.then(id) else { continue };
            if seen.iter().any(|s| same_d(s.params.d(), next.params.d(), tol)) {
                continue;
            }
            let done = stop(&next);
            seen.push(next.clone());
            if done {
                return seen;
            }
            queue.push_back((next, depth + 1));
        }
    }
    seen
}

/// Values of `d` reachable from `d` by composing the implemented identities
/// (at most [`MAX_DEPTH`] steps), deduplicated.
pub fn d_orbit(d: C64) -> Result<Vec<C64>, Error> {
    // parameters other than d do not influence where d can go
    let p = make_params(d, C64::zero(), C64::one(), C64::one(), C64::one(), C64::one())?;
    Ok(search(&p, TOL_EXACT, |_| false).into_iter().map(|t| t.params.d()).collect())
}

pub fn transport_to(p: &HeunParams, target_d: C64) -> Result<TransformResult, Error> {
    transport_within(p, target_d, TOL_EXACT)
}

/// [`transport_to`] with an explicit tolerance for matching `target_d`.
pub fn transport_within(p: &HeunParams, target_d: C64, tol: f64) -> Result<TransformResult, Error> {
    search(p, tol, |t| same_d(t.params.d(), target_d, tol))
        .into_iter()
        .find(|t| same_d(t.params.d(), target_d, tol))
        .ok_or_else(|| Error::UnreachableTarget(fmt_c64(target_d)))
}

/// Every composition of at most [`MAX_DEPTH`] identities that lands on
/// `target_d`, shortest first, with duplicate parameter sets removed.
///
/// Different routes to the same `d` generally give different parameter
/// sets, so reductions are tried along each of them.
pub fn routes_to(p: &HeunParams, target_d: C64, tol: f64) -> Vec<TransformResult> {
    let mut found: Vec<TransformResult> = Vec::new();
    let mut layer = vec![TransformResult::identity(p)];
    for depth in 0..=MAX_DEPTH {
        for t in &layer {
            if same_d(t.params.d(), target_d, tol) && !found.iter().any(|f| same_params(&f.params, &t.params, tol)) {
                found.push(t.clone());
            }
        }
        if depth == MAX_DEPTH {
            break;
        }
        layer = layer
            .iter()
            .flat_map(|t| IdentityId::ALL.into_iter().filter_map(move |id| t.then(id).ok()))
            .collect();
    }
    found
}

fn same_params(x: &HeunParams, y: &HeunParams, tol: f64) -> bool {
    [
        (x.d(), y.d()),
        (x.q(), y.q()),
        (x.a(), y.a()),
        (x.b(), y.b()),
        (x.gamma(), y.gamma()),
        (x.delta(), y.delta()),
    ]
    .into_iter()
    .all(|(u, v)| approx_eq(u, v, tol))
}

/// The transformed parameter set in the layout of the symbolic helper:
/// `H(d, q; a, b, Γ, Δ; z) = P(z) H(d', q'; a', b', Γ', Δ'; m(z))`.
pub fn format_transform(p: &HeunParams, t: &TransformResult) -> String {
    let lhs = format!(
        "H({}, {}; {}, {}, {}, {}; z)",
        fmt_c64(p.d()),
        fmt_c64(p.q()),
        fmt_c64(p.a()),
        fmt_c64(p.b()),
        fmt_c64(p.gamma()),
        fmt_c64(p.delta())
    );
    let n = &t.params;
    let rhs = format!(
        "H({}, {}; {}, {}, {}, {}; {})",
        fmt_c64(n.d()),
        fmt_c64(n.q()),
        fmt_c64(n.a()),
        fmt_c64(n.b()),
        fmt_c64(n.gamma()),
        fmt_c64(n.delta()),
        format_mobius(&t.arg_map)
    );
    let pre = format_prefactor(&t.prefactor);
    if pre.is_empty() {
        format!("{lhs} = {rhs}")
    } else {
        format!("{lhs} = {pre} {rhs}")
    }
}

/// The identity itself with symbolic parameters.
pub fn symbolic_template(id: IdentityId) -> &'static str {
    match id {
        IdentityId::Line5 => "H(d, q; a, b, Γ, Δ; z) = (1 - z)^(-a) H(d/(d - 1), (a d Γ - q)/(d - 1); a, a - Δ + 1, Γ, a - b + 1; z/(z - 1))",
        IdentityId::Line9 => "H(d, q; a, b, Γ, Δ; z) = H(1/d, q/d; a, b, Γ, a + b - Γ - Δ + 1; z/d)",
        IdentityId::Line17 => "H(-1, q; a, b, Γ, Δ; z) = (1 + z)^(-a) H(2, a Γ - q; a, Δ + Γ - b, Γ, Δ; 2z/(z + 1))",
    }
}

fn linear_term(c: C64, var: &str) -> String {
    if (c - 1.0).norm() == 0.0 {
        String::from(var)
    } else if (c + 1.0).norm() == 0.0 {
        format!("-{var}")
    } else {
        format!("{}{var}", paren(c))
    }
}

fn paren(c: C64) -> String {
    let s = fmt_c64(c);
    if c.im != 0.0 && c.re != 0.0 {
        format!("({s})")
    } else {
        s
    }
}

fn affine_desc(c0: C64, c1: C64) -> String {
    match (c0 == C64::zero(), c1 == C64::zero()) {
        (_, true) => fmt_c64(c0),
        (true, false) => linear_term(c1, "z"),
        (false, false) => {
            let lin = linear_term(c1, "z");
            if c0.im == 0.0 && c0.re < 0.0 {
                format!("{lin} - {}", fmt_c64(-c0))
            } else {
                format!("{lin} + {}", paren(c0))
            }
        }
    }
}

fn affine(c0: C64, c1: C64) -> String {
    match (c0 == C64::zero(), c1 == C64::zero()) {
        (_, true) => fmt_c64(c0),
        (true, false) => linear_term(c1, "z"),
        (false, false) => {
            let lin = linear_term(c1, "z");
            match lin.strip_prefix('-') {
                Some(rest) => format!("{} - {}", fmt_c64(c0), rest),
                None => format!("{} + {}", fmt_c64(c0), lin),
            }
        }
    }
}

/// `z/(z - 1)`, `z/2`, `2z/(z + 1)`, ...
pub fn format_mobius(m: &MobiusMap) -> String {
    // normalize so the denominator's constant (or leading) coefficient is 1 when possible
    let s = if m.gamma == C64::zero() { m.delta } else { m.gamma };
    let (al, be, ga, de) = (m.alpha / s, m.beta / s, m.gamma / s, m.delta / s);
    let num = affine_desc(be, al);
    if ga == C64::zero() {
        // pure scalings read better as z/k than as (1/k)z
        let k = m.delta / m.alpha;
        return if be == C64::zero() && k.norm() > 1.0 { format!("z/{}", paren(k)) } else { num };
    }
    let num = if num.contains(' ') { format!("({num})") } else { num };
    format!("{num}/({})", affine_desc(de, ga))
}

pub fn format_prefactor(p: &PowerPrefactor) -> String {
    let parts: Vec<String> = p
        .factors
        .iter()
        .map(|f| format!("({})^({})", affine(f.c0, f.c1), fmt_c64(f.exponent)))
        .collect();
    parts.join(" ")
}
