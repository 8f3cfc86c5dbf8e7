//! Heun-to-hypergeometric reductions.
//!
//! Four trivial cases remove one singular point from the equation; the
//! nontrivial ones pull the Gauss equation back along a rational map of
//! degree 2, 3 or 4 and exist only when `q = abp` for a catalog pair `(d, p)`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::identities::{apply_line5, apply_line9, format_prefactor, routes_to, TransformResult};
use crate::maps::{PowerPrefactor, RationalMap};
use crate::params::HeunParams;
use crate::scalar::{approx_eq, fmt_c64, nonpositive_integer, real, serde_c64, C64, TOL_CONDITION, TOL_EXACT};

/// `prefactor(z) · F(a2, b2; c2; R(z))`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypergeometricForm {
    #[serde(with = "serde_c64")]
    pub a2: C64,
    #[serde(with = "serde_c64")]
    pub b2: C64,
    #[serde(with = "serde_c64")]
    pub c2: C64,
    #[serde(flatten)]
    pub arg_map: RationalMap,
    pub prefactor: PowerPrefactor,
    /// `c2` is a non-positive integer; the form is not evaluated.
    #[serde(default)]
    pub degenerate: bool,
}

impl HypergeometricForm {
    pub fn new(a2: C64, b2: C64, c2: C64, arg_map: RationalMap, prefactor: PowerPrefactor) -> Self {
        let degenerate = nonpositive_integer(c2, TOL_EXACT).is_some();
        HypergeometricForm { a2, b2, c2, arg_map, prefactor, degenerate }
    }

    /// `F(a2, b2; c2; z)`
    pub fn plain(a2: C64, b2: C64, c2: C64) -> Self {
        HypergeometricForm::new(a2, b2, c2, RationalMap::identity(), PowerPrefactor::one())
    }

    /// Given `H_p(z) = P(z) H_p'(m(z))` and this form for `H_p'`, the form
    /// for `H_p`: `P(z) · P_f(m(z)) · F(R(m(z)))`.
    pub fn pull_back(&self, t: &TransformResult) -> Result<HypergeometricForm, Error> {
        let arg_map = self.arg_map.compose_mobius(&t.arg_map)?;
        let prefactor = t.prefactor.mul(&self.prefactor.compose_mobius(&t.arg_map)?);
        Ok(HypergeometricForm::new(self.a2, self.b2, self.c2, arg_map, prefactor))
    }

    /// Nearest point to the origin where the form stops being analytic:
    /// `R = 1`, `R = ∞` or a prefactor branch point.
    pub fn singular_radius(&self) -> f64 {
        self.prefactor
            .branch_points()
            .map(|z| z.norm())
            .fold(self.arg_map.singular_radius(), f64::min)
    }
}

impl fmt::Display for HypergeometricForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pre = format_prefactor(&self.prefactor);
        if !pre.is_empty() {
            write!(f, "{pre} ")?;
        }
        write!(f, "F({}, {}; {}; {})", fmt_c64(self.a2), fmt_c64(self.b2), fmt_c64(self.c2), self.arg_map)
    }
}

/// `H(z) = C1 + C2 ∫ z^(-Γ) (z-1)^(-Δ) (z-d)^(-ε) dz`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureDescriptor {
    /// `0, 1, d`
    #[serde(with = "crate::scalar::serde_c64_vec")]
    pub singular_points: Vec<C64>,
    /// `-Γ, -Δ, -ε`, attached to the factors `z`, `z - 1`, `z - d`.
    #[serde(with = "crate::scalar::serde_c64_vec")]
    pub exponents: Vec<C64>,
    /// One exponent at infinity vanishes, so constants solve the equation
    /// and infinity carries no genuine singular behaviour for that branch.
    pub constant_solution: bool,
}

impl fmt::Display for QuadratureDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [s0, s1, sd] = self.singular_array();
        let [e0, e1, ed] = self.exponent_array();
        let base = |s: C64| if s == C64::zero() { String::from("z") } else { format!("(z - {})", fmt_c64(s)) };
        write!(
            f,
            "C1 + C2 ∫ {}^({}) {}^({}) {}^({}) dz",
            base(s0),
            fmt_c64(e0),
            base(s1),
            fmt_c64(e1),
            base(sd),
            fmt_c64(ed)
        )
    }
}

impl QuadratureDescriptor {
    pub fn from_params(p: &HeunParams) -> Self {
        QuadratureDescriptor {
            singular_points: vec![C64::zero(), C64::one(), p.d()],
            exponents: vec![-p.gamma(), -p.delta(), -p.epsilon()],
            constant_solution: true,
        }
    }

    pub fn singular_array(&self) -> [C64; 3] {
        [self.singular_points[0], self.singular_points[1], self.singular_points[2]]
    }

    pub fn exponent_array(&self) -> [C64; 3] {
        [self.exponents[0], self.exponents[1], self.exponents[2]]
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CaseTag {
    Case1Eps0,
    Case2Delta0,
    Case3Gamma0,
    Case4Trivial,
    Nontrivial { d: f64, p: f64 },
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseTag::Case1Eps0 => f.write_str("Case1_eps0"),
            CaseTag::Case2Delta0 => f.write_str("Case2_delta0"),
            CaseTag::Case3Gamma0 => f.write_str("Case3_gamma0"),
            CaseTag::Case4Trivial => f.write_str("Case4_trivial"),
            CaseTag::Nontrivial { d, p } => write!(f, "Nontrivial({d},{p})"),
        }
    }
}

impl FromStr for CaseTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::InvalidInput(format!("unknown case tag '{s}'"));
        match s {
            "Case1_eps0" => Ok(CaseTag::Case1Eps0),
            "Case2_delta0" => Ok(CaseTag::Case2Delta0),
            "Case3_gamma0" => Ok(CaseTag::Case3Gamma0),
            "Case4_trivial" => Ok(CaseTag::Case4Trivial),
            _ => {
                let inner = s.strip_prefix("Nontrivial(").and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
                let (d, p) = inner.split_once(',').ok_or_else(bad)?;
                Ok(CaseTag::Nontrivial {
                    d: d.trim().parse().map_err(|_| bad())?,
                    p: p.trim().parse().map_err(|_| bad())?,
                })
            }
        }
    }
}

impl Serialize for CaseTag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CaseTag {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ReducedForm {
    Hypergeometric(HypergeometricForm),
    Quadrature(QuadratureDescriptor),
}

impl ReducedForm {
    pub fn as_hypergeometric(&self) -> Option<&HypergeometricForm> {
        match self {
            ReducedForm::Hypergeometric(f) => Some(f),
            ReducedForm::Quadrature(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionEntry {
    pub case: CaseTag,
    /// The conditions that hold, human readable.
    pub conditions: Vec<String>,
    pub form: ReducedForm,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ReductionReport {
    pub entries: Vec<ReductionEntry>,
}

impl ReductionReport {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn has(&self, case: CaseTag) -> bool {
        self.find(case).is_some()
    }

    pub fn find(&self, case: CaseTag) -> Option<&ReductionEntry> {
        self.entries.iter().find(|e| e.case == case)
    }

    pub fn has_trivial(&self) -> bool {
        self.entries.iter().any(|e| !matches!(e.case, CaseTag::Nontrivial { .. }))
    }
}

/// Collects condition outcomes: the satisfied ones for the report, the
/// failed ones for the error.
struct Conditions {
    tol: f64,
    held: Vec<String>,
    failed: Vec<String>,
}

impl Conditions {
    fn new(tol: f64) -> Self {
        Conditions { tol, held: Vec::new(), failed: Vec::new() }
    }

    fn eq(&mut self, label: &str, lhs: C64, rhs: C64) -> &mut Self {
        if approx_eq(lhs, rhs, self.tol) {
            self.held.push(label.to_string());
        } else {
            self.failed.push(format!("{label} fails: {} vs {}", fmt_c64(lhs), fmt_c64(rhs)));
        }
        self
    }

    fn finish(&mut self) -> Result<Vec<String>, Error> {
        if self.failed.is_empty() {
            Ok(core::mem::take(&mut self.held))
        } else {
            Err(Error::ConditionsViolated(core::mem::take(&mut self.failed)))
        }
    }
}

fn case1_conditions(p: &HeunParams, tol: f64) -> Result<Vec<String>, Error> {
    Conditions::new(tol)
        .eq("ε = 0", p.epsilon(), C64::zero())
        .eq("q = abd", p.q(), p.a() * p.b() * p.d())
        .finish()
}

/// `ε = 0, q = abd`: the factor `z - d` cancels, leaving `F(a, b; Γ; z)`.
pub fn reduce_case1(p: &HeunParams, tol: f64) -> Result<HypergeometricForm, Error> {
    case1_conditions(p, tol)?;
    Ok(HypergeometricForm::plain(p.a(), p.b(), p.gamma()))
}

fn case2_conditions(p: &HeunParams, tol: f64) -> Result<Vec<String>, Error> {
    Conditions::new(tol).eq("Δ = 0", p.delta(), C64::zero()).eq("q = ab", p.q(), p.a() * p.b()).finish()
}

/// `Δ = 0, q = ab`: the factor `z - 1` cancels, leaving `F(a, b; Γ; z/d)`.
pub fn reduce_case2(p: &HeunParams, tol: f64) -> Result<HypergeometricForm, Error> {
    case2_conditions(p, tol)?;
    let arg = RationalMap::new(vec![C64::zero(), p.d().inv()], vec![C64::one()])?;
    Ok(HypergeometricForm::new(p.a(), p.b(), p.gamma(), arg, PowerPrefactor::one()))
}

fn case3_conditions(p: &HeunParams, tol: f64) -> Result<Vec<String>, Error> {
    Conditions::new(tol).eq("Γ = 0", p.gamma(), C64::zero()).eq("q = 0", p.q(), C64::zero()).finish()
}

/// `Γ = 0, q = 0`: the origin becomes an ordinary point and the singular
/// points `1, d, ∞` go to `0, 1, ∞` under `(z - 1)/(d - 1)`, giving
/// `F(a, b; Δ; (z - 1)/(d - 1))`.
///
/// This is one solution, not the one normalized at the origin.
pub fn reduce_case3(p: &HeunParams, tol: f64) -> Result<HypergeometricForm, Error> {
    case3_conditions(p, tol)?;
    let s = (p.d() - 1.0).inv();
    let arg = RationalMap::new(vec![-s, s], vec![C64::one()])?;
    Ok(HypergeometricForm::new(p.a(), p.b(), p.delta(), arg, PowerPrefactor::one()))
}

fn case4_conditions(p: &HeunParams, tol: f64) -> Result<Vec<String>, Error> {
    Conditions::new(tol).eq("ab = 0", p.a() * p.b(), C64::zero()).eq("q = 0", p.q(), C64::zero()).finish()
}

/// `ab = 0, q = 0`: `H'` solves a first-order equation, so `H` is a quadrature.
pub fn reduce_case4(p: &HeunParams, tol: f64) -> Result<QuadratureDescriptor, Error> {
    case4_conditions(p, tol)?;
    Ok(QuadratureDescriptor::from_params(p))
}

fn harmonic_conditions(p: &HeunParams, tol: f64) -> Result<Vec<String>, Error> {
    Conditions::new(tol)
        .eq("d = -1", p.d(), real(-1.0))
        .eq("q = 0", p.q(), C64::zero())
        .eq("Δ = (a + b - Γ + 1)/2", p.delta(), (p.a() + p.b() - p.gamma() + 1.0) / 2.0)
        .finish()
}

/// `H(-1, 0; a, b, Γ, (a+b-Γ+1)/2; z) = F(a/2, b/2; (Γ+1)/2; z²)`
pub fn reduce_harmonic_d_minus1(p: &HeunParams, tol: f64) -> Result<HypergeometricForm, Error> {
    harmonic_conditions(p, tol)?;
    let arg = RationalMap::polynomial(vec![C64::zero(), C64::zero(), C64::one()])?;
    Ok(HypergeometricForm::new(p.a() / 2.0, p.b() / 2.0, (p.gamma() + 1.0) / 2.0, arg, PowerPrefactor::one()))
}

fn quartic_conditions(p: &HeunParams, tol: f64) -> Result<Vec<String>, Error> {
    let s = p.a() + p.b();
    Conditions::new(tol)
        .eq("d = 2", p.d(), real(2.0))
        .eq("q = ab", p.q(), p.a() * p.b())
        .eq("Γ = (a + b + 2)/4", p.gamma(), (s + 2.0) / 4.0)
        .eq("Δ = (a + b)/2", p.delta(), s / 2.0)
        .finish()
}

/// `H(2, ab; a, b, (a+b+2)/4, (a+b)/2; t) = F(a/4, b/4; (a+b+2)/4; 1 - 4[t(2-t) - 1/2]²)`
pub fn reduce_quartic_d2(p: &HeunParams, tol: f64) -> Result<HypergeometricForm, Error> {
    quartic_conditions(p, tol)?;
    // 1 - 4[t(2-t) - 1/2]² = 8t - 20t² + 16t³ - 4t⁴
    let arg = RationalMap::polynomial(vec![C64::zero(), real(8.0), real(-20.0), real(16.0), real(-4.0)])?;
    let c2 = (p.a() + p.b() + 2.0) / 4.0;
    Ok(HypergeometricForm::new(p.a() / 4.0, p.b() / 4.0, c2, arg, PowerPrefactor::one()))
}

fn cubic_conditions(p: &HeunParams, tol: f64) -> Result<Vec<String>, Error> {
    Conditions::new(tol)
        .eq("d = 4", p.d(), real(4.0))
        .eq("q = ab", p.q(), p.a() * p.b())
        .eq("Γ = 1/2", p.gamma(), real(0.5))
        .eq("Δ = 2(a + b)/3", p.delta(), 2.0 * (p.a() + p.b()) / 3.0)
        .finish()
}

/// `H(4, ab; a, b, 1/2, 2(a+b)/3; z) = F(a/3, b/3; 1/2; 1 - (z-1)²(1 - z/4))`
pub fn reduce_cubic_d4(p: &HeunParams, tol: f64) -> Result<HypergeometricForm, Error> {
    cubic_conditions(p, tol)?;
    // 1 - (z-1)²(1 - z/4) = 9z/4 - 3z²/2 + z³/4
    let arg = RationalMap::polynomial(vec![C64::zero(), real(2.25), real(-1.5), real(0.25)])?;
    Ok(HypergeometricForm::new(p.a() / 3.0, p.b() / 3.0, real(0.5), arg, PowerPrefactor::one()))
}

/// `d = 1/2, q = ab/2`. No direct formula: the pair is moved to `d = 2`
/// (line 9) or `d = -1` (line 5) and reduced there, for either ordering of
/// `a, b`.
pub fn reduce_half_half(p: &HeunParams, tol: f64) -> Result<HypergeometricForm, Error> {
    let mut conditions = Conditions::new(tol);
    conditions.eq("d = 1/2", p.d(), real(0.5)).eq("q = ab/2", p.q(), p.a() * p.b() / 2.0);
    conditions.finish()?;
    let mut failures = Vec::new();
    for ordering in [*p, p.swap_ab()] {
        let via_quartic = apply_line9(&ordering).and_then(|t| reduce_quartic_d2(&t.params, tol)?.pull_back(&t));
        let via_harmonic = apply_line5(&ordering).and_then(|t| reduce_harmonic_d_minus1(&t.params, tol)?.pull_back(&t));
        for attempt in [via_quartic, via_harmonic] {
            match attempt {
                Ok(form) => return Ok(form),
                Err(Error::ConditionsViolated(v)) => failures.extend(v),
                Err(e) => return Err(e),
            }
        }
    }
    Err(Error::ConditionsViolated(failures))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CatalogPair {
    pub d: f64,
    pub p: f64,
    /// Degree of `R`; `None` when it depends on the transport route.
    pub degree: Option<u8>,
}

/// The `(d, p)` pairs with an implemented reduction.
pub fn catalog_pairs() -> Vec<CatalogPair> {
    vec![
        CatalogPair { d: -1.0, p: 0.0, degree: Some(2) },
        CatalogPair { d: 0.5, p: 0.5, degree: None },
        CatalogPair { d: 2.0, p: 1.0, degree: Some(4) },
        CatalogPair { d: 4.0, p: 1.0, degree: Some(3) },
    ]
}

fn reduce_pair(pair: &CatalogPair, p: &HeunParams, tol: f64) -> Result<HypergeometricForm, Error> {
    match (pair.d, pair.p) {
        (-1.0, _) => reduce_harmonic_d_minus1(p, tol),
        (0.5, _) => reduce_half_half(p, tol),
        (2.0, _) => reduce_quartic_d2(p, tol),
        _ => reduce_cubic_d4(p, tol),
    }
}

/// The nontrivial reduction for `pair`, trying every identity route to
/// `pair.d` and both orderings of `a, b`. Returns the form for `H_p` and a
/// description of the route that worked.
pub fn reduce_nontrivial(p: &HeunParams, pair: &CatalogPair, tol: f64) -> Result<(HypergeometricForm, Vec<String>), Error> {
    let mut failures = Vec::new();
    for (ordering, swapped) in [(*p, false), (p.swap_ab(), true)] {
        for route in routes_to(&ordering, real(pair.d), TOL_EXACT) {
            match reduce_pair(pair, &route.params, tol).and_then(|f| f.pull_back(&route)) {
                Ok(form) => {
                    let mut conditions = vec![format!("q = ab·{} after transport", pair.p)];
                    if !route.steps.is_empty() {
                        let steps: Vec<&str> = route.steps.iter().map(|s| s.name()).collect();
                        conditions.push(format!("route: {}", steps.join(" then ")));
                    }
                    if swapped {
                        conditions.push(String::from("a and b interchanged"));
                    }
                    return Ok((form, conditions));
                }
                Err(Error::ConditionsViolated(v)) => failures.extend(v),
                Err(_) => {}
            }
        }
    }
    if failures.is_empty() {
        failures.push(format!("d = {} is not in the orbit of d = {}", pair.d, fmt_c64(p.d())));
    }
    Err(Error::ConditionsViolated(failures))
}

type ReduceFn = fn(&HeunParams, f64) -> Result<HypergeometricForm, Error>;
type ConditionsFn = fn(&HeunParams, f64) -> Result<Vec<String>, Error>;

/// Every case whose conditions hold within `tol`.
pub fn detect_cases(p: &HeunParams, tol: f64) -> ReductionReport {
    let mut entries = Vec::new();
    let trivial: [(CaseTag, ReduceFn, ConditionsFn); 3] = [
        (CaseTag::Case1Eps0, reduce_case1, case1_conditions),
        (CaseTag::Case2Delta0, reduce_case2, case2_conditions),
        (CaseTag::Case3Gamma0, reduce_case3, case3_conditions),
    ];
    for (case, reduce, conditions) in trivial {
        if let (Ok(form), Ok(conditions)) = (reduce(p, tol), conditions(p, tol)) {
            let mut notes = Vec::new();
            if form.degenerate {
                notes.push(format!("c = {} is a non-positive integer; form not evaluated", fmt_c64(form.c2)));
            }
            if case == CaseTag::Case3Gamma0 {
                notes.push(String::from("origin is an ordinary point; the form is one solution, not the one normalized at 0"));
            }
            entries.push(ReductionEntry { case, conditions, form: ReducedForm::Hypergeometric(form), notes });
        }
    }
    if let (Ok(form), Ok(conditions)) = (reduce_case4(p, tol), case4_conditions(p, tol)) {
        entries.push(ReductionEntry {
            case: CaseTag::Case4Trivial,
            conditions,
            form: ReducedForm::Quadrature(form),
            notes: vec![String::from("H = C1 + C2 ∫ z^(-Γ) (z-1)^(-Δ) (z-d)^(-ε) dz; constants solve the equation")],
        });
    }
    for pair in catalog_pairs() {
        if let Ok((form, conditions)) = reduce_nontrivial(p, &pair, tol) {
            let mut notes = Vec::new();
            if form.degenerate {
                notes.push(format!("c = {} is a non-positive integer; form not evaluated", fmt_c64(form.c2)));
            }
            entries.push(ReductionEntry {
                case: CaseTag::Nontrivial { d: pair.d, p: pair.p },
                conditions,
                form: ReducedForm::Hypergeometric(form),
                notes,
            });
        }
    }
    ReductionReport { entries }
}

/// [`detect_cases`] at the default condition tolerance.
pub fn detect(p: &HeunParams) -> ReductionReport {
    detect_cases(p, TOL_CONDITION)
}
