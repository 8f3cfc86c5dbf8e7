//! Grid certification of reductions, identities and solutions.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Zero;
#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::identities::{apply, IdentityId};
use crate::numerics::{
    heun_eval, heun_operator, heun_series, heun_series_ordinary, hyp_form_jet, Jet, QuadratureSolution, SeriesSolution,
};
use crate::params::HeunParams;
use crate::reduction::HypergeometricForm;
use crate::scalar::{approx_zero, fmt_c64, serde_c64_vec, C64, TOL_CONDITION};

/// Where to place the comparison points. `ρ` is supplied by the caller as
/// the smallest convergence radius of the two sides.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridSpec {
    /// First-kind Chebyshev points on `[-fraction·ρ, fraction·ρ]`, rotated by
    /// `angle` radians into the complex plane.
    Chebyshev { points: usize, fraction: f64, angle: f64 },
    /// Chebyshev points on the segment `from → to`, independent of `ρ`.
    Segment {
        #[serde(with = "crate::scalar::serde_c64")]
        from: C64,
        #[serde(with = "crate::scalar::serde_c64")]
        to: C64,
        points: usize,
    },
    Explicit(#[serde(with = "serde_c64_vec")] Vec<C64>),
}

pub const DEFAULT_GRID_POINTS: usize = 21;
pub const DEFAULT_GRID_FRACTION: f64 = 0.4;

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec::Chebyshev { points: DEFAULT_GRID_POINTS, fraction: DEFAULT_GRID_FRACTION, angle: 0.0 }
    }
}

fn chebyshev_unit(n: usize) -> impl Iterator<Item = f64> {
    // ascending order
    (0..n).map(move |k| -(PI * (2 * k + 1) as f64 / (2 * n) as f64).cos())
}

impl GridSpec {
    pub fn with_points(points: usize) -> Self {
        GridSpec::Chebyshev { points, fraction: DEFAULT_GRID_FRACTION, angle: 0.0 }
    }

    pub fn points(&self, rho: f64) -> Vec<C64> {
        match self {
            GridSpec::Chebyshev { points, fraction, angle } => {
                let dir = C64::from_polar(fraction * rho, *angle);
                chebyshev_unit(*points).map(|x| dir * x).collect()
            }
            GridSpec::Segment { from, to, points } => {
                let (mid, half) = ((*from + *to) * 0.5, (*to - *from) * 0.5);
                chebyshev_unit(*points).map(|x| mid + half * x).collect()
            }
            GridSpec::Explicit(z) => z.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    #[serde(with = "serde_c64_vec")]
    pub grid: Vec<C64>,
    pub rel_errors: Vec<f64>,
    pub max_rel_err: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Largest series tail bound over the grid, zero when no series is involved.
    pub truncation_estimate: f64,
    pub notes: Vec<String>,
}

impl VerificationReport {
    fn assemble(grid: Vec<C64>, rel_errors: Vec<f64>, tolerance: f64, truncation: f64, notes: Vec<String>) -> Result<Self, Error> {
        if grid.is_empty() {
            return Err(Error::EmptyGrid);
        }
        // NaN compares false, so a NaN error must fail explicitly
        let max_rel_err = rel_errors.iter().fold(0.0f64, |m, e| if e.is_nan() { f64::NAN } else { m.max(*e) });
        let pass = max_rel_err <= tolerance;
        Ok(VerificationReport { grid, rel_errors, max_rel_err, tolerance, pass, truncation_estimate: truncation, notes })
    }
}

/// Anything that yields a value with two derivatives at a point.
pub trait Evaluator {
    fn jet(&self, z: C64) -> Result<Jet, Error>;

    /// Tail bound of a truncated expansion at `z`; zero for exact evaluators.
    fn truncation(&self, _z: C64) -> f64 {
        0.0
    }
}

impl Evaluator for SeriesSolution {
    fn jet(&self, z: C64) -> Result<Jet, Error> {
        heun_eval(self, z)
    }

    fn truncation(&self, z: C64) -> f64 {
        self.truncation_estimate(z)
    }
}

impl Evaluator for HypergeometricForm {
    fn jet(&self, z: C64) -> Result<Jet, Error> {
        hyp_form_jet(self, z)
    }
}

impl Evaluator for QuadratureSolution {
    fn jet(&self, z: C64) -> Result<Jet, Error> {
        QuadratureSolution::jet(self, z)
    }
}

/// Wraps a closure as an [`Evaluator`].
pub struct FnEvaluator<F>(pub F);

impl<F: Fn(C64) -> Result<Jet, Error>> Evaluator for FnEvaluator<F> {
    fn jet(&self, z: C64) -> Result<Jet, Error> {
        (self.0)(z)
    }
}

fn is_domain_error(e: &Error) -> bool {
    matches!(e, Error::OutOfDomain { .. } | Error::SingularPoint(_))
}

/// `|L - R| / max(1, |L|)` at each point where both sides evaluate. Points
/// outside either side's domain are dropped and noted; other errors abort.
pub fn compare(lhs: &dyn Evaluator, rhs: &dyn Evaluator, grid: &[C64], tol: f64) -> Result<VerificationReport, Error> {
    let mut kept = Vec::with_capacity(grid.len());
    let mut errors = Vec::with_capacity(grid.len());
    let mut notes = Vec::new();
    let mut truncation = 0.0f64;
    for &z in grid {
        let pair = lhs.jet(z).and_then(|l| rhs.jet(z).map(|r| (l, r)));
        match pair {
            Ok((l, r)) => {
                kept.push(z);
                errors.push((l.value - r.value).norm() / l.value.norm().max(1.0));
                truncation = truncation.max(lhs.truncation(z)).max(rhs.truncation(z));
            }
            Err(e) if is_domain_error(&e) => notes.push(format!("dropped z = {}: {e}", fmt_c64(z))),
            Err(e) => return Err(e),
        }
    }
    VerificationReport::assemble(kept, errors, tol, truncation, notes)
}

/// The Heun side of a reduction: the Frobenius series at 0, or, when the
/// origin is an ordinary point, the series through the form's own data at 0.
fn heun_side(p: &HeunParams, f: &HypergeometricForm, order: usize) -> Result<(SeriesSolution, Option<String>), Error> {
    if approx_zero(p.gamma(), TOL_CONDITION) && approx_zero(p.q(), TOL_CONDITION) {
        let at0 = hyp_form_jet(f, C64::zero())?;
        let s = heun_series_ordinary(p, at0.value, at0.d1, order)?;
        let note = format!(
            "origin is ordinary: Heun series built from H(0) = {}, H'(0) = {}",
            fmt_c64(at0.value),
            fmt_c64(at0.d1)
        );
        return Ok((s, Some(note)));
    }
    Ok((heun_series(p, order)?, None))
}

/// Compares the Heun series of `p` with `f` on the grid.
pub fn verify_reduction(
    p: &HeunParams,
    f: &HypergeometricForm,
    grid: &GridSpec,
    tol: f64,
    order: usize,
) -> Result<VerificationReport, Error> {
    if f.degenerate {
        return Err(Error::DegenerateC(fmt_c64(f.c2)));
    }
    let (series, note) = heun_side(p, f, order)?;
    let rho = series.radius.min(f.singular_radius());
    let mut report = compare(&series, f, &grid.points(rho), tol)?;
    report.notes.extend(note);
    Ok(report)
}

/// Series of the transformed parameters, composed with the identity's maps.
struct Transformed {
    series: SeriesSolution,
    t: crate::identities::TransformResult,
}

impl Evaluator for Transformed {
    fn jet(&self, z: C64) -> Result<Jet, Error> {
        // m(z) = αz/(γz + δ) since every identity fixes the origin
        let m = &self.t.arg_map;
        let w = m.apply(z);
        let inner = heun_eval(&self.series, w)?;
        let den = m.gamma * z + m.delta;
        let (w1, w2) = (m.det() / (den * den), -2.0 * m.gamma * m.det() / (den * den * den));
        let (u, u1, u2) = (inner.value, inner.d1 * w1, inner.d2 * w1 * w1 + inner.d1 * w2);
        let (pv, p1, p2) = self.t.prefactor.jet(z);
        Ok(Jet { value: pv * u, d1: p1 * u + pv * u1, d2: p2 * u + 2.0 * p1 * u1 + pv * u2 })
    }

    fn truncation(&self, z: C64) -> f64 {
        self.series.truncation_estimate(self.t.arg_map.apply(z)) * self.t.prefactor.eval(z).norm()
    }
}

/// Compares `H_p(z)` with `prefactor(z) · H_p'(m(z))`.
pub fn verify_identity(
    p: &HeunParams,
    id: IdentityId,
    grid: &GridSpec,
    tol: f64,
    order: usize,
) -> Result<VerificationReport, Error> {
    let t = apply(id, p)?;
    let lhs = heun_series(p, order)?;
    let series = heun_series(&t.params, order)?;
    // |m(z)| <= |α| r / (|δ| - |γ| r), so the disc of radius R'|δ|/(|α| + R'|γ|)
    // maps into the transformed disc of convergence
    let m = &t.arg_map;
    let r_inner = series.radius;
    let rho_rhs = r_inner * m.delta.norm() / (m.alpha.norm() + r_inner * m.gamma.norm());
    let rho = lhs.radius.min(rho_rhs);
    compare(&lhs, &Transformed { series, t }, &grid.points(rho), tol)
}

/// Residual of the Heun equation for the evaluator's jet, relative to `max(1, |H|)`.
/// Grid points within `1e-6` of a singular point are dropped and noted.
pub fn verify_solution(
    p: &HeunParams,
    evaluator: &dyn Evaluator,
    grid: &GridSpec,
    tol: f64,
) -> Result<VerificationReport, Error> {
    let singular = [C64::zero(), C64::new(1.0, 0.0), p.d()];
    let mut kept = Vec::new();
    let mut errors = Vec::new();
    let mut notes = Vec::new();
    let mut truncation = 0.0f64;
    for z in grid.points(p.series_radius()) {
        if singular.iter().any(|s| (z - s).norm() < 1e-6) {
            notes.push(format!("dropped z = {}: singular point of the equation", fmt_c64(z)));
            continue;
        }
        match evaluator.jet(z) {
            Ok(h) => {
                let r = heun_operator(p, &h, z)?;
                kept.push(z);
                errors.push(r.norm() / h.value.norm().max(1.0));
                truncation = truncation.max(evaluator.truncation(z));
            }
            Err(e) if is_domain_error(&e) => notes.push(format!("dropped z = {}: {e}", fmt_c64(z))),
            Err(e) => return Err(e),
        }
    }
    VerificationReport::assemble(kept, errors, tol, truncation, notes)
}
