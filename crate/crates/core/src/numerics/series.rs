use alloc::vec::Vec;

use num_traits::{One, Zero};
#[allow(unused_imports)]
use num_traits::Float;

use super::Jet;
use crate::error::Error;
use crate::params::HeunParams;
use crate::scalar::{approx_zero, fmt_c64, nonpositive_integer, TOL_CONDITION, TOL_EXACT};
use crate::scalar::C64;

pub const DEFAULT_ORDER: usize = 128;

/// Truncated Frobenius series `Σ c_j z^j` of the exponent-zero solution at
/// the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesSolution {
    pub params: HeunParams,
    pub coefficients: Vec<C64>,
    pub order: usize,
    /// `min(1, |d|)`
    pub radius: f64,
}

/// Series normalized by `c_0 = 1`, `c_1 = q / (Γ d)`; later coefficients from
///
/// `d (j+1)(j+Γ) c_{j+1} = [j((j-1+Γ)(1+d) + dΔ + ε) + q] c_j - (j-1+a)(j-1+b) c_{j-1}`.
pub fn heun_series(p: &HeunParams, order: usize) -> Result<SeriesSolution, Error> {
    if nonpositive_integer(p.gamma(), TOL_EXACT).is_some() {
        return Err(Error::LogarithmicCase(fmt_c64(p.gamma())));
    }
    let c1 = p.q() / (p.gamma() * p.d());
    build(p, C64::one(), c1, order)
}

/// At `Γ = 0, q = 0` the origin is an ordinary point and both `H(0)` and
/// `H'(0)` are free; this builds the solution with the given initial data.
pub fn heun_series_ordinary(p: &HeunParams, value0: C64, slope0: C64, order: usize) -> Result<SeriesSolution, Error> {
    if !approx_zero(p.gamma(), TOL_CONDITION) || !approx_zero(p.q(), TOL_CONDITION) {
        return Err(Error::InvalidParams(alloc::format!(
            "origin is an ordinary point only for Γ = 0 and q = 0 (Γ = {}, q = {})",
            fmt_c64(p.gamma()),
            fmt_c64(p.q())
        )));
    }
    build(p, value0, slope0, order)
}

fn build(p: &HeunParams, c0: C64, c1: C64, order: usize) -> Result<SeriesSolution, Error> {
    if order < 2 {
        return Err(Error::InvalidInput(alloc::format!("series order must be at least 2, got {order}")));
    }
    let (d, q, a, b, g, dl, e) = (p.d(), p.q(), p.a(), p.b(), p.gamma(), p.delta(), p.epsilon());
    let mut c = Vec::with_capacity(order + 1);
    c.push(c0);
    c.push(c1);
    for j in 1..order {
        let jf = j as f64;
        let p_j = (jf - 1.0 + a) * (jf - 1.0 + b);
        let q_j = jf * ((jf - 1.0 + g) * (1.0 + d) + d * dl + e);
        let r_j = (jf + 1.0) * (jf + g);
        let next = ((q_j + q) * c[j] - p_j * c[j - 1]) / (d * r_j);
        c.push(next);
    }
    Ok(SeriesSolution { params: *p, coefficients: c, order, radius: p.series_radius() })
}

impl SeriesSolution {
    /// Evaluation is restricted to `|z| <= 0.5 * radius`.
    pub fn domain_limit(&self) -> f64 {
        0.5 * self.radius
    }

    pub fn in_domain(&self, z: C64) -> bool {
        z.norm() <= self.domain_limit() * (1.0 + 1e-12)
    }

    /// `|c_N| |z|^N / (1 - |z|/radius)`
    pub fn truncation_estimate(&self, z: C64) -> f64 {
        let n = self.order;
        let r = z.norm() / self.radius;
        let last = self.coefficients[n].norm() * z.norm().powi(n as i32);
        if r < 1.0 {
            last / (1.0 - r)
        } else {
            f64::INFINITY
        }
    }
}

/// Horner evaluation of the truncated series with first and second derivatives.
pub fn heun_eval(s: &SeriesSolution, z: C64) -> Result<Jet, Error> {
    if !s.in_domain(z) {
        return Err(Error::OutOfDomain { z: fmt_c64(z), limit: s.domain_limit() });
    }
    let (mut v, mut d1, mut half_d2) = (C64::zero(), C64::zero(), C64::zero());
    for c in s.coefficients.iter().rev() {
        half_d2 = half_d2 * z + d1;
        d1 = d1 * z + v;
        v = v * z + c;
    }
    Ok(Jet { value: v, d1, d2: 2.0 * half_d2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::make_params;
    use crate::scalar::{c64, real};

    fn qw() -> HeunParams {
        make_params(real(4.0), real(2.25), real(1.5), real(1.5), real(0.5), real(2.0)).unwrap()
    }

    #[test]
    fn normalization_and_first_coefficient() {
        let s = heun_series(&qw(), 16).unwrap();
        assert_eq!(s.coefficients[0], real(1.0));
        assert!((s.coefficients[1] - 1.125).norm() < 1e-15);
        assert_eq!(s.coefficients.len(), 17);
    }

    #[test]
    fn logarithmic_case_rejected() {
        let p = make_params(real(4.0), real(1.0), real(1.0), real(1.0), real(-1.0), real(2.0)).unwrap();
        assert!(matches!(heun_series(&p, 16), Err(Error::LogarithmicCase(_))));
        assert!(heun_series(&qw(), 1).is_err());
    }

    #[test]
    fn quantum_walk_closed_form() {
        let s = heun_series(&qw(), DEFAULT_ORDER).unwrap();
        let z = real(0.5);
        let exact = 2.0 / (0.5 * 3.5f64.sqrt());
        let h = heun_eval(&s, z).unwrap();
        assert!((h.value - exact).norm() < 1e-12 * exact);
        assert_eq!(heun_eval(&s, real(0.0)).unwrap().value, real(1.0));
        assert!(heun_eval(&s, real(1.0)).is_err());
        assert!(heun_eval(&s, c64(0.0, 0.51)).is_err());
    }

    #[test]
    fn ordinary_point_series() {
        let p = make_params(real(-1.0), real(0.0), real(1.5), real(0.5), real(0.0), real(2.0)).unwrap();
        let s = heun_series_ordinary(&p, real(2.0), real(-1.0), 32).unwrap();
        assert_eq!(s.coefficients[0], real(2.0));
        assert_eq!(s.coefficients[1], real(-1.0));
        assert!(heun_series_ordinary(&qw(), real(1.0), real(0.0), 32).is_err());
    }
}
