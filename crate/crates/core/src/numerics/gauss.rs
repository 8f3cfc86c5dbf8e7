use num_traits::{One, Zero};

use crate::error::Error;
use crate::scalar::{fmt_c64, nonpositive_integer, pow_principal, C64, TOL_EXACT};

/// Direct series summation is used for `|x| <= GAUSS_SERIES_LIMIT`; beyond that
/// the Pfaff transform is tried, then continuation along the ray from 0.
pub const GAUSS_SERIES_LIMIT: f64 = 0.9;

const MAX_TERMS: usize = 20_000;
const MAX_STEPS: usize = 2_000;
const TAYLOR_TERMS: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesSum {
    pub value: C64,
    /// Bound on the neglected tail from the last term and the term ratio.
    pub truncation: f64,
    pub terms: usize,
}

/// Plain Gauss series `Σ (a)_n (b)_n / (c)_n x^n / n!` for `|x| < 1`.
pub fn gauss_2f1_series(a: C64, b: C64, c: C64, x: C64) -> Result<SeriesSum, Error> {
    if nonpositive_integer(c, TOL_EXACT).is_some() {
        return Err(Error::DegenerateC(fmt_c64(c)));
    }
    if x.norm() >= 1.0 {
        return Err(Error::OutOfDomain { z: fmt_c64(x), limit: 1.0 });
    }
    let mut sum = C64::one();
    let mut term = C64::one();
    let mut scale = 1.0f64;
    // the ratio can dip below 1 early when a + n or b + n is small
    let warmup = (a.norm() + b.norm() + c.norm()) as usize + 2;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        let ratio = (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * x;
        term *= ratio;
        if term == C64::zero() {
            return Ok(SeriesSum { value: sum, truncation: 0.0, terms: n + 1 });
        }
        sum += term;
        scale = scale.max(sum.norm());
        let rho = ratio.norm();
        if n > warmup && rho < 1.0 && term.norm() <= f64::EPSILON * 0.25 * scale {
            let truncation = term.norm() * rho / (1.0 - rho);
            return Ok(SeriesSum { value: sum, truncation, terms: n + 1 });
        }
    }
    Err(Error::NotConverged(MAX_TERMS))
}

/// Gauss hypergeometric function, principal branch (cut along `[1, ∞)`).
///
/// Uses the series on `|x| <= 0.9`, then
/// `F(a,b;c;x) = (1-x)^(-a) F(a, c-b; c; x/(x-1))` where `|x/(x-1)| <= 0.9`,
/// and otherwise integrates the hypergeometric equation along the ray from the
/// origin to `x`.
pub fn gauss_2f1(a: C64, b: C64, c: C64, x: C64) -> Result<C64, Error> {
    if nonpositive_integer(c, TOL_EXACT).is_some() {
        return Err(Error::DegenerateC(fmt_c64(c)));
    }
    if x.norm() <= GAUSS_SERIES_LIMIT {
        return Ok(gauss_2f1_series(a, b, c, x)?.value);
    }
    let w = x / (x - 1.0);
    if w.norm() <= GAUSS_SERIES_LIMIT {
        let f = gauss_2f1_series(a, c - b, c, w)?.value;
        return Ok(pow_principal(1.0 - x, -a) * f);
    }
    Ok(continue_along_ray(a, b, c, x)?.0)
}

/// `(F, F', F'')` with respect to `x`, from the contiguous shifts
/// `F' = ab/c F(a+1, b+1; c+1)`, or from the equation itself when `x` is
/// reached by continuation.
pub fn gauss_2f1_jet(a: C64, b: C64, c: C64, x: C64) -> Result<(C64, C64, C64), Error> {
    if nonpositive_integer(c, TOL_EXACT).is_some() {
        return Err(Error::DegenerateC(fmt_c64(c)));
    }
    if x.norm() <= GAUSS_SERIES_LIMIT || (x / (x - 1.0)).norm() <= GAUSS_SERIES_LIMIT {
        let f = gauss_2f1(a, b, c, x)?;
        let f1 = a * b / c * gauss_2f1(a + 1.0, b + 1.0, c + 1.0, x)?;
        let f2 = a * (a + 1.0) * b * (b + 1.0) / (c * (c + 1.0)) * gauss_2f1(a + 2.0, b + 2.0, c + 2.0, x)?;
        return Ok((f, f1, f2));
    }
    let (f, f1) = continue_along_ray(a, b, c, x)?;
    // x(1-x)F'' + [c - (a+b+1)x]F' - abF = 0
    let f2 = (a * b * f - (c - (a + b + 1.0) * x) * f1) / (x * (1.0 - x));
    Ok((f, f1, f2))
}

/// `(F, F')` at `x` by Taylor steps of the hypergeometric equation from
/// `|x₀| = 1/2` on the same ray. Each step stays within half the distance to
/// the nearest singular point, so every local series converges like `2^-k`.
fn continue_along_ray(a: C64, b: C64, c: C64, x: C64) -> Result<(C64, C64), Error> {
    if x.im == 0.0 && x.re >= 1.0 {
        return Err(Error::OutOfDomain { z: fmt_c64(x), limit: 1.0 });
    }
    let mut x0 = x * (0.5 / x.norm());
    let mut y = gauss_2f1_series(a, b, c, x0)?.value;
    let mut dy = a * b / c * gauss_2f1_series(a + 1.0, b + 1.0, c + 1.0, x0)?.value;
    for _ in 0..MAX_STEPS {
        let left = x - x0;
        let reach = 0.5 * x0.norm().min((1.0 - x0).norm());
        let last = left.norm() <= reach;
        let h = if last { left } else { left * (reach / left.norm()) };
        (y, dy) = taylor_step(a, b, c, x0, y, dy, h)?;
        x0 += h;
        if last {
            return Ok((y, dy));
        }
    }
    Err(Error::NotConverged(MAX_STEPS))
}

/// Local series `Σ y_k t^k` at the ordinary point `x₀` with
/// `x₀(1-x₀)(k+2)(k+1) y_{k+2} = -(k+1)[(1-2x₀)k + c - (a+b+1)x₀] y_{k+1}
///  + [k(k-1) + (a+b+1)k + ab] y_k`,
/// summed at `t = h` together with its derivative.
fn taylor_step(a: C64, b: C64, c: C64, x0: C64, y0: C64, dy0: C64, h: C64) -> Result<(C64, C64), Error> {
    let p0 = x0 * (1.0 - x0);
    let p1 = 1.0 - 2.0 * x0;
    let q0 = c - (a + b + 1.0) * x0;
    let s = a + b + 1.0;
    let ab = a * b;
    let (mut prev, mut cur) = (y0, dy0);
    // hp = h^k for the coefficient `prev = y_k`
    let mut hp = C64::one();
    let (mut value, mut slope) = (y0, C64::zero());
    let mut quiet = 0;
    for k in 0..TAYLOR_TERMS {
        let kf = k as f64;
        let next = ((kf * (kf - 1.0) + s * kf + ab) * prev - (kf + 1.0) * (p1 * kf + q0) * cur) / (p0 * (kf + 2.0) * (kf + 1.0));
        // y_{k+1} t^{k+1} and its derivative contribution (k+1) y_{k+1} t^k
        let term = cur * hp * h;
        value += term;
        slope += (kf + 1.0) * cur * hp;
        hp *= h;
        let size = term.norm() + ((kf + 1.0) * cur * hp).norm();
        quiet = if size <= f64::EPSILON * 0.25 * (value.norm() + slope.norm() * h.norm()) { quiet + 1 } else { 0 };
        if quiet >= 3 {
            return Ok((value, slope));
        }
        (prev, cur) = (cur, next);
    }
    Err(Error::NotConverged(TAYLOR_TERMS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{c64, real};

    #[test]
    fn value_at_zero() {
        assert_eq!(gauss_2f1(c64(0.3, 1.0), real(2.0), real(0.7), real(0.0)).unwrap(), real(1.0));
    }

    #[test]
    fn closed_forms() {
        let f = gauss_2f1(real(0.5), real(0.5), real(0.5), real(0.75)).unwrap();
        assert!((f - 2.0).norm() < 1e-13);
        let f = gauss_2f1(real(1.0), real(1.0), real(2.0), real(0.5)).unwrap();
        assert!((f - 2.0 * core::f64::consts::LN_2).norm() < 1e-14);
    }

    #[test]
    fn pfaff_region() {
        // (1 - x)^(-a) for F(a, b; b; x) at x = -2.5, outside the series disc
        let a = c64(0.3, 0.2);
        let x = real(-2.5);
        let f = gauss_2f1(a, real(1.7), real(1.7), x).unwrap();
        assert!((f - pow_principal(1.0 - x, -a)).norm() < 1e-13);
    }

    #[test]
    fn continuation_near_one() {
        // -ln(1-x)/x, where neither the series nor the Pfaff transform reach
        for x in [real(0.95), c64(1.0, 0.4), c64(1.2, -0.05), c64(0.6, 0.85)] {
            let exact = -(1.0 - x).ln() / x;
            let f = gauss_2f1(real(1.0), real(1.0), real(2.0), x).unwrap();
            assert!((f - exact).norm() < 1e-12 * exact.norm(), "{x}: {f} vs {exact}");
        }
        // (1-x)^(-a) with its derivatives from the equation
        let a = c64(0.3, -0.6);
        let x = c64(1.1, 0.3);
        let (f, f1, f2) = gauss_2f1_jet(a, real(0.8), real(0.8), x).unwrap();
        let u = 1.0 - x;
        assert!((f - pow_principal(u, -a)).norm() < 1e-12);
        assert!((f1 - a * pow_principal(u, -a - 1.0)).norm() < 1e-11);
        assert!((f2 - a * (a + 1.0) * pow_principal(u, -a - 2.0)).norm() < 1e-10);
        assert!(gauss_2f1(real(1.0), real(1.0), real(2.0), real(1.5)).is_err());
    }

    #[test]
    fn terminating_and_degenerate() {
        // F(-2, b; c; x) = 1 - 2bx/c + b(b+1)x²/(c(c+1))
        let (b, c, x) = (real(1.5), real(0.5), real(0.4));
        let exact = 1.0 - 2.0 * b * x / c + b * (b + 1.0) * x * x / (c * (c + 1.0));
        assert!((gauss_2f1(real(-2.0), b, c, x).unwrap() - exact).norm() < 1e-15);
        assert!(matches!(gauss_2f1(real(1.0), real(1.0), real(-1.0), x), Err(Error::DegenerateC(_))));
    }

    #[test]
    fn jet_matches_finite_differences() {
        let (a, b, c) = (c64(0.4, 0.1), real(1.3), c64(2.1, -0.2));
        let x = c64(0.3, 0.1);
        let (f, f1, f2) = gauss_2f1_jet(a, b, c, x).unwrap();
        let h = 1e-4;
        let fp = gauss_2f1(a, b, c, x + h).unwrap();
        let fm = gauss_2f1(a, b, c, x - h).unwrap();
        assert!((f1 - (fp - fm) / (2.0 * h)).norm() < 1e-7);
        assert!((f2 - (fp - 2.0 * f + fm) / (h * h)).norm() < 1e-5);
    }
}
