//! Complex scalars, tolerances and the `{"re", "im"}` JSON encoding.

use alloc::format;
use alloc::string::String;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

pub type C64 = Complex64;

/// Relative tolerance for "holds exactly" checks (Fuchsian constraint, d ∉ {0, 1}).
pub const TOL_EXACT: f64 = 1e-12;

/// Default relative tolerance for reduction conditions. Physics maps go
/// through square roots, so exact equality is out of reach.
pub const TOL_CONDITION: f64 = 1e-10;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn real(re: f64) -> C64 {
    C64::new(re, 0.0)
}

#[inline]
pub fn is_finite(z: C64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// `|x - y| <= tol * (1 + max(|x|, |y|))`
#[inline]
pub fn approx_eq(x: C64, y: C64, tol: f64) -> bool {
    (x - y).norm() <= tol * (1.0 + x.norm().max(y.norm()))
}

#[inline]
pub fn approx_zero(x: C64, tol: f64) -> bool {
    x.norm() <= tol
}

/// Returns `Some(k)` when `x` is within `tol` of the integer `-k`, `k >= 0`.
pub fn nonpositive_integer(x: C64, tol: f64) -> Option<u64> {
    if x.im.abs() > tol || x.re > tol {
        return None;
    }
    let r = x.re.round();
    if (x.re - r).abs() <= tol {
        Some((-r) as u64)
    } else {
        None
    }
}

/// Compact human-readable form: `1.5`, `-2i`, `0.5+1.25i`.
pub fn fmt_c64(z: C64) -> String {
    // display only: 12 significant digits, round-off noise printed as 0
    let scale = z.re.abs().max(z.im.abs());
    let clean = |v: f64| {
        if v == 0.0 || v.abs() < 1e-15 || v.abs() <= 1e-13 * scale {
            0.0
        } else if v.is_finite() {
            format!("{:.11e}", v).parse::<f64>().unwrap_or(v)
        } else {
            v
        }
    };
    let (re, im) = (clean(z.re), clean(z.im));
    if im == 0.0 {
        format!("{}", re)
    } else if re == 0.0 {
        format!("{}i", im)
    } else if im < 0.0 {
        format!("{}-{}i", re, -im)
    } else {
        format!("{}+{}i", re, im)
    }
}

/// Principal power `base^exponent` with the cut along the negative real axis.
#[inline]
pub fn pow_principal(base: C64, exponent: C64) -> C64 {
    if exponent == C64::new(0.0, 0.0) {
        return C64::new(1.0, 0.0);
    }
    if base == C64::new(0.0, 0.0) {
        return if exponent.re > 0.0 {
            C64::new(0.0, 0.0)
        } else {
            C64::new(f64::INFINITY, 0.0)
        };
    }
    (exponent * base.ln()).exp()
}

#[derive(serde::Serialize, serde::Deserialize)]
struct ReIm {
    re: f64,
    im: f64,
}

/// `#[serde(with = "serde_c64")]` encodes a complex scalar as `{"re": .., "im": ..}`.
pub mod serde_c64 {
    use super::{ReIm, C64};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
        ReIm { re: z.re, im: z.im }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
        let r = ReIm::deserialize(d)?;
        Ok(C64::new(r.re, r.im))
    }
}

pub mod serde_c64_vec {
    use super::{ReIm, C64};
    use alloc::vec::Vec;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(zs: &[C64], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<ReIm> = zs.iter().map(|z| ReIm { re: z.re, im: z.im }).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<C64>, D::Error> {
        let v = Vec::<ReIm>::deserialize(d)?;
        Ok(v.into_iter().map(|r| C64::new(r.re, r.im)).collect())
    }
}

pub mod serde_c64_opt {
    use super::{ReIm, C64};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Option<C64>, s: S) -> Result<S::Ok, S::Error> {
        z.map(|z| ReIm { re: z.re, im: z.im }).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<C64>, D::Error> {
        Ok(Option::<ReIm>::deserialize(d)?.map(|r| C64::new(r.re, r.im)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nonpositive_integers() {
        assert_eq!(nonpositive_integer(real(0.0), 1e-12), Some(0));
        assert_eq!(nonpositive_integer(real(-3.0), 1e-12), Some(3));
        assert_eq!(nonpositive_integer(real(-2.5), 1e-12), None);
        assert_eq!(nonpositive_integer(real(1.0), 1e-12), None);
        assert_eq!(nonpositive_integer(c64(-1.0, 1e-3), 1e-12), None);
    }

    #[test]
    fn formatting() {
        assert_eq!(fmt_c64(real(0.5)), "0.5");
        assert_eq!(fmt_c64(c64(0.0, -2.0)), "-2i");
        assert_eq!(fmt_c64(c64(1.0, -0.5)), "1-0.5i");
        assert_eq!(fmt_c64(c64(-0.0, 0.0)), "0");
    }

    #[test]
    fn principal_power_matches_sqrt() {
        let z = c64(-3.0, 0.5);
        let p = pow_principal(z, real(0.5));
        assert!((p - z.sqrt()).norm() < 1e-14);
        assert_eq!(pow_principal(real(0.0), real(0.0)), real(1.0));
    }
}
