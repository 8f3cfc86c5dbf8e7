use super::gauss::{gauss_2f1, gauss_2f1_jet};
use super::Jet;
use crate::error::Error;
use crate::reduction::HypergeometricForm;
use crate::scalar::{fmt_c64, C64};

fn check(f: &HypergeometricForm) -> Result<(), Error> {
    if f.degenerate {
        return Err(Error::DegenerateC(fmt_c64(f.c2)));
    }
    Ok(())
}

/// `prefactor(z) · F(a2, b2; c2; R(z))`
pub fn eval_hyp_form(f: &HypergeometricForm, z: C64) -> Result<C64, Error> {
    check(f)?;
    let x = f.arg_map.eval(z);
    Ok(f.prefactor.eval(z) * gauss_2f1(f.a2, f.b2, f.c2, x)?)
}

/// Value and two derivatives in `z` by the chain rule.
pub fn hyp_form_jet(f: &HypergeometricForm, z: C64) -> Result<Jet, Error> {
    check(f)?;
    let (r, r1, r2) = f.arg_map.jet(z);
    let (g, g1, g2) = gauss_2f1_jet(f.a2, f.b2, f.c2, r)?;
    let (p, p1, p2) = f.prefactor.jet(z);
    // u = F(R):  u' = F' R',  u'' = F'' R'² + F' R''
    let (u, u1, u2) = (g, g1 * r1, g2 * r1 * r1 + g1 * r2);
    Ok(Jet { value: p * u, d1: p1 * u + p * u1, d2: p2 * u + 2.0 * p1 * u1 + p * u2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{PowerPrefactor, RationalMap};
    use crate::scalar::real;
    use alloc::vec;

    fn cubic() -> HypergeometricForm {
        let r = RationalMap::polynomial(vec![real(0.0), real(2.25), real(-1.5), real(0.25)]).unwrap();
        HypergeometricForm::new(real(0.5), real(0.5), real(0.5), r, PowerPrefactor::one())
    }

    #[test]
    fn quantum_walk_form() {
        assert_eq!(eval_hyp_form(&cubic(), real(0.0)).unwrap(), real(1.0));
        let v = eval_hyp_form(&cubic(), real(0.5)).unwrap();
        assert!((v - 2.0 / (0.5 * 3.5f64.sqrt())).norm() < 1e-13);
    }

    #[test]
    fn jet_against_closed_form() {
        // 2/((1-z)√(4-z)) and its derivatives
        let z = 0.3;
        let h = |z: f64| 2.0 / ((1.0 - z) * (4.0 - z).sqrt());
        let l1 = |z: f64| 1.0 / (1.0 - z) + 0.5 / (4.0 - z);
        let l2 = |z: f64| 1.0 / (1.0 - z).powi(2) + 0.5 / (4.0 - z).powi(2);
        let jet = hyp_form_jet(&cubic(), real(z)).unwrap();
        assert!((jet.value - h(z)).norm() < 1e-13);
        assert!((jet.d1 - h(z) * l1(z)).norm() < 1e-12);
        assert!((jet.d2 - h(z) * (l1(z) * l1(z) + l2(z))).norm() < 1e-11);
    }

    #[test]
    fn degenerate_form_refused() {
        let f = HypergeometricForm::plain(real(1.0), real(1.0), real(-2.0));
        assert!(f.degenerate);
        assert!(matches!(eval_hyp_form(&f, real(0.1)), Err(Error::DegenerateC(_))));
    }
}
